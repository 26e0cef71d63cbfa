#include "mchit/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mchit::report {

namespace {

using nlohmann::json;

json optional_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

const char* pass_str(bool ok, bool color) {
  if (!color) return ok ? "PASS" : "FAIL";
  return ok ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

}  // namespace

AnalyzeResult analyze(const MarkovChain& chain, int j,
                      const AnalyzeOptions& opts) {
  AnalyzeResult r{};
  r.j = j;
  r.lemma = check_lemma_condition(chain, j, opts.horizon, opts.tol);

  SstResult ret = sst_from_return_probs(chain, j, opts.eps_tail, true);
  r.return_prob_valid = ret.sequence_valid;
  r.return_prob_diagnostic = ret.diagnostic;
  r.no_hit = check_no_hit_before_sst(chain, j, opts.horizon, opts.tol);

  SstResult fast = fastest_sst(chain, restricted_stationary(chain, j),
                               opts.eps_tail,
                               "pi restricted away from state " +
                                   chain.states()[j]);
  r.fastest = tv_report(chain, j, fast, opts.eps_tail, opts.thetas);

  r.dual = greedy_dual_row(chain, j);
  SstResult greedy_sst = dual_sst_dist(r.dual, opts.eps_tail);
  r.greedy = tv_report(chain, j, greedy_sst, opts.eps_tail, opts.thetas);
  r.regime = classify_greedy_case(chain, j);
  r.dual_mean_closed_form = dual_sst_mean(r.dual);

  r.worst_case = worst_case_sst(chain, opts.eps_tail, opts.ergodic_n);
  r.worst_state = check_worst_state_proposition(chain);
  if (opts.verify_ergodic && opts.ergodic_n)
    r.ergodic_tv = ergodic_average_tv(chain, j, *opts.ergodic_n);

  if (auto delta = io::match_two_state_delta(chain)) {
    r.two_state_delta = delta;
    double d = *delta;
    r.daly_bound = d * (1.0 - 2.0 * d) / (2.0 * (1.0 - d) * (1.0 - d));
  }

  r.all_pass = r.fastest.all_pass && r.greedy.all_pass &&
               r.worst_case.bound_holds;
  return r;
}

SweepResult sweep(const SweepOptions& opts) {
  if (opts.count < 1)
    throw Error(Errc::InvalidParameter, "count must be >= 1");
  if (opts.size < 2 || opts.size > 50)
    throw Error(Errc::InvalidParameter, "size must be between 2 and 50");

  SweepResult out{};
  out.min_tv_margin = std::numeric_limits<double>::infinity();
  out.max_dominance_gap = -std::numeric_limits<double>::infinity();
  out.min_mean1_margin = std::numeric_limits<double>::infinity();
  out.min_mean2_margin = std::numeric_limits<double>::infinity();
  out.min_remark_margin = std::numeric_limits<double>::infinity();

  SplitMix64 rng(opts.seed);
  for (int c = 0; c < opts.count; ++c) {
    MarkovChain chain = io::random_ergodic_chain(opts.size, rng);
    ++out.chains;
    if (check_worst_state_proposition(chain).applicable)
      ++out.proposition_applicable;
    for (int j = 0; j < chain.size(); ++j) {
      GreedyClass gc = classify_greedy_case(chain, j);
      switch (gc.regime) {
        case GreedyRegime::UniqueMinAtJ: ++out.regime_unique_min; break;
        case GreedyRegime::MinElsewhere: ++out.regime_min_elsewhere; break;
        case GreedyRegime::Degenerate: ++out.regime_degenerate; break;
      }
      SstResult fast = fastest_sst(chain, restricted_stationary(chain, j),
                                   opts.eps_tail);
      std::vector<const SstResult*> variants{&fast};
      std::optional<SstResult> greedy_sst;
      if (opts.include_greedy) {
        greedy_sst = dual_sst_dist(greedy_dual_row(chain, j), opts.eps_tail);
        variants.push_back(&*greedy_sst);
      }
      for (const SstResult* sst : variants) {
        BoundsReport rep = tv_report(chain, j, *sst, opts.eps_tail);
        ++out.reports;
        if (!rep.all_pass) {
          ++out.failed_reports;
          for (const std::string& f : rep.failures) {
            std::ostringstream os;
            os << "chain " << c << " state " << j << " ("
               << provenance_name(rep.sst_provenance) << "): " << f;
            out.failures.push_back(os.str());
          }
        }
        out.min_tv_margin =
            std::min(out.min_tv_margin,
                     rep.tv_bound - (rep.tv_exact - rep.tv_exact_error));
        out.max_dominance_gap =
            std::max(out.max_dominance_gap, rep.dominance.worst_gap);
        out.min_mean1_margin =
            std::min(out.min_mean1_margin, rep.mean_upper_1 - rep.mean_W);
        if (rep.mean_chain_full)
          out.min_mean2_margin = std::min(
              out.min_mean2_margin, rep.mean_upper_2 - rep.mean_upper_1);
        out.min_remark_margin = std::min(out.min_remark_margin,
                                         rep.mean_T - rep.sst_mean_lower);
      }
    }
  }
  return out;
}

SimulateResult simulate(const MarkovChain& chain, int j,
                        const SimulateOptions& opts) {
  if (opts.samples_per_replica < 1 || opts.replicas < 1)
    throw Error(Errc::InvalidParameter, "samples and replicas must be >= 1");
  SimConfig cfg{opts.seed, opts.replicas, opts.samples_per_replica};

  HittingResult h = hitting_time_dist(chain, j, opts.eps_tail);
  std::vector<long> w_samples = run_hitting_sim(chain, j, chain.pi(), cfg);
  GreedyDual gd = greedy_dual_row(chain, j);
  SstResult dual = dual_sst_dist(gd, opts.eps_tail);
  std::vector<long> t_samples = run_dual_sst_sim(gd, cfg);

  auto side = [](const std::vector<long>& samples, const IntDist& exact,
                 double exact_mean) {
    SimulateSide s{};
    s.samples = static_cast<long>(samples.size());
    double total = 0.0;
    for (long v : samples) total += double(v);
    s.empirical_mean = total / double(s.samples);
    s.exact_mean = exact_mean;
    s.tv = empirical_tv(samples, exact);
    double n = double(s.samples);
    double support = double(exact.n_max() + 1);
    s.threshold = 0.5 * std::sqrt(support / n) + 2.5 / std::sqrt(n);
    s.pass = s.tv <= s.threshold;
    return s;
  };
  SimulateResult out{};
  out.hitting = side(w_samples, h.dist, h.mean_kac);
  out.dual_sst = side(t_samples, dual.dist, dual_sst_mean(gd));
  out.all_pass = out.hitting.pass && out.dual_sst.pass;
  return out;
}

json to_json(const IntDist& d, long head) {
  json out;
  out["n_max"] = d.n_max();
  out["tail_bound"] = d.tail_bound();
  out["mean"] = d.mean();
  out["mean_tail_hint"] = d.mean_tail_hint();
  long k_hi = std::min(head, d.n_max() + 1);
  std::vector<double> pmf_head;
  for (long k = 0; k < k_hi; ++k) pmf_head.push_back(d.pmf(k));
  out["pmf_head"] = pmf_head;
  return out;
}

json to_json(const BoundsReport& r) {
  json out;
  out["sst_provenance"] = provenance_name(r.sst_provenance);
  out["pi_j"] = r.pi_j;
  out["mean_T"] = r.mean_T;
  out["mean_W"] = r.mean_W;
  out["tv_bound"] = r.tv_bound;
  out["tv_bound_error"] = r.tv_bound_error;
  out["tv_exact"] = r.tv_exact;
  out["tv_exact_error"] = r.tv_exact_error;
  out["dominance"] = {{"holds", r.dominance.holds},
                      {"worst_t", r.dominance.worst_t},
                      {"worst_gap", r.dominance.worst_gap}};
  out["mean_upper_1"] = r.mean_upper_1;
  out["mean_upper_2"] = r.mean_upper_2;
  out["mean_chain_full"] = r.mean_chain_full;
  out["mgf_checks"] = json::array();
  for (const MgfCheck& mc : r.mgf_checks) {
    json c;
    c["theta"] = mc.theta;
    c["gate"] = mc.gate;
    c["bound"] = optional_to_json(mc.bound);
    c["exact"] = mc.exact;
    c["certified"] = mc.certified;
    c["pass"] = mc.pass;
    out["mgf_checks"].push_back(c);
  }
  out["sst_mean_lower"] = r.sst_mean_lower;
  out["all_pass"] = r.all_pass;
  out["failures"] = r.failures;
  return out;
}

json to_json(const ConditionReport& r) {
  json out;
  out["holds"] = r.holds;
  out["horizon"] = r.horizon;
  out["horizon_capped"] = r.horizon_capped;
  out["worst_violation"] = r.worst_violation;
  if (r.first_t >= 0)
    out["first_violation"] = {{"t", r.first_t}, {"y", r.first_y}};
  else
    out["first_violation"] = nullptr;
  return out;
}

json to_json(const IdentityReport& r) {
  return {{"holds", r.holds},
          {"horizon", r.horizon},
          {"horizon_capped", r.horizon_capped},
          {"max_discrepancy", r.max_discrepancy},
          {"worst_t", r.worst_t}};
}

json to_json(const GreedyDual& gd, const MarkovChain& chain) {
  json out;
  out["j"] = gd.j;
  out["c"] = gd.coeffs;
  out["masses"] = gd.masses;
  json sets = json::array();
  for (const auto& set : gd.sets) {
    json labels = json::array();
    for (int l : set) labels.push_back(chain.states()[l]);
    sets.push_back(labels);
  }
  out["sets"] = sets;
  out["p_absorb"] = gd.p_absorb;
  out["p_stay"] = gd.p_stay;
  out["p_other"] = gd.p_other;
  return out;
}

json to_json(const GreedyClass& gc) {
  json out;
  out["regime"] = regime_name(gc.regime);
  out["alpha"] = optional_to_json(gc.alpha);
  out["beta"] = optional_to_json(gc.beta);
  out["gamma"] = optional_to_json(gc.gamma);
  return out;
}

json to_json(const WorstCaseSst& w) {
  json out;
  out["sst_means"] = w.sst_means;
  out["t_star"] = w.t_star;
  out["argmax_state"] = w.argmax_state;
  out["avg_hitting"] = w.avg_hitting;
  out["avg_hitting_bound"] = w.avg_hitting_bound;
  out["bound_holds"] = w.bound_holds;
  out["ergodic_avg_bound"] = optional_to_json(w.ergodic_avg_bound);
  return out;
}

json to_json(const WorstStateCheck& w) {
  json out;
  out["applicable"] = w.applicable;
  out["m"] = w.m ? json(*w.m) : json(nullptr);
  out["conclusion_holds"] =
      w.conclusion_holds ? json(*w.conclusion_holds) : json(nullptr);
  out["horizon"] = w.horizon;
  return out;
}

json to_json(const AnalyzeResult& r, const MarkovChain& chain) {
  json out;
  out["chain"] = {{"states", chain.states()},
                  {"size", chain.size()},
                  {"reversible", is_reversible(chain)}};
  out["state"] = chain.states()[r.j];
  out["state_index"] = r.j;
  out["pi_j"] = chain.pi()(r.j);
  out["lemma_condition"] = to_json(r.lemma);
  out["return_probability"] = {{"valid", r.return_prob_valid},
                               {"diagnostic", r.return_prob_diagnostic}};
  out["no_hit_before_sst"] = to_json(r.no_hit);
  out["reports"] = {{"fastest", to_json(r.fastest)},
                    {"greedy", to_json(r.greedy)}};
  out["greedy_dual"] = to_json(r.dual, chain);
  out["greedy_dual"]["mean_closed_form"] = r.dual_mean_closed_form;
  out["classification"] = to_json(r.regime);
  out["worst_case"] = to_json(r.worst_case);
  out["worst_state_proposition"] = to_json(r.worst_state);
  out["ergodic_tv"] = optional_to_json(r.ergodic_tv);
  if (r.two_state_delta) {
    out["comparison"] = {{"two_state_delta", *r.two_state_delta},
                         {"daly_tv_bound", *r.daly_bound},
                         {"tv_bound", r.fastest.tv_bound}};
  } else {
    out["comparison"] = nullptr;
  }
  out["all_pass"] = r.all_pass;
  return out;
}

json to_json(const SweepResult& r) {
  json out;
  out["chains"] = r.chains;
  out["reports"] = r.reports;
  out["failed_reports"] = r.failed_reports;
  out["proposition_applicable"] = r.proposition_applicable;
  out["regimes"] = {{"unique_min_at_j", r.regime_unique_min},
                    {"min_elsewhere", r.regime_min_elsewhere},
                    {"degenerate", r.regime_degenerate}};
  out["worst_margins"] = {{"min_tv_margin", r.min_tv_margin},
                          {"max_dominance_gap", r.max_dominance_gap},
                          {"min_mean1_margin", r.min_mean1_margin},
                          {"min_mean2_margin", r.min_mean2_margin},
                          {"min_remark_margin", r.min_remark_margin}};
  out["failures"] = r.failures;
  out["all_pass"] = r.failed_reports == 0;
  return out;
}

json to_json(const SimulateResult& r) {
  auto side = [](const SimulateSide& s) {
    return json{{"samples", s.samples},
                {"empirical_mean", s.empirical_mean},
                {"exact_mean", s.exact_mean},
                {"tv", s.tv},
                {"threshold", s.threshold},
                {"pass", s.pass}};
  };
  return {{"hitting", side(r.hitting)},
          {"dual_sst", side(r.dual_sst)},
          {"all_pass", r.all_pass}};
}

std::string render_table(const AnalyzeResult& r, const MarkovChain& chain,
                         bool color) {
  std::ostringstream os;
  os.precision(12);
  os << "state " << chain.states()[r.j] << " (index " << r.j
     << "), pi_j = " << chain.pi()(r.j) << "\n";
  os << "lemma condition      " << (r.lemma.holds ? "holds" : "fails")
     << " up to t=" << r.lemma.horizon
     << (r.lemma.horizon_capped ? " (capped)" : "")
     << ", worst violation " << r.lemma.worst_violation << "\n";
  os << "no-hit identity      " << (r.no_hit.holds ? "holds" : "fails")
     << ", max discrepancy " << r.no_hit.max_discrepancy << "\n";
  os << "return-prob SST      "
     << (r.return_prob_valid ? "valid" : r.return_prob_diagnostic) << "\n";

  auto block = [&](const char* name, const BoundsReport& b) {
    os << "\n[" << name << " SST]  " << pass_str(b.all_pass, color) << "\n";
    os << "  E T        = " << b.mean_T << "\n";
    os << "  E W        = " << b.mean_W << "\n";
    os << "  tv_bound   = " << b.tv_bound << " (+/- " << b.tv_bound_error
       << ")\n";
    os << "  tv_exact   = " << b.tv_exact << " (+/- " << b.tv_exact_error
       << ")\n";
    os << "  dominance  = " << (b.dominance.holds ? "holds" : "FAILS")
       << " (worst gap " << b.dominance.worst_gap << " at t="
       << b.dominance.worst_t << ")\n";
    os << "  mean chain : E W <= " << b.mean_upper_1 << " <= "
       << b.mean_upper_2
       << (b.mean_chain_full ? "" : "  [second bound n/a for this SST]")
       << "\n";
    os << "  E T lower  = " << b.sst_mean_lower << "\n";
    for (const MgfCheck& mc : b.mgf_checks) {
      os << "  mgf theta=" << mc.theta << "  gate=" << mc.gate;
      if (mc.bound)
        os << "  bound=" << *mc.bound << "  exact=" << mc.exact << "  "
           << pass_str(mc.pass, color);
      else
        os << "  (gate >= 1 or uncertified; no bound)";
      os << "\n";
    }
    for (const std::string& f : b.failures) os << "  FAILED: " << f << "\n";
  };
  block("fastest", r.fastest);
  block("greedy", r.greedy);

  os << "\n[greedy dual]\n";
  os << "  regime     = " << regime_name(r.regime.regime) << "\n";
  if (r.regime.alpha) os << "  alpha      = " << *r.regime.alpha << "\n";
  if (r.regime.beta) os << "  beta       = " << *r.regime.beta << "\n";
  if (r.regime.gamma) os << "  gamma      = " << *r.regime.gamma << "\n";
  os << "  p_absorb   = " << r.dual.p_absorb << "\n";
  os << "  p_stay     = " << r.dual.p_stay << "\n";
  os << "  p_other    = " << r.dual.p_other << "\n";
  os << "  E T (dual) = " << r.dual_mean_closed_form << "\n";
  os << "  steps      = " << r.dual.coeffs.size() << "\n";

  os << "\n[chain-level]\n";
  os << "  t*                = " << r.worst_case.t_star << " (state "
     << chain.states()[r.worst_case.argmax_state] << ")\n";
  os << "  avg hitting       = " << r.worst_case.avg_hitting << "\n";
  os << "  (|S|-1) t*        = " << r.worst_case.avg_hitting_bound << "  "
     << pass_str(r.worst_case.bound_holds, color) << "\n";
  if (r.worst_case.ergodic_avg_bound)
    os << "  ergodic avg bound = " << *r.worst_case.ergodic_avg_bound << "\n";
  if (r.ergodic_tv) os << "  ergodic avg TV    = " << *r.ergodic_tv << "\n";
  os << "  proposition       = "
     << (r.worst_state.applicable ? "applicable" : "not applicable");
  if (r.worst_state.applicable)
    os << " (m=" << chain.states()[*r.worst_state.m] << ", conclusion "
       << (*r.worst_state.conclusion_holds ? "holds" : "FAILS") << ")";
  os << "\n";

  if (r.two_state_delta) {
    os << "\n[comparison]\n";
    os << "  two-state delta     = " << *r.two_state_delta << "\n";
    os << "  Daly geometric bound= " << *r.daly_bound << "\n";
    os << "  this tv_bound       = " << r.fastest.tv_bound << "\n";
  }
  os << "\noverall: " << pass_str(r.all_pass, color) << "\n";
  return os.str();
}

std::string render_table(const SweepResult& r, bool color) {
  std::ostringstream os;
  os.precision(12);
  os << "chains                 " << r.chains << "\n";
  os << "reports                " << r.reports << "\n";
  os << "failed reports         " << r.failed_reports << "  "
     << pass_str(r.failed_reports == 0, color) << "\n";
  os << "proposition applicable " << r.proposition_applicable << "\n";
  os << "regimes                unique_min_at_j=" << r.regime_unique_min
     << " min_elsewhere=" << r.regime_min_elsewhere
     << " degenerate=" << r.regime_degenerate << "\n";
  os << "min tv margin          " << r.min_tv_margin << "\n";
  os << "max dominance gap      " << r.max_dominance_gap << "\n";
  os << "min mean1 margin       " << r.min_mean1_margin << "\n";
  os << "min mean2 margin       " << r.min_mean2_margin << "\n";
  os << "min remark margin      " << r.min_remark_margin << "\n";
  for (const std::string& f : r.failures) os << "FAILED: " << f << "\n";
  return os.str();
}

std::string render_table(const SimulateResult& r, bool color) {
  std::ostringstream os;
  os.precision(12);
  auto side = [&](const char* name, const SimulateSide& s) {
    os << "[" << name << "]  " << pass_str(s.pass, color) << "\n";
    os << "  samples        = " << s.samples << "\n";
    os << "  empirical mean = " << s.empirical_mean << "\n";
    os << "  exact mean     = " << s.exact_mean << "\n";
    os << "  empirical TV   = " << s.tv << " (threshold " << s.threshold
       << ")\n";
  };
  side("hitting time", r.hitting);
  side("dual SST", r.dual_sst);
  os << "overall: " << pass_str(r.all_pass, color) << "\n";
  return os.str();
}

}  // namespace mchit::report
