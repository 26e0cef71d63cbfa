#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _WIN32
#include <io.h>
#define MCHIT_ISATTY _isatty(_fileno(stdout))
#else
#include <unistd.h>
#define MCHIT_ISATTY isatty(fileno(stdout))
#endif

#include "mchit/report.hpp"

namespace {

using namespace mchit;

struct ChainOpts {
  std::string chain_path;
  bool csv = false;
  std::string builtin;
  double delta = 0.25;
  std::string pi_csv = "0.5,0.3,0.2";
  int size = 3;
  double up = 0.3;
  double down = 0.4;
};

void add_chain_options(CLI::App* cmd, ChainOpts& opts) {
  auto* path = cmd->add_option("--chain", opts.chain_path,
                               "chain file: {\"states\": [...], \"P\": [[..]]}");
  cmd->add_flag("--csv", opts.csv, "treat --chain as a CSV matrix");
  auto* builtin =
      cmd->add_option("--builtin", opts.builtin,
                      "builtin chain: two-state | iid | birth-death")
          ->check(CLI::IsMember({"two-state", "iid", "birth-death"}));
  cmd->add_option("--delta", opts.delta, "two-state: delta in [0, 1/2)");
  cmd->add_option("--pi", opts.pi_csv, "iid: comma-separated row");
  cmd->add_option("--size", opts.size, "birth-death: number of states");
  cmd->add_option("--up", opts.up, "birth-death: up probability");
  cmd->add_option("--down", opts.down, "birth-death: down probability");
  path->excludes(builtin);
}

MarkovChain make_chain(const ChainOpts& opts) {
  if (!opts.chain_path.empty()) {
    io::ChainFile cf = opts.csv ? io::load_chain_csv(opts.chain_path)
                                : io::load_chain_json(opts.chain_path);
    return MarkovChain(cf.transition, cf.states);
  }
  if (opts.builtin == "two-state") return io::two_state_chain(opts.delta);
  if (opts.builtin == "iid") {
    std::vector<double> entries;
    std::istringstream in(opts.pi_csv);
    std::string cell;
    while (std::getline(in, cell, ',')) {
      try {
        entries.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(Errc::InvalidParameter, "--pi entry '" + cell + "'");
      }
    }
    Vec pi(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) pi(i) = entries[i];
    return io::iid_chain(pi);
  }
  if (opts.builtin == "birth-death")
    return io::birth_death_chain(opts.size, opts.up, opts.down);
  throw Error(Errc::InvalidParameter, "need --chain PATH or --builtin NAME");
}

int resolve_state(const MarkovChain& chain, const std::string& label) {
  for (int i = 0; i < chain.size(); ++i)
    if (chain.states()[i] == label) return i;
  // fall back to a numeric index
  try {
    size_t used = 0;
    int idx = std::stoi(label, &used);
    if (used == label.size() && idx >= 0 && idx < chain.size()) return idx;
  } catch (const std::exception&) {
  }
  throw Error(Errc::InvalidParameter, "unknown state '" + label + "'");
}

bool use_color() {
  return MCHIT_ISATTY && std::getenv("NO_COLOR") == nullptr;
}

void emit(const nlohmann::json& doc, const std::string& table,
          const std::string& format) {
  if (format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mchit: exact hitting-time distributions, strong stationary times and "
      "geometric-sum approximation bounds for finite ergodic Markov chains"};
  app.require_subcommand(1);

  std::string format = "table";
  app.add_option("--format", format, "table | json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  ChainOpts chain_opts;
  std::string state_label;
  double tail_eps = kDefaultTailEps;
  long horizon = -1;
  double tol = kConditionTol;
  std::vector<double> thetas;
  std::uint64_t seed = 0;
  long samples = 1'000'000;
  int replicas = 1;
  int count = 100;
  int sweep_size = 4;
  bool include_greedy = false;
  std::optional<long> ergodic_n;
  bool verify_ergodic = false;
  long head = 12;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "full bound report for one state of one chain")->fallthrough();
  add_chain_options(analyze, chain_opts);
  analyze->add_option("--state", state_label, "state label (or index)")
      ->required();
  analyze->add_option("--tail-eps", tail_eps, "truncation mass target");
  analyze->add_option("--horizon", horizon,
                      "finite horizon for the condition checks (-1: adaptive)");
  analyze->add_option("--tol", tol, "tolerance for the condition checks");
  analyze->add_option("--theta", thetas, "exponent for the MGF checks")
      ->allow_extra_args(false);
  long ergodic_n_raw = -1;
  analyze->add_option("--ergodic-n", ergodic_n_raw,
                      "report the ergodic-average bound at this n");
  analyze->add_flag("--verify-ergodic", verify_ergodic,
                    "also compute the exact time-averaged TV");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "random-chain property sweep with pass/fail counts")->fallthrough();
  sweep->add_option("--count", count, "number of chains")->capture_default_str();
  sweep->add_option("--size", sweep_size, "states per chain")
      ->capture_default_str();
  sweep->add_option("--seed", seed, "master seed")->capture_default_str();
  sweep->add_option("--tail-eps", tail_eps, "truncation mass target");
  sweep->add_flag("--include-greedy", include_greedy,
                  "also report each greedy-dual SST (failures become data)");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo cross-check of the exact laws")->fallthrough();
  add_chain_options(simulate, chain_opts);
  simulate->add_option("--state", state_label, "state label (or index)")
      ->required();
  simulate->add_option("--seed", seed, "master seed")->capture_default_str();
  simulate->add_option("--samples", samples, "samples per replica")
      ->capture_default_str();
  simulate->add_option("--replicas", replicas, "independent replicas")
      ->capture_default_str();
  simulate->add_option("--tail-eps", tail_eps, "truncation mass target");

  CLI::App* greedy = app.add_subcommand(
      "greedy", "dump the greedy dual construction for one state")->fallthrough();
  add_chain_options(greedy, chain_opts);
  greedy->add_option("--state", state_label, "state label (or index)")
      ->required();
  greedy->add_option("--tail-eps", tail_eps, "truncation mass target");
  greedy->add_option("--head", head, "pmf entries to print");

  CLI::App* sst = app.add_subcommand(
      "sst", "dump the SST distributions for one state")->fallthrough();
  add_chain_options(sst, chain_opts);
  sst->add_option("--state", state_label, "state label (or index)")
      ->required();
  sst->add_option("--tail-eps", tail_eps, "truncation mass target");
  sst->add_option("--horizon", horizon, "condition-check horizon");
  sst->add_option("--tol", tol, "condition-check tolerance");
  sst->add_option("--head", head, "pmf entries to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  bool color = use_color();
  try {
    if (app.got_subcommand(analyze)) {
      MarkovChain chain = make_chain(chain_opts);
      int j = resolve_state(chain, state_label);
      report::AnalyzeOptions opts;
      opts.eps_tail = tail_eps;
      opts.horizon = horizon;
      opts.tol = tol;
      opts.thetas = thetas;
      if (ergodic_n_raw >= 1) opts.ergodic_n = ergodic_n_raw;
      opts.verify_ergodic = verify_ergodic;
      report::AnalyzeResult r = report::analyze(chain, j, opts);
      emit(report::to_json(r, chain), report::render_table(r, chain, color),
           format);
      return r.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(sweep)) {
      report::SweepOptions opts;
      opts.count = count;
      opts.size = sweep_size;
      opts.seed = seed;
      opts.eps_tail = tail_eps;
      opts.include_greedy = include_greedy;
      report::SweepResult r = report::sweep(opts);
      emit(report::to_json(r), report::render_table(r, color), format);
      return r.failed_reports == 0 ? 0 : 1;
    }
    if (app.got_subcommand(simulate)) {
      MarkovChain chain = make_chain(chain_opts);
      int j = resolve_state(chain, state_label);
      report::SimulateOptions opts;
      opts.seed = seed;
      opts.replicas = replicas;
      opts.samples_per_replica = samples;
      opts.eps_tail = tail_eps;
      report::SimulateResult r = report::simulate(chain, j, opts);
      emit(report::to_json(r), report::render_table(r, color), format);
      return r.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(greedy)) {
      MarkovChain chain = make_chain(chain_opts);
      int j = resolve_state(chain, state_label);
      GreedyDual gd = greedy_dual_row(chain, j);
      GreedyClass gc = classify_greedy_case(chain, j);
      SstResult dist = dual_sst_dist(gd, tail_eps);
      nlohmann::json doc;
      doc["greedy_dual"] = report::to_json(gd, chain);
      doc["classification"] = report::to_json(gc);
      doc["mean_closed_form"] = dual_sst_mean(gd);
      doc["dist"] = report::to_json(dist.dist, head);
      std::ostringstream table;
      table.precision(12);
      table << "state " << chain.states()[j] << ": regime "
            << regime_name(gc.regime) << "\n";
      for (size_t r = 0; r < gd.coeffs.size(); ++r) {
        table << "  step " << r + 1 << ": c = " << gd.coeffs[r]
              << ", mass = " << gd.masses[r] << ", A = {";
        for (size_t i = 0; i < gd.sets[r].size(); ++i)
          table << (i ? "," : "") << chain.states()[gd.sets[r][i]];
        table << "}\n";
      }
      table << "  p_absorb = " << gd.p_absorb << ", p_stay = " << gd.p_stay
            << ", p_other = " << gd.p_other << "\n";
      table << "  E T = " << dual_sst_mean(gd) << "\n";
      table << "  pmf head:";
      for (long k = 0; k < std::min(head, dist.dist.n_max() + 1); ++k)
        table << " " << dist.dist.pmf(k);
      table << "\n";
      emit(doc, table.str(), format);
      return 0;
    }
    if (app.got_subcommand(sst)) {
      MarkovChain chain = make_chain(chain_opts);
      int j = resolve_state(chain, state_label);
      ConditionReport lemma = check_lemma_condition(chain, j, horizon, tol);
      SstResult fast =
          fastest_sst(chain, restricted_stationary(chain, j), tail_eps,
                      "pi restricted away from state " + chain.states()[j]);
      SstResult ret = sst_from_return_probs(chain, j, tail_eps, true);
      IdentityReport no_hit = check_no_hit_before_sst(chain, j, horizon, tol);
      SstResult dual = dual_sst_dist(greedy_dual_row(chain, j), tail_eps);
      nlohmann::json doc;
      doc["lemma_condition"] = report::to_json(lemma);
      doc["no_hit_before_sst"] = report::to_json(no_hit);
      auto entry = [&](const SstResult& s) {
        nlohmann::json e;
        e["provenance"] = provenance_name(s.provenance);
        e["init"] = s.init_desc;
        e["valid"] = s.sequence_valid;
        e["diagnostic"] = s.diagnostic;
        e["dist"] = report::to_json(s.dist, head);
        return e;
      };
      doc["fastest"] = entry(fast);
      doc["return_probability"] = entry(ret);
      doc["greedy"] = entry(dual);
      std::ostringstream table;
      table.precision(12);
      table << "state " << chain.states()[j] << ", lemma condition "
            << (lemma.holds ? "holds" : "fails") << " up to t="
            << lemma.horizon << "\n";
      auto line = [&](const char* name, const SstResult& s) {
        table << "  " << name << ": mean " << s.dist.mean() << ", support "
              << s.dist.n_max() << ", tail " << s.dist.tail_bound();
        if (!s.sequence_valid) table << "  [" << s.diagnostic << "]";
        table << "\n    pmf:";
        for (long k = 0; k < std::min(head, s.dist.n_max() + 1); ++k)
          table << " " << s.dist.pmf(k);
        table << "\n";
      };
      line("fastest     ", fast);
      line("return-prob ", ret);
      line("greedy-dual ", dual);
      emit(doc, table.str(), format);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.is_parse()) return 2;
    if (e.is_validation()) return 3;
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
