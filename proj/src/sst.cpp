#include "mchit/sst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "truncation.hpp"

namespace mchit {

namespace {
constexpr double kMonotoneSlack = 1e-12;
// Separation and return probabilities come out of subtractions against pi,
// so they cannot be resolved below float noise; tail targets are floored.
constexpr double kSurvivalNoiseFloor = 1e-15;

double separation_of(const Vec& dist, const Vec& pi) {
  double ratio_min = (dist.array() / pi.array()).minCoeff();
  return std::clamp(1.0 - ratio_min, 0.0, 1.0);
}
}  // namespace

const char* provenance_name(SstProvenance p) {
  switch (p) {
    case SstProvenance::SeparationFastest: return "separation_fastest";
    case SstProvenance::ReturnProbability: return "return_probability";
    case SstProvenance::GreedyDual: return "greedy_dual";
  }
  return "unknown";
}

double separation(const MarkovChain& chain, const ProbVector& init, long t) {
  return separation_of(step_distribution(chain, init, t), chain.pi());
}

namespace {
// Separation divides by pi entrywise, so its float resolution is machine
// epsilon over the smallest stationary mass; survival values and
// monotonicity wiggles below that scale are artifacts.
double separation_resolution(const MarkovChain& chain) {
  return 4.0 * std::numeric_limits<double>::epsilon() /
         chain.pi().minCoeff();
}
}  // namespace

SstResult fastest_sst(const MarkovChain& chain, const ProbVector& init,
                      double eps_tail, std::string init_desc) {
  if (init.size() != chain.size())
    throw Error(Errc::InvalidParameter, "init dimension mismatch");
  check_prob_vector(init);
  const double resolution = separation_resolution(chain);
  if (resolution >= 1e-3)
    throw Error(Errc::TruncationCap,
                "stationary mass range defeats the float resolution of "
                "separation; tails cannot be certified");
  const double floor = std::max(kSurvivalNoiseFloor, resolution);
  eps_tail = std::max(eps_tail, floor);
  const double slack = std::max(kMonotoneSlack, resolution);
  Vec v = init;
  std::vector<double> surv;
  double s = separation_of(v, chain.pi());
  surv.push_back(s);
  detail::TailTarget stop{eps_tail, floor};
  while (!stop.reached(surv.back(), static_cast<long>(surv.size()) - 1)) {
    if (static_cast<long>(surv.size()) > kTruncationCap)
      throw Error(Errc::TruncationCap, "separation sequence exceeded cap");
    v = chain.transition().transpose() * v;
    s = separation_of(v, chain.pi());
    if (s > surv.back() + slack) {
      std::ostringstream os;
      os << "separation rose from " << surv.back() << " to " << s << " at t="
         << surv.size();
      throw Error(Errc::NonMonotoneSeparation, os.str());
    }
    surv.push_back(std::min(s, surv.back()));
  }
  return {IntDist::from_survival(surv), SstProvenance::SeparationFastest,
          std::move(init_desc)};
}

long default_condition_horizon(const MarkovChain& chain, int j,
                               double eps_tail) {
  SstResult fast =
      fastest_sst(chain, restricted_stationary(chain, j), eps_tail);
  long support = std::max<long>(1, fast.dist.n_max());
  return std::min<long>(10 * support, kHorizonCap);
}

ConditionReport check_lemma_condition(const MarkovChain& chain, int j,
                                      long horizon, double tol) {
  if (j < 0 || j >= chain.size())
    throw Error(Errc::InvalidParameter, "state index out of range");
  bool capped = false;
  if (horizon < 0) {
    long def = default_condition_horizon(chain, j);
    capped = def == kHorizonCap;
    horizon = def;
  }
  if (horizon < 1)
    throw Error(Errc::InvalidParameter, "horizon must be >= 1");

  const Vec& pi = chain.pi();
  const double pi_j = pi(j);
  ConditionReport rep{true, horizon, capped};
  Vec d = restricted_stationary(chain, j);
  for (long t = 0; t <= horizon; ++t) {
    for (int y = 0; y < chain.size(); ++y) {
      double excess = pi(y) * d(j) - pi_j * d(y);
      if (excess > rep.worst_violation) rep.worst_violation = excess;
      if (excess > tol && rep.first_t < 0) {
        rep.first_t = t;
        rep.first_y = y;
      }
    }
    if (t < horizon) d = chain.transition().transpose() * d;
  }
  rep.holds = rep.first_t < 0;
  return rep;
}

SstResult sst_from_return_probs(const MarkovChain& chain, int j,
                                double eps_tail, bool force) {
  if (j < 0 || j >= chain.size())
    throw Error(Errc::InvalidParameter, "state index out of range");
  eps_tail = std::max(eps_tail, kSurvivalNoiseFloor);
  const double pi_j = chain.pi()(j);
  Vec r = point_mass(chain.size(), j);
  std::vector<double> surv{1.0};
  double prev_return = 1.0;  // P^0(j,j)
  bool valid = true;
  std::string diagnostic;
  auto report = [&](Errc code, const std::string& msg) {
    if (!force) throw Error(code, msg);
    if (valid) {
      valid = false;
      diagnostic = std::string(errc_name(code)) + ": " + msg;
    }
  };
  detail::TailTarget stop{eps_tail, kSurvivalNoiseFloor};
  while (!stop.reached(surv.back(), static_cast<long>(surv.size()) - 1)) {
    if (static_cast<long>(surv.size()) > kTruncationCap)
      throw Error(Errc::TruncationCap, "return-probability support exceeded cap");
    r = chain.transition().transpose() * r;
    double ret = r(j);
    if (ret > prev_return + kMonotoneSlack) {
      std::ostringstream os;
      os << "P^t(j,j) rose from " << prev_return << " to " << ret << " at t="
         << surv.size();
      report(Errc::NotDecreasing, os.str());
    }
    if (ret < pi_j - kMonotoneSlack) {
      std::ostringstream os;
      os << "P^t(j,j) = " << ret << " fell below pi_j = " << pi_j << " at t="
         << surv.size();
      report(Errc::NegativeSurvival, os.str());
    }
    prev_return = ret;
    double s = std::clamp((ret - pi_j) / (1.0 - pi_j), 0.0, 1.0);
    surv.push_back(std::min(s, surv.back()));
  }
  SstResult out{IntDist::from_survival(surv),
                SstProvenance::ReturnProbability,
                "pi restricted away from state " + chain.states()[j]};
  out.sequence_valid = valid;
  out.diagnostic = std::move(diagnostic);
  return out;
}

IdentityReport check_no_hit_before_sst(const MarkovChain& chain, int j,
                                       long horizon, double tol) {
  if (j < 0 || j >= chain.size())
    throw Error(Errc::InvalidParameter, "state index out of range");
  bool capped = false;
  if (horizon < 0) {
    long def = default_condition_horizon(chain, j);
    capped = def == kHorizonCap;
    horizon = def;
  }
  if (horizon < 1)
    throw Error(Errc::InvalidParameter, "horizon must be >= 1");

  const double pi_j = chain.pi()(j);
  Vec d = restricted_stationary(chain, j);      // law of X_t, X_0 ~ pi^(j)
  Vec r = point_mass(chain.size(), j);          // row j of P^t
  IdentityReport rep{true, horizon, capped, 0.0, 0};
  for (long t = 0; t <= horizon; ++t) {
    double surv = std::clamp((r(j) - pi_j) / (1.0 - pi_j), 0.0, 1.0);
    double discrepancy = std::abs(d(j) - pi_j * (1.0 - surv));
    if (discrepancy > rep.max_discrepancy) {
      rep.max_discrepancy = discrepancy;
      rep.worst_t = t;
    }
    if (t < horizon) {
      d = chain.transition().transpose() * d;
      r = chain.transition().transpose() * r;
    }
  }
  rep.holds = rep.max_discrepancy <= tol;
  return rep;
}

}  // namespace mchit
