#include "mchit/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "truncation.hpp"

namespace mchit {

namespace {
constexpr double kZeroQ = 1e-14;       // Q mass below this counts as consumed
constexpr double kSetSlack = 1e-12;    // one-sided guard on the >= c_r test
constexpr double kDegenerateTol = 1e-12;
}  // namespace

GreedyDual greedy_dual_row(const MarkovChain& chain, int j) {
  const int n = chain.size();
  if (j < 0 || j >= n)
    throw Error(Errc::InvalidParameter, "state index out of range");
  const Vec& pi = chain.pi();
  const double pi_j = pi(j);

  Vec q(n);
  for (int l = 0; l < n; ++l)
    q(l) = (pi(l) - pi_j * chain.transition()(j, l)) / (1.0 - pi_j);

  GreedyDual gd{j, {}, {}, {}, 0.0, 0.0, 0.0};
  std::vector<char> active(n, 1);  // A_0 = S
  for (int r = 1;; ++r) {
    if (r > n + 2)
      throw Error(Errc::NonTermination,
                  "greedy recursion failed to empty the positive set");
    double c = std::numeric_limits<double>::infinity();
    for (int l = 0; l < n; ++l)
      if (active[l] && q(l) > kZeroQ) c = std::min(c, q(l) / pi(l));
    if (!std::isfinite(c)) break;  // minimum taken over an empty set: z = r-1

    std::vector<int> set;
    double set_pi = 0.0;
    for (int l = 0; l < n; ++l) {
      if (active[l] && q(l) > kZeroQ && q(l) / pi(l) >= c - kSetSlack) {
        set.push_back(l);
        set_pi += pi(l);
        q(l) -= c * pi(l);
        if (q(l) < -1e-10) {
          std::ostringstream os;
          os << "Q went negative (" << q(l) << ") at state " << l;
          throw Error(Errc::NegativeQ, os.str());
        }
      } else {
        active[l] = 0;
      }
    }
    double mass = c * set_pi;
    if (static_cast<int>(set.size()) == n)
      gd.p_absorb += mass;
    else if (static_cast<int>(set.size()) == n - 1 &&
             std::find(set.begin(), set.end(), j) == set.end())
      gd.p_stay += mass;
    else
      gd.p_other += mass;
    gd.coeffs.push_back(c);
    gd.sets.push_back(std::move(set));
    gd.masses.push_back(mass);
  }
  return gd;
}

SstResult dual_sst_dist(const GreedyDual& gd, double eps_tail) {
  if (gd.p_stay >= 1.0 - 1e-12)
    throw Error(Errc::DegenerateStay, "dual row is all self-mass");
  std::vector<double> surv{1.0, 1.0 - gd.p_absorb};
  detail::TailTarget stop{eps_tail, 0.0};
  while (!stop.reached(surv.back(), static_cast<long>(surv.size()) - 1)) {
    if (static_cast<long>(surv.size()) > kTruncationCap)
      throw Error(Errc::TruncationCap, "dual SST support exceeded cap");
    surv.push_back(surv.back() * gd.p_stay);
  }
  SstResult out{IntDist::from_survival(surv), SstProvenance::GreedyDual,
                "dual walk started at the complement of state " +
                    std::to_string(gd.j)};
  return out;
}

double dual_sst_mean(const GreedyDual& gd) {
  if (gd.p_stay >= 1.0 - 1e-12)
    throw Error(Errc::DegenerateStay, "dual row is all self-mass");
  return 1.0 + (1.0 - gd.p_absorb) / (1.0 - gd.p_stay);
}

const char* regime_name(GreedyRegime r) {
  switch (r) {
    case GreedyRegime::UniqueMinAtJ: return "unique_min_at_j";
    case GreedyRegime::MinElsewhere: return "min_elsewhere";
    case GreedyRegime::Degenerate: return "degenerate";
  }
  return "unknown";
}

GreedyClass classify_greedy_case(const MarkovChain& chain, int j) {
  const int n = chain.size();
  if (j < 0 || j >= n)
    throw Error(Errc::InvalidParameter, "state index out of range");
  const Vec& pi = chain.pi();
  const double pi_j = pi(j);

  double min_margin = std::numeric_limits<double>::infinity();
  for (int l = 0; l < n; ++l) {
    double diff = pi(l) - pi_j * chain.transition()(j, l);
    if (std::abs(diff) <= kDegenerateTol)
      return {GreedyRegime::Degenerate, {}, {}, {}};
    min_margin = std::min(min_margin, diff / pi(l));
  }

  bool off_j_min = false;
  for (int l = 0; l < n; ++l) {
    if (l == j) continue;
    double margin = (pi(l) - pi_j * chain.transition()(j, l)) / pi(l);
    if (margin <= min_margin + kDegenerateTol) off_j_min = true;
  }

  GreedyDual gd = greedy_dual_row(chain, j);
  if (off_j_min) return {GreedyRegime::MinElsewhere, {}, {}, gd.p_absorb};

  double alpha = (1.0 - chain.transition()(j, j)) / (1.0 - pi_j);
  double beta = gd.coeffs.size() > 1 ? (1.0 - pi_j) * gd.coeffs[1] : 0.0;
  return {GreedyRegime::UniqueMinAtJ, alpha, beta, {}};
}

}  // namespace mchit
