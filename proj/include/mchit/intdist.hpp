#pragma once

#include <cstdint>
#include <vector>

#include "mchit/error.hpp"

namespace mchit {

inline constexpr double kDefaultTailEps = 1e-10;
inline constexpr long kTruncationCap = 1'000'000;
inline constexpr double kDominanceTol = 1e-10;

/// A truncated distribution on {0, 1, ..., n_max} with a certified upper
/// bound on the probability mass beyond n_max.
///
/// sum(pmf) + tail_bound is always 1 within 1e-9. Negative floating-point
/// dust down to -1e-15 is clamped to zero on construction and the clamped
/// magnitude is added to the tail bound; anything more negative is rejected.
class IntDist {
 public:
  IntDist(std::vector<double> pmf, double tail_bound);

  // pmf(0) = 1 - surv[0], pmf(t) = surv[t-1] - surv[t], tail = surv.back().
  // surv must be nonincreasing (caller's responsibility; dust is clamped).
  static IntDist from_survival(const std::vector<double>& surv);

  long n_max() const { return static_cast<long>(pmf_.size()) - 1; }
  double pmf(long k) const {
    return (k < 0 || k > n_max()) ? 0.0 : pmf_[static_cast<size_t>(k)];
  }
  const std::vector<double>& probs() const { return pmf_; }
  double tail_bound() const { return tail_bound_; }
  double total_mass() const;

  /// P(X > t) = 1 - sum_{k<=t} pmf(k), evaluated as a suffix sum plus the
  /// tail bound so no cancellation occurs.
  double survival(long t) const;

  double mean() const;
  // Heuristic size of the mean mass lost to truncation; reported, never
  // silently added to mean().
  double mean_tail_hint() const { return tail_bound_ * double(n_max()); }

  struct MgfValue {
    double value;
    bool divergent;  // tail certificate cannot bound e^{theta k} growth
  };
  MgfValue mgf(double theta) const;

  /// Empirical geometric tail rate: max pmf(k+1)/pmf(k) over a trailing
  /// window. Used as the divergence certificate for mgf().
  double tail_ratio() const;

 private:
  std::vector<double> pmf_;
  std::vector<double> suffix_;  // suffix_[k] = sum_{i >= k} pmf_[i]
  double tail_bound_;
};

/// Geom(p) on {0,1,2,...}: pmf(k) = p(1-p)^k, tail certified as (1-p)^{n+1}.
IntDist geometric(double p, long n_max);

struct TvResult {
  double value;        // half L1 distance over the truncated supports
  double error_bound;  // slack from the two tail certificates
};
TvResult tv_distance(const IntDist& d1, const IntDist& d2);

/// Law of T_1 + ... + T_N with N ~ Geom(p) independent of the IID T_i ~ f_T,
/// by the renewal recursion f_U(0) = p, f_U(n) = (1-p) sum_m f_T(m) f_U(n-m).
/// Requires f_T(0) = 0. Support grows until the reachable mass (truncation
/// of f_T caps it below 1) is exhausted to within eps_tail.
IntDist geometric_compound(double p, const IntDist& f_T,
                           double eps_tail = kDefaultTailEps);

struct DominanceWitness {
  bool holds;
  long worst_t;
  double worst_gap;  // max_t survival(lower,t) - survival(upper,t), net of
                     // tail-bound slack past either truncation point
};

/// Checks upper >=_st lower via survival functions. Violations below tol are
/// numerical noise; tail bounds are folded in at the truncation boundary.
DominanceWitness check_stochastic_dominance(const IntDist& upper,
                                            const IntDist& lower,
                                            double tol = kDominanceTol);

}  // namespace mchit
