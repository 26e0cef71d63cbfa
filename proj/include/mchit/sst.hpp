#pragma once

#include <string>

#include "mchit/chain.hpp"
#include "mchit/intdist.hpp"

namespace mchit {

inline constexpr double kConditionTol = 1e-10;
inline constexpr long kHorizonCap = 100'000;

enum class SstProvenance { SeparationFastest, ReturnProbability, GreedyDual };

const char* provenance_name(SstProvenance p);

/// Distribution of a strong stationary time together with how it was built.
struct SstResult {
  IntDist dist;
  SstProvenance provenance;
  std::string init_desc;
  // False only for force-built return-probability sequences whose raw values
  // violated monotonicity or positivity; diagnostic carries the first issue.
  bool sequence_valid = true;
  std::string diagnostic;
};

/// Separation at time t: 1 - min_s P(X_t = s) / pi_s, clamped to [0,1].
double separation(const MarkovChain& chain, const ProbVector& init, long t);

/// Distribution whose survival function equals the separation sequence s(t);
/// this is the law of a fastest strong stationary time from `init`.
/// Extension stops once s(t) <= eps_tail. Throws NonMonotoneSeparation if the
/// sequence rises by more than 1e-12 (s(t) is decreasing in exact math).
SstResult fastest_sst(const MarkovChain& chain, const ProbVector& init,
                      double eps_tail = kDefaultTailEps,
                      std::string init_desc = "custom");

struct ConditionReport {
  bool holds;
  long horizon;
  bool horizon_capped;
  long first_t = -1;   // first violating time, -1 if none
  int first_y = -1;    // violating state at first_t
  double worst_violation = 0.0;  // max over (t,y) of the signed excess
};

/// Checks pi_y P(X_t = j) <= pi_j P(X_t = y) for all y and t <= horizon,
/// with X_0 restricted to pi away from j. horizon < 0 picks the default:
/// 10x the fastest-SST support length, capped at kHorizonCap.
ConditionReport check_lemma_condition(const MarkovChain& chain, int j,
                                      long horizon = -1,
                                      double tol = kConditionTol);

/// SST distribution from return probabilities:
/// survival(t) = (P^t(j,j) - pi_j) / (1 - pi_j).
/// Valid when check_lemma_condition holds; then it coincides with the
/// fastest SST from the restricted stationary start. With force=false the
/// sequence guards throw (NotDecreasing, NegativeSurvival); with force=true
/// the sequence is clamped into a valid survival function and the issue is
/// reported in the result.
SstResult sst_from_return_probs(const MarkovChain& chain, int j,
                                double eps_tail = kDefaultTailEps,
                                bool force = false);

struct IdentityReport {
  bool holds;
  long horizon;
  bool horizon_capped;
  double max_discrepancy;
  long worst_t;
};

/// Verifies that the chain started from the restricted stationary law never
/// occupies j strictly before the return-probability SST fires:
/// |P(X_t = j) - pi_j P(T <= t)| <= tol for all t <= horizon.
IdentityReport check_no_hit_before_sst(const MarkovChain& chain, int j,
                                       long horizon = -1,
                                       double tol = kConditionTol);

/// Default horizon for the finite condition checks: 10x the adaptive SST
/// support length, capped at kHorizonCap.
long default_condition_horizon(const MarkovChain& chain, int j,
                               double eps_tail = kDefaultTailEps);

}  // namespace mchit
