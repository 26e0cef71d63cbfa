#pragma once

#include "mchit/chain.hpp"
#include "mchit/intdist.hpp"

namespace mchit {

/// First-passage law of state j from stationarity, with the conditional law
/// given a positive hitting time and the mean by two independent routes.
struct HittingResult {
  IntDist dist;              // law of W_j, X_0 ~ pi
  IntDist conditional_dist;  // law of (W_j | W_j > 0); pmf(0) = 0
  double mean_direct;        // mean of the truncated pmf
  double mean_kac;           // from the return-probability identity
  double mean_kac_error;     // certified scale of the Kac route's residual
  double pi_j;
};

/// Exact W_j distribution via the substochastic block of P with row/column j
/// removed: the conditional law is the absorption-time law from the
/// restricted stationary start, and W_j mixes it with an atom pi_j at 0.
/// Raises KacMismatch if the two mean routes disagree by more than 1e-8.
HittingResult hitting_time_dist(const MarkovChain& chain, int j,
                                double eps_tail = kDefaultTailEps);

/// E W_j from pi_j E W_j = sum_t [P^t(j,j) - pi_j].
double expected_hitting_kac(const MarkovChain& chain, int j,
                            double eps_tail = kDefaultTailEps);

/// Average hitting time sum_j pi_j E W_j.
double average_hitting_time(const MarkovChain& chain,
                            double eps_tail = kDefaultTailEps);

}  // namespace mchit
