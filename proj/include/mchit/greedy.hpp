#pragma once

#include <optional>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/sst.hpp"

namespace mchit {

/// Trace of the greedy construction of the dual transition row out of the
/// complement set S_j = S \ {j}: the coefficients c_r, the decreasing set
/// sequence A_1 >= A_2 >= ... >= A_z and the mass P*(S_j, A_r) placed on
/// each. Only the three-way split (full set / S_j / anything else) matters
/// for the SST law; the full trace is kept for reporting.
struct GreedyDual {
  int j;
  std::vector<double> coeffs;          // c_1 .. c_z
  std::vector<std::vector<int>> sets;  // A_1 .. A_z, ascending indices
  std::vector<double> masses;          // c_r * sum_{l in A_r} pi_l
  double p_absorb;                     // mass on the full set S
  double p_stay;                       // mass on S_j
  double p_other;                      // mass on intermediate sets
};

/// Runs the greedy recursion: Q_0(l) = (pi_l - pi_j P(j,l)) / (1 - pi_j),
/// c_r = min positive ratio Q_{r-1}(l)/pi_l over A_{r-1}, subtract c_r pi on
/// the surviving set, until no positive mass remains. Entries below 1e-14
/// count as zero; set membership allows a 1e-12 slack below c_r.
GreedyDual greedy_dual_row(const MarkovChain& chain, int j);

/// First-passage law of the dual walk from S_j to the absorbing full set:
/// pmf(1) = p_absorb, pmf(t) = p_stay^{t-2} (p_stay p_absorb + p_other).
SstResult dual_sst_dist(const GreedyDual& gd,
                        double eps_tail = kDefaultTailEps);

/// Closed-form mean 1 + (1 - p_absorb) / (1 - p_stay).
double dual_sst_mean(const GreedyDual& gd);

enum class GreedyRegime { UniqueMinAtJ, MinElsewhere, Degenerate };

const char* regime_name(GreedyRegime r);

struct GreedyClass {
  GreedyRegime regime;
  std::optional<double> alpha;  // UniqueMinAtJ: (1 - P(j,j)) / (1 - pi_j)
  std::optional<double> beta;   // UniqueMinAtJ: (1 - pi_j) c_2
  std::optional<double> gamma;  // MinElsewhere: P*(S_j, S)
};

/// Classifies (chain, j) by where min_l (pi_l - pi_j P(j,l)) / pi_l is
/// attained: uniquely at j, at some other state (then the SST is supported
/// on {1,2} and the dual never stays in S_j), or degenerate when some
/// pi_l = pi_j P(j,l).
GreedyClass classify_greedy_case(const MarkovChain& chain, int j);

}  // namespace mchit
