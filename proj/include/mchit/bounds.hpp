#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/hitting.hpp"
#include "mchit/intdist.hpp"
#include "mchit/sst.hpp"

namespace mchit {

struct MgfCheck {
  double theta;
  double gate;                  // (1 - pi_j) E e^{theta T}
  std::optional<double> bound;  // pi_j / (1 - gate), present iff gate < 1
  double exact;                 // E e^{theta W_j} over the truncated support
  bool certified;               // tail certificate could evaluate both MGFs
  bool pass;                    // exact <= bound + 1e-9 (vacuous without bound)
};

/// Everything the approximation theory asserts about one (chain, j, SST)
/// triple, with the exact quantities it is checked against.
struct BoundsReport {
  int j;
  double pi_j;
  SstProvenance sst_provenance;
  double mean_T;
  double mean_W;           // Kac route
  double tv_bound;         // (1 - pi_j) E T - pi_j E W
  double tv_bound_error;   // certified residual of the two mean routes
  double tv_exact;         // TV(law of W_j, law of the geometric sum U)
  double tv_exact_error;   // truncation slack on tv_exact
  DominanceWitness dominance;  // U >=_st W_j
  double mean_upper_1;     // (1 - pi_j)/pi_j E T
  double mean_upper_2;     // (1/pi_j) sum_{l != j} pi_l E T_(l)
  bool mean_chain_full;    // second mean inequality applies (fastest SST)
  std::vector<MgfCheck> mgf_checks;
  double sst_mean_lower;   // pi_j + pi_j/(1-pi_j) sum pi_s P(s,s)/(1-P(s,s))
  bool all_pass;
  std::vector<std::string> failures;
};

/// The total variation bound (1 - pi_j) E T - pi_j E W_j.
double tv_bound(const MarkovChain& chain, int j, const SstResult& T,
                double eps_tail = kDefaultTailEps);

/// Builds U = geometric compound of T, computes the exact TV against the
/// hitting law, and evaluates every bound of the theory with pass flags.
/// An empty theta list means the default grid.
BoundsReport tv_report(const MarkovChain& chain, int j, const SstResult& T,
                       double eps_tail = kDefaultTailEps,
                       const std::vector<double>& thetas = {});

struct MgfBound {
  double gate;
  std::optional<double> bound;
  double exact;
};

/// The exponential-moment gate and bound at one theta > 0. Throws
/// DivergentMgf when the tail certificate cannot evaluate E e^{theta T}.
MgfBound mgf_bound(const MarkovChain& chain, int j, const SstResult& T,
                   double theta, double eps_tail = kDefaultTailEps);

/// Lower bound on the mean of any SST from the restricted stationary start,
/// from the self-loop geometric lower bound on W_j.
double sst_mean_lower_bound(const MarkovChain& chain, int j);

struct WorstCaseSst {
  std::vector<double> sst_means;  // E T_(l), point-mass starts
  double t_star;
  int argmax_state;
  double avg_hitting;        // sum_j pi_j E W_j
  double avg_hitting_bound;  // (|S| - 1) t*
  bool bound_holds;
  std::optional<double> ergodic_avg_bound;  // (|S| - 1) t* / n
};

/// Worst-case expected fastest SST over point-mass starts and the average
/// hitting time bound it implies.
WorstCaseSst worst_case_sst(const MarkovChain& chain,
                            double eps_tail = kDefaultTailEps,
                            std::optional<long> n = {});

/// TV between the length-n time average of the chain's law from a point mass
/// at l and the stationary law. Verification companion to the
/// ergodic-average bound; not part of the default report path.
double ergodic_average_tv(const MarkovChain& chain, int l, long n);

struct WorstStateCheck {
  bool applicable;
  std::optional<int> m;  // the max-pi state that passed the column test
  std::optional<bool> conclusion_holds;
  long horizon;
};

/// Reversible-chain worst-state check: if the minimum entry of P^t always
/// sits in the column of a maximal-pi state m, the point-mass SST from m
/// dominates every other. Both hypothesis and conclusion are checked up to
/// the finite horizon.
WorstStateCheck check_worst_state_proposition(const MarkovChain& chain,
                                              long horizon = 200,
                                              double tol = kConditionTol);

/// Default theta grid for the exponential-moment checks.
std::vector<double> default_theta_grid();

}  // namespace mchit
