#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mchit/error.hpp"

namespace mchit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// A probability vector over the chain's states.
using ProbVector = Vec;

inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kStationaryResidualTol = 1e-12;

// Throws InvalidParameter unless v is entrywise >= -tol and sums to 1
// within tol.
void check_prob_vector(const ProbVector& v, double tol = 1e-9);

/// A validated finite, irreducible, aperiodic Markov chain in discrete time.
///
/// Construction checks row-stochasticity, irreducibility (strong connectivity
/// of the positive-entry digraph) and aperiodicity (gcd of BFS return-path
/// lengths through state 0), then caches the stationary distribution from a
/// dense linear solve. Instances are immutable.
class MarkovChain {
 public:
  MarkovChain(Mat transition, std::vector<std::string> labels);

  int size() const { return static_cast<int>(transition_.rows()); }
  const Mat& transition() const { return transition_; }
  const Vec& pi() const { return pi_; }
  const std::vector<std::string>& states() const { return labels_; }

  // Index of the state with the given label; InvalidParameter if unknown.
  int index_of(const std::string& label) const;

 private:
  Mat transition_;
  std::vector<std::string> labels_;
  Vec pi_;
};

// Factory spelling of the constructor; labels default to "0", "1", ...
MarkovChain validate_chain(const Mat& transition,
                           std::vector<std::string> labels = {});

// Unique left fixed vector of an ergodic stochastic matrix, by LU solve of
// (P^T - I) x = 0 with a normalization row. Residual ||pi P - pi||_inf is
// checked against kStationaryResidualTol.
Vec stationary(const Mat& transition);

// init * P^t by iterated vector-matrix products; P^t is never materialized.
ProbVector step_distribution(const MarkovChain& chain, const ProbVector& init,
                             long t);

// pi conditioned away from state j: entry j is exactly 0, entry l is
// pi_l / (1 - pi_j).
ProbVector restricted_stationary(const MarkovChain& chain, int j);

// Detailed balance: max |pi_k P(k,l) - pi_l P(l,k)| <= tol.
bool is_reversible(const MarkovChain& chain, double tol = 1e-12);

// Point mass at state j.
ProbVector point_mass(int n, int j);

}  // namespace mchit
