#include "mchit/chain.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace mchit {

namespace {

// Strong connectivity of the positive-entry digraph: every state reachable
// from 0 and 0 reachable from every state.
bool strongly_connected(const Mat& P) {
  const int n = static_cast<int>(P.rows());
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        double w = forward ? P(u, v) : P(v, u);
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
  };
  return reach(true) && reach(false);
}

// Period of an irreducible chain: gcd over all edges (u,v) of
// level(u) + 1 - level(v), levels from a BFS rooted at state 0.
long chain_period(const Mat& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<long> level(n, -1);
  std::queue<int> q;
  q.push(0);
  level[0] = 0;
  long g = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < n; ++v) {
      if (P(u, v) <= 0.0) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return g == 0 ? 1 : g;
}

}  // namespace

void check_prob_vector(const ProbVector& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= -tol)) {
      std::ostringstream os;
      os << "probability vector has negative entry " << v(i) << " at " << i;
      throw Error(Errc::InvalidParameter, os.str());
    }
  }
  double s = v.sum();
  if (std::abs(s - 1.0) > tol) {
    std::ostringstream os;
    os << "probability vector sums to " << s;
    throw Error(Errc::InvalidParameter, os.str());
  }
}

MarkovChain::MarkovChain(Mat transition, std::vector<std::string> labels)
    : transition_(std::move(transition)), labels_(std::move(labels)) {
  const Eigen::Index n = transition_.rows();
  if (n != transition_.cols())
    throw Error(Errc::InvalidParameter, "transition matrix is not square");
  if (n < 2)
    throw Error(Errc::InvalidParameter, "need at least 2 states");
  if (labels_.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (static_cast<Eigen::Index>(labels_.size()) != n)
    throw Error(Errc::InvalidParameter, "label count does not match matrix");

  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      double p = transition_(i, k);
      if (p < 0.0 || p > 1.0 + kRowSumTol) {
        std::ostringstream os;
        os << "entry (" << i << "," << k << ") = " << p << " outside [0,1]";
        throw Error(Errc::NotStochastic, os.str());
      }
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << row_sum;
      throw Error(Errc::NotStochastic, os.str());
    }
  }

  if (!strongly_connected(transition_))
    throw Error(Errc::NotIrreducible,
                "positive-entry digraph is not strongly connected");
  long period = chain_period(transition_);
  if (period > 1) {
    std::ostringstream os;
    os << "chain has period " << period;
    throw Error(Errc::Periodic, os.str());
  }

  pi_ = stationary(transition_);
}

int MarkovChain::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error(Errc::InvalidParameter, "unknown state label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

MarkovChain validate_chain(const Mat& transition,
                           std::vector<std::string> labels) {
  return MarkovChain(transition, std::move(labels));
}

Vec stationary(const Mat& transition) {
  const Eigen::Index n = transition.rows();
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Mat A = transition.transpose() - Mat::Identity(n, n);
  A.row(n - 1).setOnes();
  Vec b = Vec::Zero(n);
  b(n - 1) = 1.0;
  Eigen::PartialPivLU<Mat> lu(A);
  Vec pi = lu.solve(b);
  double residual = (transition.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (!pi.allFinite() || residual > kStationaryResidualTol)
    throw Error(Errc::SingularSystem,
                "stationary solve residual " + std::to_string(residual));
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(pi(i) > 0.0))
      throw Error(Errc::SingularSystem,
                  "stationary distribution has nonpositive entry");
  return pi;
}

ProbVector step_distribution(const MarkovChain& chain, const ProbVector& init,
                             long t) {
  if (t < 0) throw Error(Errc::InvalidParameter, "negative time");
  if (init.size() != chain.size())
    throw Error(Errc::InvalidParameter, "init dimension mismatch");
  check_prob_vector(init);
  Vec v = init;
  for (long s = 0; s < t; ++s) v = chain.transition().transpose() * v;
  return v;
}

ProbVector restricted_stationary(const MarkovChain& chain, int j) {
  if (j < 0 || j >= chain.size())
    throw Error(Errc::InvalidParameter, "state index out of range");
  double pj = chain.pi()(j);
  if (1.0 - pj < 1e-12)
    throw Error(Errc::DegenerateMass,
                "1 - pi_j below tolerance; chain state corrupt");
  Vec r = chain.pi() / (1.0 - pj);
  r(j) = 0.0;
  return r;
}

bool is_reversible(const MarkovChain& chain, double tol) {
  const int n = chain.size();
  const Vec& pi = chain.pi();
  const Mat& P = chain.transition();
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (std::abs(pi(k) * P(k, l) - pi(l) * P(l, k)) > tol) return false;
  return true;
}

ProbVector point_mass(int n, int j) {
  if (j < 0 || j >= n)
    throw Error(Errc::InvalidParameter, "state index out of range");
  Vec v = Vec::Zero(n);
  v(j) = 1.0;
  return v;
}

}  // namespace mchit
