#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/intdist.hpp"

// Independent oracles used to freeze expected values. Everything here is
// deliberately written against different machinery than the library paths it
// checks: dense matrix powers instead of vector iteration, absorbing-state
// augmentation instead of the substochastic block, explicit convolution
// mixtures instead of the renewal recursion.
namespace oracle {

using mchit::Mat;
using mchit::Vec;

// Closed forms for the two-state family P = [[1/2,1/2],[1/2-d,1/2+d]].
inline Vec two_state_pi(double d) {
  Vec pi(2);
  pi << (1.0 - 2.0 * d) / (2.0 * (1.0 - d)), 1.0 / (2.0 * (1.0 - d));
  return pi;
}

inline Mat two_state_pt(double d, long t) {
  double dt = std::pow(d, double(t));
  Mat m(2, 2);
  m << 1.0 - 2.0 * d + dt, 1.0 - dt, 1.0 - 2.0 * d - dt * (1.0 - 2.0 * d),
      1.0 + dt * (1.0 - 2.0 * d);
  return m / (2.0 * (1.0 - d));
}

// Dense matrix power by repeated multiplication.
inline Mat mat_power(const Mat& p, long t) {
  Mat out = Mat::Identity(p.rows(), p.cols());
  for (long s = 0; s < t; ++s) out = out * p;
  return out;
}

// First-passage pmf of state j by absorbing-state augmentation: replace row
// j with a self-loop and track the mass sitting on j after each step.
inline std::vector<double> hitting_pmf_by_absorption(const Mat& p,
                                                     const Vec& init, int j,
                                                     long t_max) {
  Mat abs = p;
  abs.row(j).setZero();
  abs(j, j) = 1.0;
  std::vector<double> pmf;
  Vec d = init;
  double prev = d(j);
  pmf.push_back(prev);
  for (long t = 1; t <= t_max; ++t) {
    d = abs.transpose() * d;
    pmf.push_back(d(j) - prev);
    prev = d(j);
  }
  return pmf;
}

// E (first passage to j | start init restricted off j) via the fundamental
// matrix (I - Q)^{-1} 1.
inline double hitting_mean_by_fundamental(const Mat& p, const Vec& pi,
                                          int j) {
  const int n = static_cast<int>(p.rows());
  const int m = n - 1;
  Mat q(m, m);
  Vec start(m);
  int a = 0;
  for (int r = 0; r < n; ++r) {
    if (r == j) continue;
    start(a) = pi(r) / (1.0 - pi(j));
    int b = 0;
    for (int c = 0; c < n; ++c) {
      if (c == j) continue;
      q(a, b) = p(r, c);
      ++b;
    }
    ++a;
  }
  Mat f = Mat::Identity(m, m) - q;
  Vec w = f.partialPivLu().solve(Vec::Ones(m));
  return (1.0 - pi(j)) * start.dot(w);
}

// Separation via a materialized dense power.
inline double separation_by_power(const Mat& p, const Vec& pi,
                                  const Vec& init, long t) {
  Vec d = mat_power(p, t).transpose() * init;
  double worst = 1.0;
  for (Eigen::Index s = 0; s < pi.size(); ++s)
    worst = std::min(worst, d(s) / pi(s));
  return std::max(0.0, 1.0 - worst);
}

// Geometric compound by explicit mixture of convolution powers.
inline std::vector<double> compound_by_convolution(double prob,
                                                   const mchit::IntDist& f,
                                                   long n_out, int k_max) {
  std::vector<double> out(static_cast<size_t>(n_out) + 1, 0.0);
  std::vector<double> conv{1.0};  // f^{*0}
  double weight = prob;           // P(N = k)
  for (int k = 0; k <= k_max; ++k) {
    for (size_t i = 0; i < conv.size() && i < out.size(); ++i)
      out[i] += weight * conv[i];
    // conv <- conv * f, truncated to n_out
    std::vector<double> next(std::min<size_t>(out.size(), conv.size() +
                                              static_cast<size_t>(f.n_max())),
                             0.0);
    for (size_t i = 0; i < conv.size(); ++i)
      for (long m = 1; m <= f.n_max(); ++m) {
        size_t idx = i + static_cast<size_t>(m);
        if (idx >= next.size()) break;
        next[idx] += conv[i] * f.pmf(m);
      }
    conv = std::move(next);
    weight *= 1.0 - prob;
  }
  return out;
}

}  // namespace oracle
