#include "mchit/sim.hpp"

#include <algorithm>
#include <cmath>

namespace mchit {

int sample_categorical(const Vec& probs, SplitMix64& rng) {
  double u = rng.uniform();
  double cum = 0.0;
  const Eigen::Index n = probs.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += probs(i);
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(n - 1);
}

long sample_hitting_time(const MarkovChain& chain, int j,
                         const ProbVector& init, SplitMix64& rng) {
  if (j < 0 || j >= chain.size())
    throw Error(Errc::InvalidParameter, "state index out of range");
  const Mat& p = chain.transition();
  const int n = chain.size();
  int state = sample_categorical(init, rng);
  long t = 0;
  while (state != j) {
    if (t >= kPathCap)
      throw Error(Errc::PathCap, "trajectory exceeded the path cap");
    double u = rng.uniform();
    double cum = 0.0;
    int next = n - 1;
    for (int i = 0; i < n; ++i) {
      cum += p(state, i);
      if (u < cum) {
        next = i;
        break;
      }
    }
    state = next;
    ++t;
  }
  return t;
}

long sample_dual_sst(const GreedyDual& gd, SplitMix64& rng) {
  long t = 1;
  for (;;) {
    if (t >= kPathCap)
      throw Error(Errc::PathCap, "dual walk exceeded the path cap");
    double u = rng.uniform();
    if (u < gd.p_absorb) return t;          // straight to the full set
    if (u < gd.p_absorb + gd.p_other) return t + 1;  // via an intermediate set
    ++t;                                    // stayed in S_j
  }
}

double empirical_tv(const std::vector<long>& samples, const IntDist& exact) {
  if (samples.empty())
    throw Error(Errc::InvalidParameter, "need at least one sample");
  long max_v = *std::max_element(samples.begin(), samples.end());
  long n = std::max(max_v, exact.n_max());
  std::vector<double> emp(static_cast<size_t>(n) + 1, 0.0);
  double w = 1.0 / double(samples.size());
  for (long s : samples) emp[static_cast<size_t>(s)] += w;
  double l1 = 0.0;
  for (long k = 0; k <= n; ++k)
    l1 += std::abs(emp[static_cast<size_t>(k)] - exact.pmf(k));
  return 0.5 * l1;
}

std::vector<long> run_hitting_sim(const MarkovChain& chain, int j,
                                  const ProbVector& init,
                                  const SimConfig& config) {
  if (config.replicas < 1 || config.samples_per_replica < 1)
    throw Error(Errc::InvalidParameter, "replicas and samples must be >= 1");
  std::vector<long> samples;
  samples.reserve(static_cast<size_t>(config.replicas) *
                  static_cast<size_t>(config.samples_per_replica));
  for (int rep = 0; rep < config.replicas; ++rep) {
    SplitMix64 rng = replica_stream(config.seed, std::uint64_t(rep));
    for (long s = 0; s < config.samples_per_replica; ++s)
      samples.push_back(sample_hitting_time(chain, j, init, rng));
  }
  return samples;
}

std::vector<long> run_dual_sst_sim(const GreedyDual& gd,
                                   const SimConfig& config) {
  if (config.replicas < 1 || config.samples_per_replica < 1)
    throw Error(Errc::InvalidParameter, "replicas and samples must be >= 1");
  std::vector<long> samples;
  samples.reserve(static_cast<size_t>(config.replicas) *
                  static_cast<size_t>(config.samples_per_replica));
  for (int rep = 0; rep < config.replicas; ++rep) {
    SplitMix64 rng = replica_stream(config.seed, std::uint64_t(rep));
    for (long s = 0; s < config.samples_per_replica; ++s)
      samples.push_back(sample_dual_sst(gd, rng));
  }
  return samples;
}

}  // namespace mchit
