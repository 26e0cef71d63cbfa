#pragma once

#include <cstdint>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/greedy.hpp"
#include "mchit/intdist.hpp"

namespace mchit {

inline constexpr long kPathCap = 10'000'000;

/// Counter-based generator (splitmix64): state walks a fixed-increment orbit
/// and each output is a bijective mix of the state, so jumping ahead is one
/// addition. Uniform doubles take the top 53 bits. Identical seeds give
/// bit-identical streams on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  void jump(std::uint64_t n) { state_ += n * 0x9E3779B97F4A7C15ull; }

 private:
  std::uint64_t state_;
};

/// Streams are disjoint windows of the single splitmix64 orbit: replica k
/// starts 2^21 positions after replica k-1, so replicas never overlap while
/// each draws at most 2^21 values (the contract promises 2^20).
inline constexpr std::uint64_t kReplicaStride = 1ull << 21;

inline SplitMix64 replica_stream(std::uint64_t master_seed,
                                 std::uint64_t replica) {
  SplitMix64 rng(master_seed);
  rng.jump(replica * kReplicaStride);
  return rng;
}

struct SimConfig {
  std::uint64_t seed = 0;
  int replicas = 1;
  long samples_per_replica = 1;
};

/// Inverse-CDF draw from a probability vector.
int sample_categorical(const Vec& probs, SplitMix64& rng);

/// One trajectory of the chain from init until it first occupies j; returns
/// the step count (0 when the initial draw is already j). PathCap guards
/// runaway trajectories.
long sample_hitting_time(const MarkovChain& chain, int j,
                         const ProbVector& init, SplitMix64& rng);

/// One absorption time of the three-outcome dual walk from S_j.
long sample_dual_sst(const GreedyDual& gd, SplitMix64& rng);

/// TV between the empirical pmf of the samples and the exact law.
double empirical_tv(const std::vector<long>& samples, const IntDist& exact);

// Replica-ordered sample runs; deterministic for a fixed config.
std::vector<long> run_hitting_sim(const MarkovChain& chain, int j,
                                  const ProbVector& init,
                                  const SimConfig& config);
std::vector<long> run_dual_sst_sim(const GreedyDual& gd,
                                   const SimConfig& config);

}  // namespace mchit
