#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mchit/bounds.hpp"
#include "mchit/greedy.hpp"
#include "mchit/io.hpp"

namespace mchit::report {

struct AnalyzeOptions {
  double eps_tail = kDefaultTailEps;
  long horizon = -1;  // adaptive
  double tol = kConditionTol;
  std::vector<double> thetas;  // empty: default grid
  std::optional<long> ergodic_n;
  bool verify_ergodic = false;
};

/// Full per-state analysis: condition checks, both SST variants with their
/// bound reports, the greedy trace, and the chain-level worst-case block.
struct AnalyzeResult {
  int j;
  ConditionReport lemma;
  bool return_prob_valid;
  std::string return_prob_diagnostic;
  IdentityReport no_hit;
  BoundsReport fastest;
  BoundsReport greedy;
  GreedyDual dual;
  GreedyClass regime;
  double dual_mean_closed_form;
  WorstCaseSst worst_case;
  WorstStateCheck worst_state;
  std::optional<double> ergodic_tv;  // only with verify_ergodic and a state
  std::optional<double> two_state_delta;
  std::optional<double> daly_bound;  // reference constant for the two-state
                                     // family: delta(1-2delta)/(2(1-delta)^2)
  bool all_pass;
};

AnalyzeResult analyze(const MarkovChain& chain, int j,
                      const AnalyzeOptions& opts = {});

struct SweepOptions {
  int count = 1;
  int size = 4;
  std::uint64_t seed = 0;
  double eps_tail = kDefaultTailEps;
  // Also report each greedy-dual SST. On chains where the greedy recursion
  // runs deeper than two steps its collapsed law can fail the bound checks;
  // those failures are reported as data.
  bool include_greedy = false;
};

struct SweepResult {
  int chains = 0;
  int reports = 0;
  int failed_reports = 0;
  int proposition_applicable = 0;
  int regime_unique_min = 0;
  int regime_min_elsewhere = 0;
  int regime_degenerate = 0;
  // worst margins across all reports; positive margins mean slack
  double min_tv_margin = 0;      // tv_bound - (tv_exact - error)
  double max_dominance_gap = 0;  // worst_gap over all dominance witnesses
  double min_mean1_margin = 0;   // mean_upper_1 - mean_W
  double min_mean2_margin = 0;   // mean_upper_2 - mean_upper_1 (fastest only)
  double min_remark_margin = 0;  // mean_T - sst_mean_lower
  std::vector<std::string> failures;
};

SweepResult sweep(const SweepOptions& opts);

struct SimulateOptions {
  std::uint64_t seed = 0;
  int replicas = 1;
  long samples_per_replica = 1'000'000;
  double eps_tail = kDefaultTailEps;
};

struct SimulateSide {
  long samples;
  double empirical_mean;
  double exact_mean;
  double tv;
  double threshold;
  bool pass;
};

struct SimulateResult {
  SimulateSide hitting;
  SimulateSide dual_sst;
  bool all_pass;
};

SimulateResult simulate(const MarkovChain& chain, int j,
                        const SimulateOptions& opts);

// JSON views; the schemas are pinned by golden tests.
nlohmann::json to_json(const IntDist& d, long head = 12);
nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const GreedyDual& gd, const MarkovChain& chain);
nlohmann::json to_json(const GreedyClass& gc);
nlohmann::json to_json(const WorstCaseSst& w);
nlohmann::json to_json(const WorstStateCheck& w);
nlohmann::json to_json(const AnalyzeResult& r, const MarkovChain& chain);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const SimulateResult& r);

// Plain-text views with identical numbers.
std::string render_table(const AnalyzeResult& r, const MarkovChain& chain,
                         bool color);
std::string render_table(const SweepResult& r, bool color);
std::string render_table(const SimulateResult& r, bool color);

}  // namespace mchit::report
