#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mchit/chain.hpp"
#include "mchit/sim.hpp"

namespace mchit::io {

struct ChainFile {
  std::vector<std::string> states;
  Mat transition;
};

/// {"states": [...], "P": [[...], ...]}. Parse failures carry the byte
/// offset, structural failures the offending field.
ChainFile load_chain_json(const std::string& path);
ChainFile parse_chain_json(const std::string& text);

/// Square numeric CSV; labels are generated as "0", "1", ...
ChainFile load_chain_csv(const std::string& path);
ChainFile parse_chain_csv(const std::string& text);

std::string chain_to_json(const MarkovChain& chain);

// Builtin chain families. The two-state family has
// P = [[1/2, 1/2], [1/2 - delta, 1/2 + delta]] for 0 <= delta < 1/2.
MarkovChain two_state_chain(double delta);
MarkovChain iid_chain(const Vec& pi);
MarkovChain birth_death_chain(int size, double up = 0.3, double down = 0.4);

/// Recovers delta when the transition matrix matches the two-state family
/// within 1e-9; used for the comparison block in reports.
std::optional<double> match_two_state_delta(const MarkovChain& chain);

/// Random ergodic chain with rows drawn Dirichlet(1,...,1); periodic or
/// reducible draws are rejected and redrawn.
MarkovChain random_ergodic_chain(int size, SplitMix64& rng);

}  // namespace mchit::io
