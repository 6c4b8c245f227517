// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "socbist/fault_sim.hpp"
#include "socbist/netlist.hpp"

namespace socbist {

struct AtpgOptions {
  std::uint64_t seed = 1;
  // Circuits with at most this many inputs are searched exhaustively.
  std::size_t exhaustive_limit = 24;
  // Bounded path: random vectors tried before hill climbing.
  std::size_t random_patterns = 1024;
  // Bounded path: vector evaluations per fault during hill climbing.
  std::size_t trial_budget = 10'000;
};

struct AtpgResult {
  std::vector<Pattern> patterns;
  // Exhaustive path: exactly the untestable targets. Bounded path: targets
  // the search gave up on.
  std::vector<Fault> undetected;
};

// Desk-scale deterministic test generation: per-target pattern search with
// fault dropping, then reverse-order compaction. Every returned pattern
// detects at least one target.
AtpgResult atpg(const Netlist& nl, std::span<const Fault> targets, const AtpgOptions& options = {});

}  // namespace socbist
