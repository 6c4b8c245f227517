// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socbist/core_model.hpp"
#include "socbist/hybrid_testgen.hpp"
#include "socbist/power_groups.hpp"

namespace socbist {

enum class TestMode { Bist, External };
const char* to_string(TestMode mode);  // "BIST" / "External"

struct CoreTestState {
  CoreId core_id = 0;
  Micros remaining_bist;
  Micros remaining_external;
  bool external_started = false;
  friend bool operator==(const CoreTestState&, const CoreTestState&) = default;
};

std::vector<CoreTestState> initial_states(const SocSpec& soc);

enum class WeightMode { WithExternal, BistOnly };

// Exact non-negative rational; group weights are compared without rounding.
class Weight {
 public:
  Weight() = default;
  Weight(__int128 num, __int128 den) : num_(num), den_(den) {}
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }
  friend bool operator==(const Weight& a, const Weight& b) { return (a <=> b) == 0; }

 private:
  __int128 num_ = 0;
  __int128 den_ = 1;
};

// Group priority from current remaining times. WithExternal: the longest
// remaining external part times the mean remaining BIST of the other
// members (a singleton's BIST factor is 1); when no member has external work
// left it falls back to BistOnly, the mean remaining BIST over all members.
// `states` is indexed by core id - 1.
Weight weight(const PowerGroup& group, std::span<const CoreTestState> states, WeightMode mode);

// Core with the longest remaining external part (smallest id on ties), or
// nullopt when no member has external work left.
std::optional<CoreId> external_candidate(const PowerGroup& group,
                                         std::span<const CoreTestState> states);

struct Selection {
  PowerGroup group;
  std::optional<CoreId> external;  // nullopt: BIST-only run
  Weight weight;
};

// Highest-weight catalog group that still has work. Ties: more members, then
// the lexicographically smallest set. Weights are computed in parallel; the
// choice matches a sequential scan.
std::optional<Selection> select_group(const GroupCatalog& catalog,
                                      std::span<const CoreTestState> states);

struct ActivePart {
  CoreId core = 0;
  TestMode mode = TestMode::Bist;
  friend auto operator<=>(const ActivePart&, const ActivePart&) = default;
};

enum class NodeKind { Group, Incomplete };
const char* to_string(NodeKind kind);  // "group" / "incomplete"

struct ScheduleNode {
  std::size_t index = 0;
  NodeKind kind = NodeKind::Group;
  std::vector<ActivePart> active;  // ascending core id
  Micros duration;
  std::vector<ActivePart> releases;  // parts finishing at node end, ascending core id
  friend bool operator==(const ScheduleNode&, const ScheduleNode&) = default;
};

struct ScheduleGraph {
  std::vector<ScheduleNode> nodes;
  Micros total_time;
  friend bool operator==(const ScheduleGraph&, const ScheduleGraph&) = default;
};

Micros total_time(const ScheduleGraph& graph);

// Node-by-node execution of test parts. Each node lasts until the first
// active part finishes; finished parts are released.
class ScheduleBuilder {
 public:
  ScheduleBuilder(const SocSpec& soc, const GroupCatalog& catalog,
                  std::vector<CoreTestState> states);

  // Throws InvalidArgument if the parts break power, bus exclusivity, the
  // external no-pause rule, or include a part with no remaining time.
  const ScheduleNode& run_node(std::vector<ActivePart> parts);

  const std::vector<CoreTestState>& states() const { return states_; }
  bool done() const;
  ScheduleGraph graph() const;

 private:
  const SocSpec& soc_;
  const GroupCatalog& catalog_;
  std::vector<CoreTestState> states_;
  std::vector<ScheduleNode> nodes_;
};

// Greedy graph construction: pick the best group, test its longest external
// part to completion (BIST parts of the other members run alongside and are
// released as they finish), then re-weight and pick again. A group without
// external work runs one node before re-weighting.
ScheduleGraph build_schedule(const SocSpec& soc, const GroupCatalog& catalog,
                             std::vector<CoreTestState> states);
ScheduleGraph build_schedule(const SocSpec& soc, const GroupCatalog& catalog);

struct Augmentation {
  std::size_t node_index = 0;
  CoreId core = 0;
  std::uint64_t old_prtp = 0;
  std::uint64_t new_prtp = 0;
  Micros old_total;
  Micros new_total;
};

struct AugmentResult {
  SocSpec soc;  // T(v_p), T(v_d) updated for augmented cores
  ScheduleGraph graph;
  std::map<CoreId, TestSet> test_sets;
  std::vector<Augmentation> applied;
};

// Baseline test sets for the cores that have an oracle: n_prtp from the
// core's T(v_p), DTP counts from the oracle. Throws CurveMismatch when the
// oracle disagrees with T(v_p) or T(v_d), OracleRangeExceeded when it has
// no point for that PRTP count.
std::map<CoreId, TestSet> baseline_test_sets(
    const SocSpec& soc, const std::map<CoreId, const CoverageOracle*>& oracles);

// Adds BIST parts to incomplete nodes: a core that fits the node's residual
// power gets up to duration x bist_speed more PRTPs, its DTP count is
// re-queried and the whole graph rebuilt. Kept only if total time strictly
// drops; at most `max_rounds` augmentations.
AugmentResult augment_incomplete(const SocSpec& soc, const GroupCatalog& catalog,
                                 const ScheduleGraph& graph,
                                 const std::map<CoreId, const CoverageOracle*>& oracles,
                                 std::size_t max_rounds = 100);

}  // namespace socbist
