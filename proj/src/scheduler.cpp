// SPDX-License-Identifier: Apache-2.0
#include "socbist/scheduler.hpp"

#include <algorithm>

#include "socbist/error.hpp"

namespace socbist {

const char* to_string(TestMode mode) { return mode == TestMode::Bist ? "BIST" : "External"; }

const char* to_string(NodeKind kind) {
  return kind == NodeKind::Group ? "group" : "incomplete";
}

std::vector<CoreTestState> initial_states(const SocSpec& soc) {
  std::vector<CoreTestState> states;
  states.reserve(soc.cores.size());
  for (const CoreSpec& c : soc.cores) states.push_back({c.id, c.t_vp, c.t_vd, false});
  return states;
}

std::optional<CoreId> external_candidate(const PowerGroup& group,
                                         std::span<const CoreTestState> states) {
  std::optional<CoreId> best;
  Micros longest;
  for (CoreId id : group.members()) {
    const Micros ext = states[id - 1].remaining_external;
    if (ext.raw() > 0 && (!best || ext > longest)) {
      best = id;
      longest = ext;
    }
  }
  return best;
}

Weight weight(const PowerGroup& group, std::span<const CoreTestState> states, WeightMode mode) {
  constexpr __int128 kScale = Micros::kScale;
  const auto k = static_cast<__int128>(group.size());
  if (k == 0) return {};
  const std::optional<CoreId> ext =
      mode == WeightMode::WithExternal ? external_candidate(group, states) : std::nullopt;
  if (!ext) {
    __int128 bist = 0;
    for (CoreId id : group.members()) bist += states[id - 1].remaining_bist.raw();
    return {bist, kScale * k};
  }
  const __int128 longest = states[*ext - 1].remaining_external.raw();
  if (k == 1) return {longest, kScale};
  __int128 others = 0;
  for (CoreId id : group.members())
    if (id != *ext) others += states[id - 1].remaining_bist.raw();
  return {longest * others, kScale * kScale * (k - 1)};
}

namespace {

bool has_work(const PowerGroup& g, std::span<const CoreTestState> states) {
  for (CoreId id : g.members()) {
    const CoreTestState& s = states[id - 1];
    if (s.remaining_bist.raw() > 0 || s.remaining_external.raw() > 0) return true;
  }
  return false;
}

}  // namespace

std::optional<Selection> select_group(const GroupCatalog& catalog,
                                      std::span<const CoreTestState> states) {
  const auto& groups = catalog.groups();
  const auto n = static_cast<std::ptrdiff_t>(groups.size());
  std::vector<Weight> weights(groups.size());
  std::vector<char> eligible(groups.size(), 0);
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& g = groups[static_cast<std::size_t>(i)];
    if (!has_work(g, states)) continue;
    eligible[static_cast<std::size_t>(i)] = 1;
    weights[static_cast<std::size_t>(i)] = weight(g, states, WeightMode::WithExternal);
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!eligible[i]) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto cmp = weights[i] <=> weights[*best];
    // Catalog order is lexicographic, so an equal-weight, equal-size later
    // group never displaces the current pick.
    if (cmp > 0 || (cmp == 0 && groups[i].size() > groups[*best].size())) best = i;
  }
  if (!best) return std::nullopt;
  return Selection{groups[*best], external_candidate(groups[*best], states), weights[*best]};
}

Micros total_time(const ScheduleGraph& graph) {
  Micros total;
  for (const ScheduleNode& n : graph.nodes) total += n.duration;
  return total;
}

// ----------------------------------------------------------- ScheduleBuilder

ScheduleBuilder::ScheduleBuilder(const SocSpec& soc, const GroupCatalog& catalog,
                                 std::vector<CoreTestState> states)
    : soc_(soc), catalog_(catalog), states_(std::move(states)) {
  if (states_.size() != soc_.cores.size())
    throw Error(ErrorKind::InvalidArgument, "one test state per core expected");
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].core_id != i + 1)
      throw Error(ErrorKind::InvalidArgument, "test states must be ordered by core id");
}

bool ScheduleBuilder::done() const {
  return std::all_of(states_.begin(), states_.end(), [](const CoreTestState& s) {
    return s.remaining_bist.raw() == 0 && s.remaining_external.raw() == 0;
  });
}

const ScheduleNode& ScheduleBuilder::run_node(std::vector<ActivePart> parts) {
  auto reject = [](const std::string& why) { throw Error(ErrorKind::InvalidArgument, why); };
  if (parts.empty()) reject("a node needs at least one active part");
  std::sort(parts.begin(), parts.end());
  Power power;
  std::size_t externals = 0;
  std::optional<Micros> duration;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const ActivePart& p = parts[i];
    if (p.core == 0 || p.core > states_.size()) reject("unknown core " + std::to_string(p.core));
    if (i > 0 && parts[i - 1].core == p.core)
      reject("core " + std::to_string(p.core) + " active twice in one node");
    power += soc_.core(p.core).p_m;
    const CoreTestState& s = states_[p.core - 1];
    const Micros left = p.mode == TestMode::Bist ? s.remaining_bist : s.remaining_external;
    if (left.raw() <= 0)
      reject("core " + std::to_string(p.core) + " has no " + to_string(p.mode) + " work left");
    if (p.mode == TestMode::External) ++externals;
    if (!duration || left < *duration) duration = left;
  }
  if (power > soc_.p_max) reject("node power " + power.str() + " exceeds pmax");
  if (externals > 1) reject("at most one External part per node");
  for (const CoreTestState& s : states_) {
    if (s.external_started && s.remaining_external.raw() > 0 &&
        std::find(parts.begin(), parts.end(), ActivePart{s.core_id, TestMode::External}) ==
            parts.end())
      reject("external test of core " + std::to_string(s.core_id) + " cannot pause");
  }

  ScheduleNode node;
  node.index = nodes_.size() + 1;
  node.duration = *duration;
  std::vector<CoreId> ids;
  for (const ActivePart& p : parts) {
    ids.push_back(p.core);
    CoreTestState& s = states_[p.core - 1];
    Micros& left = p.mode == TestMode::Bist ? s.remaining_bist : s.remaining_external;
    if (p.mode == TestMode::External) s.external_started = true;
    left -= *duration;
    if (left.raw() == 0) node.releases.push_back(p);
  }
  node.kind = catalog_.contains(PowerGroup(ids)) ? NodeKind::Group : NodeKind::Incomplete;
  node.active = std::move(parts);
  nodes_.push_back(std::move(node));
  return nodes_.back();
}

ScheduleGraph ScheduleBuilder::graph() const {
  ScheduleGraph g;
  g.nodes = nodes_;
  g.total_time = total_time(g);
  return g;
}

// ----------------------------------------------------------- build_schedule

ScheduleGraph build_schedule(const SocSpec& soc, const GroupCatalog& catalog,
                             std::vector<CoreTestState> states) {
  ScheduleBuilder builder(soc, catalog, std::move(states));
  while (!builder.done()) {
    const auto sel = select_group(catalog, builder.states());
    if (!sel) throw Error(ErrorKind::Stuck, "work remains but no catalog group can make progress");
    auto bist_parts = [&](std::optional<CoreId> skip) {
      std::vector<ActivePart> parts;
      for (CoreId id : sel->group.members())
        if (id != skip && builder.states()[id - 1].remaining_bist.raw() > 0)
          parts.push_back({id, TestMode::Bist});
      return parts;
    };
    if (!sel->external) {
      builder.run_node(bist_parts(std::nullopt));
      continue;
    }
    const CoreId ext = *sel->external;
    while (builder.states()[ext - 1].remaining_external.raw() > 0) {
      auto parts = bist_parts(ext);
      parts.push_back({ext, TestMode::External});
      builder.run_node(std::move(parts));
    }
  }
  return builder.graph();
}

ScheduleGraph build_schedule(const SocSpec& soc, const GroupCatalog& catalog) {
  return build_schedule(soc, catalog, initial_states(soc));
}

// -------------------------------------------------------------- augmentation

namespace {

// PRTPs that fit in `t` at the core's BIST speed, rounded down.
std::uint64_t patterns_in(const CoreSpec& c, Micros t) {
  const __int128 num = static_cast<__int128>(t.raw()) * c.f_b.khz();
  const __int128 den = static_cast<__int128>(100'000) * c.ac_b;
  return static_cast<std::uint64_t>(num / den);
}

}  // namespace

std::map<CoreId, TestSet> baseline_test_sets(
    const SocSpec& soc, const std::map<CoreId, const CoverageOracle*>& oracles) {
  std::map<CoreId, TestSet> sets;
  for (const auto& [id, oracle] : oracles) {
    const CoreSpec& c = soc.core(id);
    const std::uint64_t n0 = patterns_in(c, c.t_vp);
    if (prtp_time(c, n0) != c.t_vp)
      throw Error(ErrorKind::CurveMismatch, "core " + std::to_string(id) + ": tvp " +
                                                c.t_vp.str() +
                                                " us is not a whole number of PRTPs");
    const OracleAnswer a = oracle->query(n0);
    TestSet ts{id, a.n_dtp_phase1, n0, a.n_dtp_phase2};
    if (dtp_time(c, ts.n_dtp()) != c.t_vd)
      throw Error(ErrorKind::CurveMismatch,
                  "core " + std::to_string(id) + ": curve gives " +
                      std::to_string(ts.n_dtp()) + " DTPs = " + dtp_time(c, ts.n_dtp()).str() +
                      " us at n_prtp " + std::to_string(n0) + ", file says tvd " + c.t_vd.str());
    sets.emplace(id, ts);
  }
  return sets;
}

AugmentResult augment_incomplete(const SocSpec& soc, const GroupCatalog& catalog,
                                 const ScheduleGraph& graph,
                                 const std::map<CoreId, const CoverageOracle*>& oracles,
                                 std::size_t max_rounds) {
  AugmentResult r{soc, graph, baseline_test_sets(soc, oracles), {}};

  // One accepted augmentation per pass; rescan the rebuilt graph until a pass
  // finds nothing or the round cap is hit.
  bool progress = true;
  while (progress && r.applied.size() < max_rounds) {
    progress = false;
    const std::vector<ScheduleNode> nodes = r.graph.nodes;
    for (const ScheduleNode& node : nodes) {
      if (node.kind != NodeKind::Incomplete) continue;
      std::vector<CoreId> active;
      Power used;
      for (const ActivePart& p : node.active) {
        active.push_back(p.core);
        used += r.soc.core(p.core).p_m;
      }
      for (const auto& [id, oracle] : oracles) {
        if (std::find(active.begin(), active.end(), id) != active.end()) continue;
        const CoreSpec& c = r.soc.core(id);
        if (used + c.p_m > r.soc.p_max) continue;
        const TestSet& cur = r.test_sets.at(id);
        const std::uint64_t extra = patterns_in(c, node.duration);
        if (extra == 0) continue;
        const auto target = oracle->largest_point_in(cur.n_prtp, cur.n_prtp + extra);
        if (!target) continue;
        const OracleAnswer a = oracle->query(*target);
        const TestSet next{id, a.n_dtp_phase1, *target, a.n_dtp_phase2};
        // Extra PRTPs are only worth trying when they remove DTPs.
        if (next.n_dtp() >= cur.n_dtp()) continue;

        SocSpec trial = r.soc;
        CoreSpec& tc = trial.cores[id - 1];
        tc.t_vp = prtp_time(tc, next.n_prtp);
        tc.t_vd = dtp_time(tc, next.n_dtp());
        ScheduleGraph rebuilt = build_schedule(trial, catalog);
        if (rebuilt.total_time < r.graph.total_time) {
          r.applied.push_back({node.index, id, cur.n_prtp, next.n_prtp, r.graph.total_time,
                               rebuilt.total_time});
          r.soc = std::move(trial);
          r.graph = std::move(rebuilt);
          r.test_sets[id] = next;
          progress = true;
          break;
        }
      }
      if (progress) break;
    }
  }
  return r;
}

}  // namespace socbist
