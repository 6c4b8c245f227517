// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "socbist/core_model.hpp"

namespace socbist {

// A set of core ids in canonical (ascending, duplicate-free) form.
class PowerGroup {
 public:
  PowerGroup() = default;
  explicit PowerGroup(std::vector<CoreId> members);

  const std::vector<CoreId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(CoreId id) const;
  Power power(const SocSpec& soc) const;
  // "{1,3,5}"
  std::string str() const;

  friend auto operator<=>(const PowerGroup&, const PowerGroup&) = default;

 private:
  std::vector<CoreId> members_;
};

// M_SoC: every maximal power-feasible core set, sorted lexicographically.
class GroupCatalog {
 public:
  GroupCatalog() = default;
  explicit GroupCatalog(std::vector<PowerGroup> groups);

  const std::vector<PowerGroup>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool contains(const PowerGroup& g) const;
  auto begin() const { return groups_.begin(); }
  auto end() const { return groups_.end(); }

  friend bool operator==(const GroupCatalog&, const GroupCatalog&) = default;

 private:
  std::vector<PowerGroup> groups_;
};

inline constexpr std::size_t kDefaultCatalogCap = 1'000'000;

// Enumerates M_SoC. Recursion branches (one per smallest member) run on
// OpenMP workers; the merged result is identical to the serial run.
// Throws EmptySoc, InfeasibleCore, or CatalogTooLarge past `max_groups`.
GroupCatalog enumerate_groups(const SocSpec& soc, std::size_t max_groups = kDefaultCatalogCap);

// Single-threaded reference of enumerate_groups.
GroupCatalog enumerate_groups_serial(const SocSpec& soc,
                                     std::size_t max_groups = kDefaultCatalogCap);

// True iff some core outside `set` still fits in the residual budget.
// Throws InfeasibleSet when `set` already exceeds p_max.
bool is_incomplete(const PowerGroup& set, const SocSpec& soc);

}  // namespace socbist
