// SPDX-License-Identifier: Apache-2.0
#include "socbist/power_groups.hpp"

#include <algorithm>
#include <atomic>
#include <exception>

#include "socbist/error.hpp"

namespace socbist {

PowerGroup::PowerGroup(std::vector<CoreId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool PowerGroup::contains(CoreId id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

Power PowerGroup::power(const SocSpec& soc) const {
  Power total;
  for (CoreId id : members_) total += soc.core(id).p_m;
  return total;
}

std::string PowerGroup::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i]);
  }
  out += '}';
  return out;
}

GroupCatalog::GroupCatalog(std::vector<PowerGroup> groups) : groups_(std::move(groups)) {
  std::sort(groups_.begin(), groups_.end());
  groups_.erase(std::unique(groups_.begin(), groups_.end()), groups_.end());
}

bool GroupCatalog::contains(const PowerGroup& g) const {
  return std::binary_search(groups_.begin(), groups_.end(), g);
}

namespace {

// Depth-first extension with ids above the current maximum, so every
// feasible subset is visited exactly once. A subset is emitted when no
// outside core fits in the residual budget.
class Enumerator {
 public:
  Enumerator(const std::vector<std::int64_t>& power, std::size_t cap,
             const std::atomic<std::size_t>* shared_count)
      : power_(power), cap_(cap), shared_count_(shared_count), in_set_(power.size(), 0) {}

  void run_from(std::size_t first, std::int64_t budget) {
    push(first);
    extend(first, budget - power_[first]);
    pop(first);
  }

  std::vector<PowerGroup>& results() { return results_; }

 private:
  void extend(std::size_t last, std::int64_t residual) {
    for (std::size_t c = last + 1; c < power_.size(); ++c) {
      if (power_[c] <= residual) {
        push(c);
        extend(c, residual - power_[c]);
        pop(c);
      }
    }
    if (is_maximal(residual)) emit();
  }

  bool is_maximal(std::int64_t residual) const {
    for (std::size_t c = 0; c < power_.size(); ++c)
      if (!in_set_[c] && power_[c] <= residual) return false;
    return true;
  }

  void emit() {
    std::vector<CoreId> ids;
    ids.reserve(stack_.size());
    for (std::size_t c : stack_) ids.push_back(static_cast<CoreId>(c + 1));
    results_.emplace_back(std::move(ids));
    std::size_t seen = results_.size() + (shared_count_ ? shared_count_->load() : 0);
    if (seen > cap_)
      throw Error(ErrorKind::CatalogTooLarge,
                  "more than " + std::to_string(cap_) + " power groups");
  }

  void push(std::size_t c) {
    stack_.push_back(c);
    in_set_[c] = 1;
  }
  void pop(std::size_t c) {
    stack_.pop_back();
    in_set_[c] = 0;
  }

  const std::vector<std::int64_t>& power_;
  std::size_t cap_;
  const std::atomic<std::size_t>* shared_count_;
  std::vector<char> in_set_;
  std::vector<std::size_t> stack_;
  std::vector<PowerGroup> results_;
};

std::vector<std::int64_t> core_powers(const SocSpec& soc) {
  validate(soc);
  std::vector<std::int64_t> power;
  power.reserve(soc.cores.size());
  for (const CoreSpec& c : soc.cores) power.push_back(c.p_m.raw());
  return power;
}

}  // namespace

GroupCatalog enumerate_groups_serial(const SocSpec& soc, std::size_t max_groups) {
  const auto power = core_powers(soc);
  Enumerator e(power, max_groups, nullptr);
  for (std::size_t first = 0; first < power.size(); ++first) e.run_from(first, soc.p_max.raw());
  return GroupCatalog(std::move(e.results()));
}

GroupCatalog enumerate_groups(const SocSpec& soc, std::size_t max_groups) {
  const auto power = core_powers(soc);
  const auto n = static_cast<std::ptrdiff_t>(power.size());
  std::vector<std::vector<PowerGroup>> branches(power.size());
  std::atomic<std::size_t> emitted{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t first = 0; first < n; ++first) {
    if (failed.load()) continue;
    try {
      Enumerator e(power, max_groups, &emitted);
      e.run_from(static_cast<std::size_t>(first), soc.p_max.raw());
      emitted += e.results().size();
      branches[static_cast<std::size_t>(first)] = std::move(e.results());
    } catch (...) {
#pragma omp critical(socbist_enumerate_failure)
      {
        if (!failure) failure = std::current_exception();
      }
      failed = true;
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<PowerGroup> all;
  for (auto& b : branches)
    for (auto& g : b) all.push_back(std::move(g));
  if (all.size() > max_groups)
    throw Error(ErrorKind::CatalogTooLarge, "more than " + std::to_string(max_groups) +
                                                " power groups");
  return GroupCatalog(std::move(all));
}

bool is_incomplete(const PowerGroup& set, const SocSpec& soc) {
  const Power used = set.power(soc);
  if (used > soc.p_max)
    throw Error(ErrorKind::InfeasibleSet,
                set.str() + " needs " + used.str() + " > pmax " + soc.p_max.str());
  const Power residual = soc.p_max - used;
  for (const CoreSpec& c : soc.cores)
    if (!set.contains(c.id) && c.p_m <= residual) return true;
  return false;
}

}  // namespace socbist
