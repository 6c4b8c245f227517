// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "socbist/netlist.hpp"

namespace socbist {

// One input vector: one 0/1 entry per netlist input (PIs, then PPIs).
using Pattern = std::vector<std::uint8_t>;

inline constexpr std::size_t kNotDetected = std::numeric_limits<std::size_t>::max();

// Fault-free output values (POs, then PPOs) for one pattern.
std::vector<std::uint8_t> simulate(const Netlist& nl, const Pattern& pattern);

// Index of the first pattern that detects each fault, or kNotDetected.
// Patterns are packed 64 per word; faults are split across OpenMP workers.
// Throws VectorWidthMismatch.
std::vector<std::size_t> first_detection(const Netlist& nl, std::span<const Pattern> patterns,
                                         std::span<const Fault> faults);

// detected[i] is true iff some pattern detects faults[i].
std::vector<bool> fault_simulate(const Netlist& nl, std::span<const Pattern> patterns,
                                 std::span<const Fault> faults);

// Pattern-at-a-time, fault-at-a-time scalar simulation. Slow; kept as the
// reference the word-parallel kernel is tested against.
std::vector<std::size_t> first_detection_reference(const Netlist& nl,
                                                   std::span<const Pattern> patterns,
                                                   std::span<const Fault> faults);
std::vector<bool> fault_simulate_reference(const Netlist& nl, std::span<const Pattern> patterns,
                                           std::span<const Fault> faults);

}  // namespace socbist
