// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "socbist/fault_sim.hpp"

namespace socbist {

// Fibonacci LFSR over GF(2). Bit e-1 of `taps` is set for every term x^e of
// the feedback polynomial (the constant term is implied), so x^3 + x + 1 is
// 0b101. The top tap must be bit width-1.
class Lfsr {
 public:
  // Throws ZeroSeed or InvalidTaps.
  Lfsr(unsigned width, std::uint64_t taps, std::uint64_t seed);

  // Widths 1..32 use a primitive polynomial from a built-in table.
  static Lfsr with_default_taps(unsigned width, std::uint64_t seed);

  unsigned width() const { return width_; }
  std::uint64_t taps() const { return taps_; }
  std::uint64_t state() const { return state_; }

  // Returns the current state and advances one step.
  std::uint64_t next();

 private:
  unsigned width_;
  std::uint64_t taps_;
  std::uint64_t mask_;
  std::uint64_t state_;
};

inline constexpr unsigned kMaxDefaultLfsrWidth = 32;

// Primitive-polynomial taps for width in [1, 32]; throws InvalidTaps outside.
std::uint64_t default_taps(unsigned width);

// Default generator for a circuit: width = min(inputs, 32), table taps.
Lfsr default_lfsr(std::size_t input_width, std::uint64_t seed);

// The first n states of `lfsr` (copied, the argument is not advanced) as
// input vectors. Vector bit j is state bit j mod width: wider registers are
// truncated, narrower ones tiled.
std::vector<Pattern> lfsr_sequence(Lfsr lfsr, std::size_t n, std::size_t vector_width);

}  // namespace socbist
