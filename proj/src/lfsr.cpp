// SPDX-License-Identifier: Apache-2.0
#include "socbist/lfsr.hpp"

#include <array>
#include <bit>
#include <initializer_list>
#include <algorithm>

#include "socbist/error.hpp"

namespace socbist {

namespace {

constexpr std::uint64_t taps_of(std::initializer_list<unsigned> exps) {
  std::uint64_t t = 0;
  for (unsigned e : exps) t |= std::uint64_t{1} << (e - 1);
  return t;
}

// Maximal-length tap sets (Xilinx XAPP052 table).
constexpr std::array<std::uint64_t, 33> kDefaultTaps = {
    0,
    taps_of({1}),
    taps_of({2, 1}),
    taps_of({3, 2}),
    taps_of({4, 3}),
    taps_of({5, 3}),
    taps_of({6, 5}),
    taps_of({7, 6}),
    taps_of({8, 6, 5, 4}),
    taps_of({9, 5}),
    taps_of({10, 7}),
    taps_of({11, 9}),
    taps_of({12, 6, 4, 1}),
    taps_of({13, 4, 3, 1}),
    taps_of({14, 5, 3, 1}),
    taps_of({15, 14}),
    taps_of({16, 15, 13, 4}),
    taps_of({17, 14}),
    taps_of({18, 11}),
    taps_of({19, 6, 2, 1}),
    taps_of({20, 17}),
    taps_of({21, 19}),
    taps_of({22, 21}),
    taps_of({23, 18}),
    taps_of({24, 23, 22, 17}),
    taps_of({25, 22}),
    taps_of({26, 6, 2, 1}),
    taps_of({27, 5, 2, 1}),
    taps_of({28, 25}),
    taps_of({29, 27}),
    taps_of({30, 6, 4, 1}),
    taps_of({31, 28}),
    taps_of({32, 22, 2, 1}),
};

}  // namespace

Lfsr::Lfsr(unsigned width, std::uint64_t taps, std::uint64_t seed) : width_(width), taps_(taps) {
  if (width == 0 || width > 64)
    throw Error(ErrorKind::InvalidTaps, "LFSR width must be in 1..64");
  mask_ = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  if ((taps & ~mask_) != 0 || (taps >> (width - 1)) != 1)
    throw Error(ErrorKind::InvalidTaps, "taps must describe a degree-" + std::to_string(width) +
                                            " polynomial");
  state_ = seed & mask_;
  if (state_ == 0) throw Error(ErrorKind::ZeroSeed, "LFSR seed must be nonzero in its low " +
                                                        std::to_string(width) + " bits");
}

Lfsr Lfsr::with_default_taps(unsigned width, std::uint64_t seed) {
  return Lfsr(width, default_taps(width), seed);
}

std::uint64_t Lfsr::next() {
  const std::uint64_t out = state_;
  const auto feedback = static_cast<std::uint64_t>(std::popcount(state_ & taps_) & 1);
  state_ = ((state_ << 1) | feedback) & mask_;
  return out;
}

std::uint64_t default_taps(unsigned width) {
  if (width == 0 || width > kMaxDefaultLfsrWidth)
    throw Error(ErrorKind::InvalidTaps,
                "no built-in polynomial for width " + std::to_string(width));
  return kDefaultTaps[width];
}

Lfsr default_lfsr(std::size_t input_width, std::uint64_t seed) {
  const auto width = static_cast<unsigned>(
      std::clamp<std::size_t>(input_width, 1, kMaxDefaultLfsrWidth));
  return Lfsr::with_default_taps(width, seed);
}

std::vector<Pattern> lfsr_sequence(Lfsr lfsr, std::size_t n, std::size_t vector_width) {
  std::vector<Pattern> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t s = lfsr.next();
    Pattern p(vector_width);
    for (std::size_t j = 0; j < vector_width; ++j) p[j] = (s >> (j % lfsr.width())) & 1;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace socbist
