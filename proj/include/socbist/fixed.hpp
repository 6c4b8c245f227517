// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace socbist {

// Parses a non-negative decimal ("12", "12.5", "0.25") into an integer
// scaled by 10^decimals. Rejects signs, exponents, empty parts, and more
// fractional digits than `decimals`.
std::optional<std::int64_t> parse_decimal(std::string_view text, int decimals);

// Inverse of parse_decimal: shortest decimal text for raw / 10^decimals.
std::string format_decimal(std::int64_t raw, int decimals);

// Fixed-point quantity with 0.01 resolution.
template <class Tag>
class Hundredths {
 public:
  static constexpr int kDecimals = 2;
  static constexpr std::int64_t kScale = 100;

  constexpr Hundredths() = default;
  static constexpr Hundredths from_raw(std::int64_t raw) { return Hundredths(raw); }
  static constexpr Hundredths from_units(std::int64_t units) { return Hundredths(units * kScale); }
  static std::optional<Hundredths> parse(std::string_view text) {
    auto raw = parse_decimal(text, kDecimals);
    if (!raw) return std::nullopt;
    return Hundredths(*raw);
  }

  constexpr std::int64_t raw() const { return raw_; }
  constexpr double value() const { return static_cast<double>(raw_) / kScale; }
  constexpr bool is_zero() const { return raw_ == 0; }
  std::string str() const { return format_decimal(raw_, kDecimals); }

  constexpr Hundredths& operator+=(Hundredths o) { raw_ += o.raw_; return *this; }
  constexpr Hundredths& operator-=(Hundredths o) { raw_ -= o.raw_; return *this; }
  friend constexpr Hundredths operator+(Hundredths a, Hundredths b) { return a += b; }
  friend constexpr Hundredths operator-(Hundredths a, Hundredths b) { return a -= b; }
  friend constexpr auto operator<=>(Hundredths, Hundredths) = default;

 private:
  constexpr explicit Hundredths(std::int64_t raw) : raw_(raw) {}
  std::int64_t raw_ = 0;
};

struct MicrosTag;
struct PowerTag;
// Time in microseconds.
using Micros = Hundredths<MicrosTag>;
// Abstract power units (the examples use uW).
using Power = Hundredths<PowerTag>;

// Clock frequency, stored in kHz so MHz values keep three decimals.
class Frequency {
 public:
  constexpr Frequency() = default;
  static constexpr Frequency from_khz(std::int64_t khz) { return Frequency(khz); }
  static constexpr Frequency from_mhz(std::int64_t mhz) { return Frequency(mhz * 1000); }
  static std::optional<Frequency> parse_mhz(std::string_view text) {
    auto raw = parse_decimal(text, 3);
    if (!raw) return std::nullopt;
    return Frequency(*raw);
  }

  constexpr std::int64_t khz() const { return khz_; }
  constexpr double mhz() const { return static_cast<double>(khz_) / 1000.0; }
  std::string str_mhz() const { return format_decimal(khz_, 3); }
  friend constexpr auto operator<=>(Frequency, Frequency) = default;

 private:
  constexpr explicit Frequency(std::int64_t khz) : khz_(khz) {}
  std::int64_t khz_ = 0;
};

}  // namespace socbist
