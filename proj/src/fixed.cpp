// SPDX-License-Identifier: Apache-2.0
#include "socbist/fixed.hpp"

#include <limits>

namespace socbist {

std::optional<std::int64_t> parse_decimal(std::string_view text, int decimals) {
  if (text.empty()) return std::nullopt;
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  if (static_cast<int>(frac.size()) > decimals) return std::nullopt;

  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t value = 0;
  auto push = [&](char c) {
    if (c < '0' || c > '9') return false;
    if (value > (kMax - (c - '0')) / 10) return false;
    value = value * 10 + (c - '0');
    return true;
  };
  for (char c : whole)
    if (!push(c)) return std::nullopt;
  for (char c : frac)
    if (!push(c)) return std::nullopt;
  for (int i = static_cast<int>(frac.size()); i < decimals; ++i)
    if (!push('0')) return std::nullopt;
  return value;
}

std::string format_decimal(std::int64_t raw, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::string out;
  if (raw < 0) {
    out += '-';
    raw = -raw;
  }
  out += std::to_string(raw / scale);
  std::int64_t frac = raw % scale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(decimals) - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

}  // namespace socbist
