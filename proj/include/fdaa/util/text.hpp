#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace fdaa::util {

// Shortest text that parses back to exactly `x`.
inline std::string shortest(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

// Fixed two-decimal rendering with half-up rounding of the decimal value.
// The small bias absorbs binary representation error, so 54.445 -> "54.45".
inline std::string fixed2(double x) {
  const double scaled = std::floor(x * 100.0 + 0.5 + 1e-9);
  const long long cents = static_cast<long long>(scaled);
  const long long whole = cents / 100;
  const long long frac = std::llabs(cents % 100);
  std::string out = (cents < 0 && whole == 0 ? "-" : "") + std::to_string(whole) + ".";
  if (frac < 10) out += '0';
  return out + std::to_string(frac);
}

}  // namespace fdaa::util
