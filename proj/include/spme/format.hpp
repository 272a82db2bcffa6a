#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace spme {

// Shortest decimal representation that round-trips the exact double, so
// serialized output is byte-stable across runs and schedules.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t x) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace spme
