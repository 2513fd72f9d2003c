#pragma once

#include <charconv>
#include <string>

namespace gebsim {

/// Shortest round-trip decimal form of a double; keeps CSV output
/// byte-stable across runs.
inline std::string csv_num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace gebsim
