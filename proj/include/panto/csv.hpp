#pragma once

#include <charconv>
#include <cstddef>
#include <string>

namespace panto {

// Shortest round-trip decimal rendering; identical doubles always format to
// identical bytes, which is what makes output files worker-count invariant.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_size(std::size_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace panto
