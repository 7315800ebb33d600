#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace mobisense {

// Shortest decimal form that round-trips to the same double; '.' radix and
// no locale dependence.
inline std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) return "nan";
  return std::string(buf, result.ptr);
}

}  // namespace mobisense
