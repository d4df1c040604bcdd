#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "motrack/errors.hpp"

namespace motrack {

// Shortest decimal form that round-trips the exact double value.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw format_error(context + ": bad number '" + std::string(s) + "'");
  return out;
}

inline long parse_long(std::string_view s, const std::string& context) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw format_error(context + ": bad integer '" + std::string(s) + "'");
  return out;
}

}  // namespace motrack
