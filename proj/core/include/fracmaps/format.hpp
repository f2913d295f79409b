#pragma once

#include <charconv>
#include <string>

namespace fracmaps {

/// Formats with 17 significant digits (round-trip safe for binary64).
inline std::string format_real(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace fracmaps
