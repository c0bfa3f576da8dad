#ifndef CRITNET_FORMAT_H
#define CRITNET_FORMAT_H

#include <charconv>
#include <string>
#include <system_error>

namespace critnet {

// Shortest decimal representation that parses back to the same double.
inline std::string FormatDouble(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Whole-token parse; rejects trailing garbage.
inline bool ParseDouble(const std::string& token, double* out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

}  // namespace critnet

#endif  // CRITNET_FORMAT_H
