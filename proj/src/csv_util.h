#ifndef CRITNET_SRC_CSV_UTIL_H
#define CRITNET_SRC_CSV_UTIL_H

#include <string>
#include <vector>

namespace critnet::internal {

// Splits one CSV line on commas. No quoting; none of our files need it.
inline std::vector<std::string> SplitCsvLine(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (std::string& field : fields) {
    size_t first = field.find_first_not_of(" \t");
    size_t last = field.find_last_not_of(" \t");
    field = first == std::string::npos ? "" : field.substr(first, last - first + 1);
  }
  return fields;
}

inline bool IsBlank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace critnet::internal

#endif  // CRITNET_SRC_CSV_UTIL_H
