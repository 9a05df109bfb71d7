#include "martinpot/point.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace martinpot {

std::string Point::to_string() const {
  std::string out = "(";
  char buf[32];
  for (int i = 0; i < dim_; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c_[i]);
    if (i) out += ",";
    out += buf;
  }
  return out + ")";
}

Point parse_point(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    while (!item.empty() && (item.front() == ' ' || item.front() == '(' || item.front() == '['))
      item.erase(item.begin());
    while (!item.empty() && (item.back() == ' ' || item.back() == ')' || item.back() == ']'))
      item.pop_back();
    if (item.empty()) throw std::invalid_argument("malformed point: '" + text + "'");
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed point coordinate: '" + item + "'");
    }
    pos = end + 1;
  }
  return Point(std::span<const double>(vals));
}

}  // namespace martinpot
