#pragma once

// Minimal CSV writer: comma separated, LF line endings, doubles with 17
// significant digits so values round-trip exactly.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mcwin::csv {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Row {
 public:
  Row& add(std::string_view s) {
    cells_.emplace_back(s);
    return *this;
  }
  Row& add(const std::string& s) { return add(std::string_view(s)); }
  Row& add(const char* s) { return add(std::string_view(s)); }
  Row& add(double x) {
    cells_.push_back(format_double(x));
    return *this;
  }
  Row& add(std::int64_t x) {
    cells_.push_back(std::to_string(x));
    return *this;
  }
  Row& add(int x) { return add(static_cast<std::int64_t>(x)); }
  /// Empty cell when there is no value.
  template <class T>
  Row& add(const std::optional<T>& x) {
    if (x) return add(*x);
    cells_.emplace_back();
    return *this;
  }

  const std::vector<std::string>& cells() const { return cells_; }

 private:
  std::vector<std::string> cells_;
};

inline void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline void write_row(std::ostream& os, const Row& r) { write_line(os, r.cells()); }

}  // namespace mcwin::csv
