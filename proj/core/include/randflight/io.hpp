#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace randflight::io {

inline constexpr const char* kVersion = "0.1.0";

// One output cell; doubles are always rendered with 17 significant digits so
// that equal configurations reproduce byte-identical files.
using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// printf %.17g.
std::string format_g17(double v);

// RFC 4180 style: header row always present, fields quoted only when needed.
// Meta entries are not part of the CSV body.
std::string to_csv(const Table& table);

// {"meta": {...}, "columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& table);

// "min:max:points" evaluation grid with inclusive endpoints.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 1;

  static GridSpec parse(const std::string& text);
  std::vector<double> values() const;
};

}  // namespace randflight::io
