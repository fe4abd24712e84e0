#include "randflight/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace randflight::io {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

std::string cell_csv(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return csv_escape(*s);
  if (const auto* d = std::get_if<double>(&cell)) return format_g17(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell))
    return std::to_string(*i);
  return std::get<bool>(cell) ? "true" : "false";
}

std::string cell_json(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return json_escape(*s);
  if (const auto* d = std::get_if<double>(&cell)) return format_g17(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell))
    return std::to_string(*i);
  return std::get<bool>(cell) ? "true" : "false";
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  std::string out = "{\"meta\":{";
  for (std::size_t i = 0; i < table.meta.size(); ++i) {
    if (i) out += ',';
    out += json_escape(table.meta[i].first);
    out += ':';
    out += cell_json(table.meta[i].second);
  }
  out += "},\"columns\":[";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += json_escape(table.columns[i]);
  }
  out += "],\"rows\":[";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r) out += ',';
    out += '[';
    for (std::size_t i = 0; i < table.rows[r].size(); ++i) {
      if (i) out += ',';
      out += cell_json(table.rows[r][i]);
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

GridSpec GridSpec::parse(const std::string& text) {
  const auto p1 = text.find(':');
  const auto p2 = text.find(':', p1 == std::string::npos ? 0 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw std::invalid_argument("grid: expected min:max:points");
  GridSpec g;
  std::size_t used = 0;
  try {
    g.min = std::stod(text.substr(0, p1), &used);
    if (used != p1) throw std::invalid_argument("");
    g.max = std::stod(text.substr(p1 + 1, p2 - p1 - 1), &used);
    if (used != p2 - p1 - 1) throw std::invalid_argument("");
    const std::string pts = text.substr(p2 + 1);
    g.points = std::stoi(pts, &used);
    if (used != pts.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: malformed min:max:points spec");
  }
  if (g.points < 1) throw std::invalid_argument("grid: points must be >= 1");
  if (!(g.max >= g.min)) throw std::invalid_argument("grid: requires max >= min");
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    out.push_back(min);
    return out;
  }
  for (int i = 0; i < points; ++i)
    out.push_back(min + (max - min) * static_cast<double>(i) / (points - 1));
  out.back() = max;
  return out;
}

}  // namespace randflight::io
