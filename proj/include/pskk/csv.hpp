#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pskk/errors.hpp"
#include "pskk/points.hpp"

namespace pskk {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ';' || ch == '\t' || ch == ' ') {
      if (!cur.empty()) {
        fields.push_back(cur);
        cur.clear();
      } else if (ch == ',' || ch == ';') {
        fields.emplace_back();
      }
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) fields.push_back(cur);
  return fields;
}

inline bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

//! 17 significant digits: enough for an exact double round-trip.
inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

//! Reads points from a CSV file: one row per point, d numeric columns,
//! optional header line (detected by failing to parse as numbers).
inline PointSet read_points_csv(std::istream& in, const std::string& name = "<stream>") {
  PointSet pts;
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_csv_line(line);
    if (fields.empty()) continue;
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size(); ++i) ok = ok && detail::parse_double(fields[i], row[i]);
    if (!ok) {
      if (first_data) continue;  // header
      throw IoError(name + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    first_data = false;
    if (pts.dim() != 0 && row.size() != pts.dim()) {
      throw IoError(name + ":" + std::to_string(line_no) + ": expected " + std::to_string(pts.dim()) +
                    " columns, got " + std::to_string(row.size()));
    }
    pts.push_row(row);
  }
  if (pts.empty()) throw IoError(name + ": no data rows");
  return pts;
}

inline PointSet read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_points_csv: cannot open " + path.string());
  return read_points_csv(in, path.string());
}

inline void write_points_csv(const PointSet& pts, std::ostream& out) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto row = pts[i];
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << detail::format_full(row[j]);
    out << '\n';
  }
}

inline void write_points_csv(const PointSet& pts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_points_csv: cannot open " + path.string());
  write_points_csv(pts, out);
}

}  // namespace pskk
