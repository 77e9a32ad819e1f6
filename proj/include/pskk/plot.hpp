#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pskk/errors.hpp"
#include "pskk/mise.hpp"

namespace pskk {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

//! Renders a log-log MISE-vs-M chart as a standalone SVG: one polyline per
//! method, decade gridlines, and the fitted slope in the legend.
inline void write_loglog_svg(std::span<const MiseReport> reports,
                             const std::map<std::string, double>& slopes, std::ostream& out,
                             const std::string& title = "MISE convergence") {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& r : reports) {
    if (!(r.mise > 0.0) || r.m == 0) continue;
    const double x = std::log10(static_cast<double>(r.m));
    const double y = std::log10(r.mise);
    series[r.method].emplace_back(x, y);
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  if (series.empty()) throw ConfigError("write_loglog_svg: nothing to plot");
  if (max_x - min_x < 1e-9) max_x = min_x + 1.0;
  if (max_y - min_y < 1e-9) max_y = min_y + 1.0;

  const double width = 640.0, height = 480.0;
  const double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - min_x) / (max_x - min_x) * plot_w; };
  auto py = [&](double y) { return top + (max_y - y) / (max_y - min_y) * plot_h; };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << title << "</text>\n";

  // Decade gridlines with labels.
  for (int e = static_cast<int>(std::ceil(min_x)); e <= static_cast<int>(std::floor(max_x)); ++e) {
    const double x = px(e);
    out << "<line x1=\"" << detail::svg_num(x) << "\" y1=\"" << top << "\" x2=\"" << detail::svg_num(x)
        << "\" y2=\"" << top + plot_h << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << detail::svg_num(x) << "\" y=\"" << height - 28
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(min_y)); e <= static_cast<int>(std::floor(max_y)); ++e) {
    const double y = py(e);
    out << "<line x1=\"" << left << "\" y1=\"" << detail::svg_num(y) << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << detail::svg_num(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << detail::svg_num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << e << "</text>\n";
  }
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">M (samples)</text>\n";
  out << "<text x=\"16\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">MISE</text>\n";

  int color_idx = 0;
  double legend_y = top + 16.0;
  for (const auto& [name, pts_raw] : series) {
    auto pts = pts_raw;
    std::sort(pts.begin(), pts.end());
    const char* color = colors[color_idx % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) out << detail::svg_num(px(x)) << ',' << detail::svg_num(py(y)) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : pts) {
      out << "<circle cx=\"" << detail::svg_num(px(x)) << "\" cy=\"" << detail::svg_num(py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    std::string label = name;
    auto it = slopes.find(name);
    if (it != slopes.end()) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), " (slope %.3f)", it->second);
      label += buf;
    }
    out << "<rect x=\"" << left + 10 << "\" y=\"" << legend_y - 9 << "\" width=\"14\" height=\"4\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << left + 30 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    legend_y += 18.0;
    ++color_idx;
  }
  out << "</svg>\n";
}

inline void write_loglog_svg(std::span<const MiseReport> reports,
                             const std::map<std::string, double>& slopes,
                             const std::filesystem::path& path,
                             const std::string& title = "MISE convergence") {
  std::ofstream out(path);
  if (!out) throw IoError("write_loglog_svg: cannot open " + path.string());
  write_loglog_svg(reports, slopes, out, title);
}

}  // namespace pskk
