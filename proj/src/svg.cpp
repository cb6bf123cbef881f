// SPDX-License-Identifier: Apache-2.0
#include "mimosep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mimosep/error.hpp"

namespace mimosep {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v, const char* pattern = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
  if (table.rows().size() < 2) throw Error(ErrorKind::Format, "a plot needs at least two rows");
  if (spec.y_columns.empty()) throw Error(ErrorKind::Format, "no y columns selected");
  const std::vector<double> xs = table.numeric_column(spec.x_column);

  std::vector<std::vector<double>> ys;
  std::size_t clipped = 0;
  for (const auto& name : spec.y_columns) {
    std::vector<double> col = table.numeric_column(name);
    for (double& v : col) {
      if (!std::isfinite(v)) throw Error(ErrorKind::Format, "column '" + name + "' has a non-finite value");
      if (spec.log_y) {
        if (v <= 0.0) {
          v = kLogFloor;
          ++clipped;
        }
        v = std::log10(std::max(v, kLogFloor));
      }
    }
    ys.push_back(std::move(col));
  }
  for (const double x : xs) {
    if (!std::isfinite(x)) throw Error(ErrorKind::Format, "column '" + spec.x_column + "' has a non-finite value");
  }

  // Series keys in order of first appearance.
  std::vector<std::string> keys;
  std::vector<std::size_t> row_key(table.rows().size(), 0);
  if (!spec.series_column.empty()) {
    const std::size_t idx = table.column(spec.series_column);
    std::map<std::string, std::size_t> seen;
    for (std::size_t r = 0; r < table.rows().size(); ++r) {
      const Cell& cell = table.rows()[r][idx];
      const std::string key = std::holds_alternative<std::string>(cell) ? std::get<std::string>(cell)
                                                                         : format_number(std::get<double>(cell));
      auto [it, inserted] = seen.emplace(key, keys.size());
      if (inserted) keys.push_back(key);
      row_key[r] = it->second;
    }
  } else {
    keys.emplace_back();
  }

  const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  const Range xr = padded(*xmin_it, *xmax_it);
  double ylo = ys[0][0], yhi = ys[0][0];
  for (const auto& col : ys) {
    for (const double v : col) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  }
  const Range yr = padded(ylo, yhi);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };
  auto tick_label = [&](double y) { return spec.log_y ? "1e" + fmt(y, "%.1f") : fmt(y, "%.4g"); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << escape(spec.title) << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    svg << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << fmt(fx, "%.4g") << "</text>\n";
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(fy) + 4) << "\" text-anchor=\"end\">"
        << tick_label(fy) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 16) << "\" text-anchor=\"middle\">"
      << escape(spec.x_column) << "</text>\n";

  std::size_t line = 0;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (std::size_t c = 0; c < ys.size(); ++c, ++line) {
      const char* colour = kPalette[line % std::size(kPalette)];
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t r = 0; r < xs.size(); ++r) {
        if (row_key[r] != k) continue;
        svg << (first ? "" : " ") << fmt(px(xs[r])) << "," << fmt(py(ys[c][r]));
        first = false;
      }
      svg << "\"/>\n";
      const std::string name = keys[k].empty() ? spec.y_columns[c] : keys[k] + " " + spec.y_columns[c];
      const double ly = kTop + 14.0 + 16.0 * static_cast<double>(line);
      svg << "<line x1=\"" << fmt(kWidth - kRight + 10) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
          << fmt(kWidth - kRight + 30) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << colour << "\"/>\n";
      svg << "<text x=\"" << fmt(kWidth - kRight + 34) << "\" y=\"" << fmt(ly) << "\">" << escape(name)
          << "</text>\n";
    }
  }
  if (clipped > 0) {
    svg << "<text x=\"" << kLeft << "\" y=\"" << fmt(kHeight - 2) << "\" fill=\"#d62728\">warning: " << clipped
        << " non-positive value(s) clipped to 1e-300 on the log axis</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mimosep
