#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "evbc/csv.hpp"

namespace evbc {

namespace detail {

inline std::string fixed2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string sig5(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5g", v);
  return buf;
}

}  // namespace detail

// Renders one polyline per y-column against x_col into a standalone SVG
// document.  Rows that are non-finite in any chosen column (or non-positive
// in y when log_y is set) are dropped; the count of dropped rows is recorded
// in an SVG comment.  Output is deterministic for fixed input.
inline std::string emit_svg(const CsvTable& table, const std::string& x_col,
                            const std::vector<std::string>& y_cols,
                            bool log_y = false) {
  if (y_cols.empty()) throw EmptyPlot("no y columns requested");
  const std::size_t xi = table.column(x_col);
  std::vector<std::size_t> yi;
  yi.reserve(y_cols.size());
  for (const auto& name : y_cols) yi.push_back(table.column(name));

  std::vector<std::vector<double>> kept;
  std::size_t dropped = 0;
  for (const auto& row : table.rows) {
    bool ok = std::isfinite(row[xi]);
    for (std::size_t c : yi) {
      ok = ok && std::isfinite(row[c]);
      if (log_y) ok = ok && row[c] > 0.0;
    }
    if (ok)
      kept.push_back(row);
    else
      ++dropped;
  }
  if (kept.empty()) throw EmptyPlot("no plottable rows");

  const auto yval = [&](double v) { return log_y ? std::log10(v) : v; };
  double xmin = kept.front()[xi], xmax = xmin;
  double ymin = yval(kept.front()[yi.front()]), ymax = ymin;
  for (const auto& row : kept) {
    xmin = std::min(xmin, row[xi]);
    xmax = std::max(xmax, row[xi]);
    for (std::size_t c : yi) {
      ymin = std::min(ymin, yval(row[c]));
      ymax = std::max(ymax, yval(row[c]));
    }
  }
  const auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    if (span > 0.0) {
      lo -= 0.05 * span;
      hi += 0.05 * span;
    } else {
      const double bump = (std::abs(lo) > 0.0) ? 0.1 * std::abs(lo) : 1.0;
      lo -= bump;
      hi += bump;
    }
  };
  pad(xmin, xmax);
  pad(ymin, ymax);

  constexpr double W = 840.0, H = 560.0;
  constexpr double L = 80.0, R = 820.0, T = 24.0, B = 500.0;
  const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
  const auto py = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr std::size_t palette_size = 6;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         detail::fixed2(W) + "\" height=\"" + detail::fixed2(H) +
         "\" viewBox=\"0 0 " + detail::fixed2(W) + " " + detail::fixed2(H) +
         "\">\n";
  if (dropped > 0)
    svg += "<!-- dropped " + std::to_string(dropped) +
           " rows with non-finite or non-plottable values -->\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes.
  svg += "<line x1=\"" + detail::fixed2(L) + "\" y1=\"" + detail::fixed2(B) +
         "\" x2=\"" + detail::fixed2(R) + "\" y2=\"" + detail::fixed2(B) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + detail::fixed2(L) + "\" y1=\"" + detail::fixed2(T) +
         "\" x2=\"" + detail::fixed2(L) + "\" y2=\"" + detail::fixed2(B) +
         "\" stroke=\"black\"/>\n";

  constexpr int kTicks = 6;
  for (int i = 0; i < kTicks; ++i) {
    const double frac = static_cast<double>(i) / (kTicks - 1);
    const double xv = xmin + frac * (xmax - xmin);
    const double xp = px(xv);
    svg += "<line x1=\"" + detail::fixed2(xp) + "\" y1=\"" + detail::fixed2(B) +
           "\" x2=\"" + detail::fixed2(xp) + "\" y2=\"" + detail::fixed2(B + 6) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fixed2(xp) + "\" y=\"" + detail::fixed2(B + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + detail::sig5(xv) +
           "</text>\n";
    const double yv = ymin + frac * (ymax - ymin);
    const double yp = py(yv);
    svg += "<line x1=\"" + detail::fixed2(L - 6) + "\" y1=\"" + detail::fixed2(yp) +
           "\" x2=\"" + detail::fixed2(L) + "\" y2=\"" + detail::fixed2(yp) +
           "\" stroke=\"black\"/>\n";
    const double label = log_y ? std::pow(10.0, yv) : yv;
    svg += "<text x=\"" + detail::fixed2(L - 10) + "\" y=\"" +
           detail::fixed2(yp + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + detail::sig5(label) +
           "</text>\n";
  }

  svg += "<text x=\"" + detail::fixed2(0.5 * (L + R)) + "\" y=\"" +
         detail::fixed2(B + 42) + "\" font-size=\"13\" text-anchor=\"middle\">" +
         x_col + "</text>\n";
  if (log_y)
    svg += "<text x=\"" + detail::fixed2(L) + "\" y=\"" + detail::fixed2(T - 8) +
           "\" font-size=\"12\">log scale</text>\n";

  for (std::size_t s = 0; s < yi.size(); ++s) {
    const char* color = palette[s % palette_size];
    std::string pts;
    for (const auto& row : kept) {
      if (!pts.empty()) pts += ' ';
      pts += detail::fixed2(px(row[xi])) + "," + detail::fixed2(py(yval(row[yi[s]])));
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    // Legend entry.
    const double ly = T + 16.0 + 18.0 * static_cast<double>(s);
    svg += "<line x1=\"" + detail::fixed2(R - 150) + "\" y1=\"" +
           detail::fixed2(ly - 4) + "\" x2=\"" + detail::fixed2(R - 126) +
           "\" y2=\"" + detail::fixed2(ly - 4) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + detail::fixed2(R - 120) + "\" y=\"" + detail::fixed2(ly) +
           "\" font-size=\"12\">" + y_cols[s] + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace evbc
