#pragma once

// Self-contained SVG line plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace thzris::io {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_markers;
  /// Optional clamp of the y range (useful for patterns in dB).
  double y_floor = -std::numeric_limits<double>::infinity();
};

namespace detail {

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt(double v, int precision = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

inline double nice_step(double range, int target_ticks) {
  const double raw = range / std::max(1, target_ticks);
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * magnitude >= raw) return m * magnitude;
  return 10.0 * magnitude;
}

}  // namespace detail

inline std::string render_svg(const LinePlot& plot) {
  constexpr double width = 720, height = 440, left = 70, right = 160, top = 40, bottom = 55;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      const double y = std::max(s.y[i], plot.y_floor);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double ystep = detail::nice_step(y1 - y0, 6);
  y0 = std::floor(y0 / ystep) * ystep;
  y1 = std::ceil(y1 / ystep) * ystep;
  const double xstep = detail::nice_step(x1 - x0, 8);
  const auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  const auto sy = [&](double y) { return top + (y1 - std::max(y, plot.y_floor)) / (y1 - y0) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << detail::escape_xml(plot.title) << "</text>\n";
  for (double y = y0; y <= y1 + 1e-9 * ystep; y += ystep) {
    svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << detail::fmt(sy(y), 6) << "\" y2=\""
        << detail::fmt(sy(y), 6) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt(sy(y) + 4, 6) << "\" text-anchor=\"end\">"
        << detail::fmt(y) << "</text>\n";
  }
  for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + 1e-9 * xstep; x += xstep) {
    svg << "<line x1=\"" << detail::fmt(sx(x), 6) << "\" x2=\"" << detail::fmt(sx(x), 6) << "\" y1=\"" << top
        << "\" y2=\"" << top + ph << "\" stroke=\"#eee\"/>\n";
    svg << "<text x=\"" << detail::fmt(sx(x), 6) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
        << detail::fmt(x) << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
      << detail::escape_xml(plot.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::escape_xml(plot.y_label) << "</text>\n";
  for (double m : plot.vertical_markers) {
    if (m < x0 || m > x1) continue;
    svg << "<line x1=\"" << detail::fmt(sx(m), 6) << "\" x2=\"" << detail::fmt(sx(m), 6) << "\" y1=\"" << top
        << "\" y2=\"" << top + ph << "\" stroke=\"#555\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* colour = palette[k % (sizeof palette / sizeof *palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      svg << (i ? " " : "") << detail::fmt(sx(s.x[i]), 6) << ',' << detail::fmt(sy(s.y[i]), 6);
    svg << "\"/>\n";
    const double ly = top + 14 + 18.0 * k;
    svg << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 34 << "\" y1=\"" << ly << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << detail::escape_xml(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace thzris::io
