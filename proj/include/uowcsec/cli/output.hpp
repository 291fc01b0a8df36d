// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file output.hpp
//! CSV rows and a dependency-free SVG line chart.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace uowcsec::cli {

/// Fixed formatting for every floating-point value written to CSV.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string format_terms(const std::map<std::string, int>& terms) {
  std::string out;
  for (const auto& [k, v] : terms) out += (out.empty() ? "" : ";") + k + "=" + std::to_string(v);
  return out;
}

inline std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

struct CsvRow {
  std::string series;
  double x = NAN;
  std::string metric;
  std::string engine;
  double value = NAN;
  double ci_low = NAN;
  double ci_high = NAN;
  std::int64_t n = 0;
  std::string terms_used;
  std::string warnings;
};

/// Writes the header on construction and flushes after every row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& parameter) : out_(out) {
    out_ << "series," << csv_quote(parameter.empty() ? "point" : parameter)
         << ",metric,engine,value,ci_low,ci_high,n,terms_used,warnings\n";
    out_.flush();
  }

  void write(const CsvRow& r) {
    out_ << csv_quote(r.series) << ',' << csv_number(r.x) << ',' << r.metric << ',' << r.engine << ','
         << csv_number(r.value) << ',' << csv_number(r.ci_low) << ',' << csv_number(r.ci_high) << ',' << r.n << ','
         << csv_quote(r.terms_used) << ',' << csv_quote(r.warnings) << '\n';
    out_.flush();
  }

 private:
  std::ostream& out_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // markers instead of a line
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string fmt(double v, const char* spec = "%.2f") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

/// Renders series as an SVG line chart. With `log_y`, non-positive values are dropped.
inline std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<PlotSeries>& series, bool log_y) {
  using detail::fmt;
  const double width = 720, height = 480, left = 80, right = 200, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << detail::svg_escape(title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int x_ticks = 6;
  for (int i = 0; i <= x_ticks; ++i) {
    const double x = x0 + (x1 - x0) * i / x_ticks;
    svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(px(x)) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << detail::tick_label(x) << "</text>\n";
  }
  const int y_ticks = log_y ? static_cast<int>(y1 - y0) : 5;
  for (int i = 0; i <= y_ticks; ++i) {
    const double t = y0 + (y1 - y0) * i / y_ticks;
    const double ypix = top + ph - (t - y0) / (y1 - y0) * ph;
    const std::string label = log_y ? "1e" + detail::tick_label(t) : detail::tick_label(t);
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(ypix) << "\" x2=\"" << left << "\" y2=\"" << fmt(ypix)
        << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(ypix + 4) << "\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << detail::svg_escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::svg_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 10];
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((log_y && !(s.y[i] > 0.0)) || !std::isfinite(s.y[i])) continue;
      if (s.markers) {
        svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"none\" stroke=\""
            << color << "\"/>\n";
      } else {
        path += (path.empty() ? "M" : " L") + fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
      }
    }
    if (!path.empty()) {
      svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = top + 10 + 16.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\"" << (s.markers ? " stroke-dasharray=\"2,2\"" : "") << "/>";
    svg << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << detail::svg_escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace uowcsec::cli
