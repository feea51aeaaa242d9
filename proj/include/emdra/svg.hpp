#pragma once
#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Self-contained SVG line-chart writer (no external plotting dependency).
// Output is deterministic for identical input: fixed palette, fixed
// coordinate formatting, no timestamps.
namespace emdra::svg {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> pts;
};

namespace detail {

inline std::string f2(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

inline std::string tick_label(double v, bool log_scale) {
  if (log_scale) {
    int e = static_cast<int>(std::lround(std::log10(v)));
    return "1e" + std::to_string(e);
  }
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

inline std::string line_chart(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, const std::vector<Series>& series,
                              bool log_x, bool log_y, bool diagonal) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  const double W = 720, H = 540, L = 80, R = 560, T = 48, B = 470;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  auto fold = [&](double x, double y) {
    x = log_x ? std::log10(std::max(x, 1e-12)) : x;
    y = log_y ? std::log10(std::max(y, 1e-12)) : y;
    if (first) {
      xmin = xmax = x;
      ymin = ymax = y;
      first = false;
    } else {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  };
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) fold(x, y);
  if (first) {
    xmin = ymin = 0;
    xmax = ymax = 1;
  }
  if (diagonal) {
    fold(log_x ? std::pow(10.0, xmin) : xmin, log_x ? std::pow(10.0, xmin) : xmin);
    fold(log_x ? std::pow(10.0, xmax) : xmax, log_x ? std::pow(10.0, xmax) : xmax);
  }
  if (log_x) {
    xmin = std::floor(xmin);
    xmax = std::ceil(xmax);
  }
  if (log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;

  auto px = [&](double x) {
    double v = log_x ? std::log10(std::max(x, 1e-12)) : x;
    return L + (v - xmin) / (xmax - xmin) * (R - L);
  };
  auto py = [&](double y) {
    double v = log_y ? std::log10(std::max(y, 1e-12)) : y;
    return B - (v - ymin) / (ymax - ymin) * (B - T);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << (L + R) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";

  // gridlines + ticks (decade ticks in log mode, 5 linear ticks otherwise)
  auto x_ticks = [&] {
    std::vector<double> t;
    if (log_x)
      for (double e = xmin; e <= xmax + 1e-9; e += 1.0) t.push_back(std::pow(10.0, e));
    else
      for (int i = 0; i <= 5; ++i) t.push_back(xmin + (xmax - xmin) * i / 5.0);
    return t;
  }();
  auto y_ticks = [&] {
    std::vector<double> t;
    if (log_y)
      for (double e = ymin; e <= ymax + 1e-9; e += 1.0) t.push_back(std::pow(10.0, e));
    else
      for (int i = 0; i <= 5; ++i) t.push_back(ymin + (ymax - ymin) * i / 5.0);
    return t;
  }();
  for (double tx : x_ticks) {
    double x = px(tx);
    os << "<line x1=\"" << detail::f2(x) << "\" y1=\"" << T << "\" x2=\"" << detail::f2(x)
       << "\" y2=\"" << B << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << detail::f2(x) << "\" y=\"" << B + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::tick_label(tx, log_x) << "</text>\n";
  }
  for (double ty : y_ticks) {
    double y = py(ty);
    os << "<line x1=\"" << L << "\" y1=\"" << detail::f2(y) << "\" x2=\"" << R << "\" y2=\""
       << detail::f2(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << detail::f2(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::tick_label(ty, log_y) << "</text>\n";
  }
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << R - L << "\" height=\"" << B - T
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 44
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
     << "</text>\n";
  os << "<text x=\"20\" y=\"" << (T + B) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 "
     << (T + B) / 2 << ")\">" << ylabel << "</text>\n";

  if (diagonal) {
    double lo = log_x ? std::pow(10.0, std::max(xmin, ymin)) : std::max(xmin, ymin);
    double hi = log_x ? std::pow(10.0, std::min(xmax, ymax)) : std::min(xmax, ymax);
    os << "<line x1=\"" << detail::f2(px(lo)) << "\" y1=\"" << detail::f2(py(lo)) << "\" x2=\""
       << detail::f2(px(hi)) << "\" y2=\"" << detail::f2(py(hi))
       << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[si].pts)
      os << detail::f2(px(x)) << "," << detail::f2(py(y)) << " ";
    os << "\"/>\n";
    for (const auto& [x, y] : series[si].pts)
      os << "<circle cx=\"" << detail::f2(px(x)) << "\" cy=\"" << detail::f2(py(y))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    double ly = T + 18 + 18 * static_cast<double>(si);
    os << "<line x1=\"" << R + 12 << "\" y1=\"" << detail::f2(ly - 4) << "\" x2=\"" << R + 36
       << "\" y2=\"" << detail::f2(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << R + 42 << "\" y=\"" << detail::f2(ly)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[si].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace emdra::svg
