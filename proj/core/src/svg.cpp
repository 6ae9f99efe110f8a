#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rtmwcs::svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kLeft = 70, kRight = 24, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void grow(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

double nice_step(double span, int want) {
  const double raw = span / std::max(want, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (raw <= f * mag) return f * mag;
  return 10.0 * mag;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.grow(v);
    for (double v : s.y) yr.grow(v);
  }
  if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  xr.pad();
  yr.pad();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) {
    return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::ofstream f(path);
  if (!f) throw std::runtime_error("svg: cannot open " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       "font-size=\"15\">" << title << "</text>\n";

  // grid + ticks
  const double xs = nice_step(xr.hi - xr.lo, 6);
  const double ys = nice_step(yr.hi - yr.lo, 6);
  f.precision(6);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-12; v += xs) {
    f << "<line x1=\"" << px(v) << "\" y1=\"" << kTop << "\" x2=\"" << px(v)
      << "\" y2=\"" << kTop + ph << "\" stroke=\"#e0e0e0\"/>\n";
    f << "<text x=\"" << px(v) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">" << v << "</text>\n";
  }
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-12; v += ys) {
    f << "<line x1=\"" << kLeft << "\" y1=\"" << py(v) << "\" x2=\""
      << kLeft + pw << "\" y2=\"" << py(v) << "\" stroke=\"#e0e0e0\"/>\n";
    f << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << v << "</text>\n";
  }
  f << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  f << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  f << "<text x=\"16\" y=\"" << kTop + ph / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << kTop + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % 6];
    f << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k)
      f << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    f << "\"/>\n";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k)
      f << "<circle cx=\"" << px(s.x[k]) << "\" cy=\"" << py(s.y[k])
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    f << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 16 * i
      << "\" font-size=\"12\" fill=\"" << color << "\">" << s.name
      << "</text>\n";
  }
  f << "</svg>\n";
}

}  // namespace rtmwcs::svg
