#pragma once

#include <string>
#include <vector>

namespace rtmwcs::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal vector line chart (axes, ticks, one polyline per series with a
/// small legend). Cosmetic output generated from the CSV tables.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

}  // namespace rtmwcs::svg
