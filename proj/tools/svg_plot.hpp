#pragma once

#include <string>
#include <vector>

namespace docsim::plot {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG line plot with axes, ticks and a legend.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

/// Cycling qualitative palette.
std::string color(int index);

}  // namespace docsim::plot
