#pragma once

#include <span>
#include <string>
#include <vector>

namespace q1d::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained line plot (axes, ticks, legend) as an SVG document.
std::string line_plot(std::span<const Series> series, const std::string& title, const std::string& x_label,
                      const std::string& y_label);

}  // namespace q1d::svg
