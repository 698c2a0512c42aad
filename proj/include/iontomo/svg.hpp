#pragma once

// Minimal SVG output for quick looks at trajectories, slices and grids.

#include <string>
#include <vector>

namespace iontomo::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label);

/// values[i * cols + j]; row i maps to the horizontal axis.
std::string heatmap(const std::vector<double>& values, std::size_t rows,
                    std::size_t cols, double x_min, double x_max, double y_min,
                    double y_max, const std::string& title,
                    const std::string& x_label, const std::string& y_label);

}  // namespace iontomo::svg
