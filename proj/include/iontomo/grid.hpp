#pragma once

#include <cstddef>
#include <vector>

#include "iontomo/states.hpp"

namespace iontomo {

/// Uniform closed grid min, ..., max with `count` points.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double step() const { return (max - min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const {
    return i + 1 == count ? max : min + static_cast<double>(i) * step();
  }
  void validate() const;
  bool operator==(const Axis&) const = default;
};

struct GridSpec {
  Axis q{-6.0, 6.0, 121};
  Axis p{-6.0, 6.0, 121};
};

/// W(q_i, p_j), stored row-major with q as the slow index.
struct WignerGrid {
  Axis q_axis;
  Axis p_axis;
  std::vector<double> values;

  WignerGrid() = default;
  explicit WignerGrid(const GridSpec& spec);

  double& operator()(std::size_t i, std::size_t j) {
    return values[i * p_axis.count + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values[i * p_axis.count + j];
  }
  /// Throws FormatError on size mismatch or non-finite values.
  void validate() const;
  /// Bicubic (Catmull-Rom) interpolation; zero outside the grid.
  double interpolate(double q, double p) const;
};

/// Fills the grid row by row; rows run concurrently unless serial mode is set.
/// Each value depends only on its own point, so the output is bit-identical.
WignerGrid sample_wigner(const WignerFunction& w, const GridSpec& spec);

/// Trapezoidal integral of W over the grid, divided by 2 pi.
double normalized_integral(const WignerGrid& grid);

/// ||a - b||_2 / ||b||_2 over grid points (grids must share axes).
double relative_l2_error(const WignerGrid& a, const WignerGrid& b);

/// Means and dispersion matrix of the grid treated as a phase-space density.
GaussianState grid_moments(const WignerGrid& grid);

}  // namespace iontomo
