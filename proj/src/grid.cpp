#include "iontomo/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "iontomo/error.hpp"
#include "iontomo/parallel.hpp"

namespace iontomo {

namespace {

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                        t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Trapezoid weight of index i on an axis.
double weight(const Axis& a, std::size_t i) {
  return (i == 0 || i + 1 == a.count) ? 0.5 * a.step() : a.step();
}

}  // namespace

void Axis::validate() const {
  if (count < 2 || !(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
    std::ostringstream msg;
    msg << "invalid axis [" << min << ", " << max << "] with " << count
        << " points";
    throw std::invalid_argument(msg.str());
  }
}

WignerGrid::WignerGrid(const GridSpec& spec)
    : q_axis(spec.q), p_axis(spec.p) {
  q_axis.validate();
  p_axis.validate();
  values.assign(q_axis.count * p_axis.count, 0.0);
}

void WignerGrid::validate() const {
  q_axis.validate();
  p_axis.validate();
  if (values.size() != q_axis.count * p_axis.count) {
    throw FormatError("WignerGrid: value count does not match axes");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw FormatError("WignerGrid: non-finite value");
  }
}

double WignerGrid::interpolate(double q, double p) const {
  const double u = (q - q_axis.min) / q_axis.step();
  const double v = (p - p_axis.min) / p_axis.step();
  const auto nq = static_cast<double>(q_axis.count - 1);
  const auto np = static_cast<double>(p_axis.count - 1);
  if (u < 0.0 || v < 0.0 || u > nq || v > np) return 0.0;
  const auto i = static_cast<std::ptrdiff_t>(std::min(std::floor(u), nq - 1));
  const auto j = static_cast<std::ptrdiff_t>(std::min(std::floor(v), np - 1));
  const double tu = u - static_cast<double>(i);
  const double tv = v - static_cast<double>(j);
  auto at = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
    if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(q_axis.count) ||
        b >= static_cast<std::ptrdiff_t>(p_axis.count)) {
      return 0.0;
    }
    return (*this)(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };
  double col[4];
  for (int a = 0; a < 4; ++a) {
    const std::ptrdiff_t ii = i - 1 + a;
    col[a] = catmull_rom(at(ii, j - 1), at(ii, j), at(ii, j + 1), at(ii, j + 2),
                         tv);
  }
  return catmull_rom(col[0], col[1], col[2], col[3], tu);
}

WignerGrid sample_wigner(const WignerFunction& w, const GridSpec& spec) {
  WignerGrid grid(spec);
  parallel_for(grid.q_axis.count, [&](std::size_t i) {
    const double q = grid.q_axis.at(i);
    for (std::size_t j = 0; j < grid.p_axis.count; ++j) {
      grid(i, j) = w(q, grid.p_axis.at(j));
    }
  });
  return grid;
}

double normalized_integral(const WignerGrid& grid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.q_axis.count; ++i) {
    for (std::size_t j = 0; j < grid.p_axis.count; ++j) {
      sum += weight(grid.q_axis, i) * weight(grid.p_axis, j) * grid(i, j);
    }
  }
  return sum / (2.0 * std::numbers::pi);
}

double relative_l2_error(const WignerGrid& a, const WignerGrid& b) {
  if (!(a.q_axis == b.q_axis) || !(a.p_axis == b.p_axis)) {
    throw std::invalid_argument("relative_l2_error: grids have different axes");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double d = a.values[k] - b.values[k];
    num += d * d;
    den += b.values[k] * b.values[k];
  }
  return std::sqrt(num / den);
}

GaussianState grid_moments(const WignerGrid& grid) {
  double m0 = 0, mq = 0, mp = 0, mqq = 0, mpp = 0, mpq = 0;
  for (std::size_t i = 0; i < grid.q_axis.count; ++i) {
    const double q = grid.q_axis.at(i);
    for (std::size_t j = 0; j < grid.p_axis.count; ++j) {
      const double p = grid.p_axis.at(j);
      const double w = weight(grid.q_axis, i) * weight(grid.p_axis, j) * grid(i, j);
      m0 += w;
      mq += w * q;
      mp += w * p;
      mqq += w * q * q;
      mpp += w * p * p;
      mpq += w * p * q;
    }
  }
  GaussianState s;
  s.mean_q = mq / m0;
  s.mean_p = mp / m0;
  s.sigma_qq = mqq / m0 - s.mean_q * s.mean_q;
  s.sigma_pp = mpp / m0 - s.mean_p * s.mean_p;
  s.sigma_pq = mpq / m0 - s.mean_p * s.mean_q;
  return s;
}

}  // namespace iontomo
