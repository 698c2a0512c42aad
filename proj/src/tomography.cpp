#include "iontomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "iontomo/error.hpp"
#include "iontomo/parallel.hpp"

namespace iontomo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double frame_norm_squared(double mu, double nu) {
  const double r2 = mu * mu + nu * nu;
  if (!(r2 > 0.0)) {
    throw DegenerateFrame("tomogram frame (mu, nu) = (0, 0)");
  }
  return r2;
}

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

double tomogram_gaussian(const GaussianState& state, const TomogramQuery& q) {
  frame_norm_squared(q.mu, q.nu);
  const double var = q.mu * q.mu * state.sigma_qq + q.nu * q.nu * state.sigma_pp +
                     2.0 * q.mu * q.nu * state.sigma_pq;
  if (!(var > 0.0)) {
    std::ostringstream msg;
    msg << "degenerate frame: quadrature variance " << var << " at (mu, nu) = ("
        << q.mu << ", " << q.nu << ")";
    throw DegenerateFrame(msg.str());
  }
  const double mean = q.mu * state.mean_q + q.nu * state.mean_p + q.delta;
  const double d = q.X - mean;
  return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

CatTomogramParts tomogram_cat_parts(const CatSpec& spec, double Y, double mu,
                                    double nu) {
  spec.validate();
  const double r2 = frame_norm_squared(mu, nu);
  const double n = cat_normalization(std::norm(spec.alpha), spec.parity);
  const cplx s = spec.alpha * cplx{mu, -nu} / kSqrt2;
  const cplx sc = std::conj(s);
  const double a2 = std::norm(spec.alpha);
  CatTomogramParts parts;
  parts.prefactor = n * n / std::sqrt(kPi * r2);
  const double m1 = Y - (s + sc).real();
  const double m2 = Y + (s + sc).real();
  parts.w1 = std::exp(-m1 * m1 / r2);
  parts.w2 = std::exp(-m2 * m2 / r2);
  const cplx d3 = Y - s + sc;
  const cplx d4 = Y + s - sc;
  parts.w3 = std::exp(-2.0 * a2 - d3 * d3 / r2);
  parts.w4 = std::exp(-2.0 * a2 - d4 * d4 / r2);
  parts.sign = spec.parity == Parity::kEven ? 1.0 : -1.0;
  return parts;
}

double tomogram_cat(const CatSpec& spec, const TomogramQuery& q) {
  return tomogram_cat_parts(spec, q.Y(), q.mu, q.nu).total().real();
}

double tomogram_number(int m, const TomogramQuery& q) {
  if (m < 0 || m > kMaxNumberState) {
    throw std::invalid_argument("number state index out of range");
  }
  const double r = std::sqrt(frame_norm_squared(q.mu, q.nu));
  const double psi = hermite_function(m, q.Y() / r);
  return psi * psi / r;
}

TomogramFn tomogram_function(const GaussianState& state) {
  state.validate();
  return [state](double Y, double mu, double nu) {
    return tomogram_gaussian(state, {Y, mu, nu, 0.0});
  };
}

TomogramFn tomogram_function(const CatSpec& spec) {
  spec.validate();
  return [spec](double Y, double mu, double nu) {
    return tomogram_cat(spec, {Y, mu, nu, 0.0});
  };
}

TomogramFn tomogram_number_function(int m) {
  if (m < 0 || m > kMaxNumberState) {
    throw std::invalid_argument("number state index out of range");
  }
  return [m](double Y, double mu, double nu) {
    return tomogram_number(m, {Y, mu, nu, 0.0});
  };
}

double evolve_tomogram(const TomogramFn& initial, const ModePoint& point,
                       const TomogramQuery& q) {
  const SymplecticMap map = symplectic_map(point);
  const auto f = map.evolve_frame(q.mu, q.nu);
  if (f.mu == 0.0 && f.nu == 0.0) {
    throw DegenerateFrame("evolved frame collapsed to (0, 0)");
  }
  return initial(q.Y(), f.mu, f.nu);
}

TomogramFn evolved(TomogramFn initial, const ModePoint& point) {
  const SymplecticMap map = symplectic_map(point);
  return [fn = std::move(initial), map](double Y, double mu, double nu) {
    const auto f = map.evolve_frame(mu, nu);
    if (f.mu == 0.0 && f.nu == 0.0) {
      throw DegenerateFrame("evolved frame collapsed to (0, 0)");
    }
    return fn(Y, f.mu, f.nu);
  };
}

double optical_slice(const TomogramFn& fn, double phi, double X,
                     const std::optional<ModePoint>& point) {
  const TomogramQuery q{X, std::cos(phi), std::sin(phi), 0.0};
  if (point) return evolve_tomogram(fn, *point, q);
  return tomogram(fn, q);
}

// ---------------------------------------------------------------------------

double AngleAxis::at(std::size_t i) const {
  return kPi * static_cast<double>(i) / static_cast<double>(count);
}

double AngleAxis::step() const { return kPi / static_cast<double>(count); }

void OpticalSinogram::validate() const {
  if (phi_axis.count == 0) throw FormatError("sinogram: no angles");
  x_axis.validate();
  if (values.size() != phi_axis.count * x_axis.count) {
    throw FormatError("sinogram: value count does not match axes");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw FormatError("sinogram: non-finite value");
  }
}

double OpticalSinogram::column_integral(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < x_axis.count; ++j) {
    sum += trapezoid_weight(j, x_axis.count, x_axis.step()) * (*this)(i, j);
  }
  return sum;
}

OpticalSinogram make_sinogram(const TomogramFn& fn, std::size_t phi_count,
                              const Axis& x_axis,
                              const std::optional<ModePoint>& point) {
  x_axis.validate();
  if (phi_count == 0) throw std::invalid_argument("make_sinogram: no angles");
  OpticalSinogram s{AngleAxis{phi_count}, x_axis, {}};
  s.values.assign(phi_count * x_axis.count, 0.0);
  parallel_for(phi_count, [&](std::size_t i) {
    const double phi = s.phi_axis.at(i);
    for (std::size_t j = 0; j < x_axis.count; ++j) {
      s(i, j) = optical_slice(fn, phi, x_axis.at(j), point);
    }
  });
  return s;
}

TomogramFn sinogram_tomogram(OpticalSinogram sinogram) {
  sinogram.validate();
  return [s = std::move(sinogram)](double Y, double mu, double nu) {
    const double r = std::sqrt(frame_norm_squared(mu, nu));
    double phi = std::atan2(nu, mu);
    double u = Y / r;
    if (phi < 0.0) {
      phi += kPi;
      u = -u;
    }
    const double fi = phi / s.phi_axis.step();
    auto i0 = static_cast<std::size_t>(std::floor(fi));
    const double wphi = fi - static_cast<double>(i0);
    i0 %= s.phi_axis.count;
    // Column count wraps to angle 0 with X reflected.
    const std::size_t i1 = i0 + 1;
    auto column = [&](std::size_t i, double x) {
      bool flip = false;
      if (i >= s.phi_axis.count) {
        i -= s.phi_axis.count;
        flip = true;
      }
      if (flip) x = -x;
      const double fx = (x - s.x_axis.min) / s.x_axis.step();
      if (fx < 0.0 || fx > static_cast<double>(s.x_axis.count - 1)) return 0.0;
      auto j0 = static_cast<std::size_t>(std::floor(fx));
      if (j0 + 1 >= s.x_axis.count) j0 = s.x_axis.count - 2;
      const double wx = fx - static_cast<double>(j0);
      return (1.0 - wx) * s(i, j0) + wx * s(i, j0 + 1);
    };
    return ((1.0 - wphi) * column(i0, u) + wphi * column(i1, u)) / r;
  };
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
ProjectionResult integrate_line(F&& w, const TomogramQuery& q, double l_lo,
                                double l_hi, const ProjectionOptions& opts) {
  const double r2 = frame_norm_squared(q.mu, q.nu);
  const double r = std::sqrt(r2);
  const double Y = q.Y();
  // Foot of the line closest to the origin and unit direction along it.
  const double q0 = Y * q.mu / r2;
  const double p0 = Y * q.nu / r2;
  const double tq = -q.nu / r;
  const double tp = q.mu / r;
  const std::size_t n = std::max<std::size_t>(opts.points, 3);
  const double h = (l_hi - l_lo) / static_cast<double>(n - 1);
  double sum = 0.0;
  double first = 0.0;
  double last = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = l_lo + static_cast<double>(k) * h;
    const double v = w(q0 + l * tq, p0 + l * tp);
    if (!std::isfinite(v)) throw NumericalError("project_wigner: non-finite W");
    sum += trapezoid_weight(k, n, h) * v;
    if (k == 0) first = v;
    if (k + 1 == n) last = v;
  }
  const double norm = 2.0 * kPi * r;
  ProjectionResult res;
  res.value = sum / norm;
  res.boundary_mass = (std::abs(first) + std::abs(last)) / norm;
  res.truncated = res.boundary_mass > opts.truncation_threshold;
  return res;
}

}  // namespace

ProjectionResult project_wigner_checked(const WignerFunction& w,
                                        const TomogramQuery& q,
                                        const ProjectionOptions& opts) {
  const double r2 = frame_norm_squared(q.mu, q.nu);
  const double r = std::sqrt(r2);
  const double q0 = q.Y() * q.mu / r2;
  const double p0 = q.Y() * q.nu / r2;
  const double tq = -q.nu / r;
  const double tp = q.mu / r;
  const double l_center = (w.center_q - q0) * tq + (w.center_p - p0) * tp;
  return integrate_line(w.eval, q, l_center - w.radius, l_center + w.radius,
                        opts);
}

double project_wigner(const WignerFunction& w, const TomogramQuery& q,
                      const ProjectionOptions& opts) {
  return project_wigner_checked(w, q, opts).value;
}

ProjectionResult project_wigner_checked(const WignerGrid& grid,
                                        const TomogramQuery& q,
                                        const ProjectionOptions& opts) {
  const double r2 = frame_norm_squared(q.mu, q.nu);
  const double r = std::sqrt(r2);
  const double q0 = q.Y() * q.mu / r2;
  const double p0 = q.Y() * q.nu / r2;
  const double tq = -q.nu / r;
  const double tp = q.mu / r;
  // Clip the line against the grid rectangle (slab method).
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  auto clip = [&](double origin, double dir, double a, double b) {
    if (dir == 0.0) {
      if (origin < a || origin > b) {
        lo = 1.0;
        hi = 0.0;
      }
      return;
    }
    double t1 = (a - origin) / dir;
    double t2 = (b - origin) / dir;
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  };
  clip(q0, tq, grid.q_axis.min, grid.q_axis.max);
  clip(p0, tp, grid.p_axis.min, grid.p_axis.max);
  if (!(hi > lo)) return {0.0, 0.0, false};
  return integrate_line(
      [&grid](double qq, double pp) { return grid.interpolate(qq, pp); }, q, lo,
      hi, opts);
}

double project_wigner(const WignerGrid& grid, const TomogramQuery& q,
                      const ProjectionOptions& opts) {
  return project_wigner_checked(grid, q, opts).value;
}

WignerGrid invert_to_wigner(const TomogramFn& fn, const GridSpec& out,
                            const InversionOptions& opts) {
  if (opts.frame_points < 3 || opts.y_points < 3 || !(opts.frame_cutoff > 0.0) ||
      !(opts.y_cutoff > 0.0)) {
    throw std::invalid_argument("invert_to_wigner: invalid discretization");
  }
  const std::size_t nf = opts.frame_points;
  const std::size_t ny = opts.y_points;
  const double hf = 2.0 * opts.frame_cutoff / static_cast<double>(nf - 1);
  const double hu = 2.0 * opts.y_cutoff / static_cast<double>(ny - 1);
  auto frame_at = [&](std::size_t k) {
    return -opts.frame_cutoff + static_cast<double>(k) * hf;
  };

  // Characteristic function F(mu, nu) = int P(Y, mu, nu) e^{iY} dY, with the
  // Y window scaled by r = |(mu, nu)|.
  std::vector<cplx> F(nf * nf);
  parallel_for(nf, [&](std::size_t a) {
    const double mu = frame_at(a);
    for (std::size_t b = 0; b < nf; ++b) {
      const double nu = frame_at(b);
      const double r = std::hypot(mu, nu);
      cplx acc{0.0, 0.0};
      if (r < 1e-12) {
        for (std::size_t k = 0; k < ny; ++k) {
          const double u = -opts.y_cutoff + static_cast<double>(k) * hu;
          acc += trapezoid_weight(k, ny, hu) * fn(u, 1.0, 0.0);
        }
      } else {
        for (std::size_t k = 0; k < ny; ++k) {
          const double u = -opts.y_cutoff + static_cast<double>(k) * hu;
          const double v = fn(r * u, mu, nu);
          if (!std::isfinite(v)) {
            throw NumericalError("invert_to_wigner: non-finite tomogram value");
          }
          acc += trapezoid_weight(k, ny, hu) * v * std::polar(1.0, r * u);
        }
        acc *= r;
      }
      F[a * nf + b] = acc;
    }
  });

  WignerGrid grid(out);
  const std::size_t nq = grid.q_axis.count;
  const std::size_t np = grid.p_axis.count;
  // G(mu_a, p_j) = sum_b w_b F(mu_a, nu_b) e^{-i nu_b p_j}.
  std::vector<cplx> G(nf * np);
  parallel_for(nf, [&](std::size_t a) {
    for (std::size_t j = 0; j < np; ++j) {
      const double p = grid.p_axis.at(j);
      cplx acc{0.0, 0.0};
      for (std::size_t b = 0; b < nf; ++b) {
        acc += trapezoid_weight(b, nf, hf) * F[a * nf + b] *
               std::polar(1.0, -frame_at(b) * p);
      }
      G[a * np + j] = acc;
    }
  });
  parallel_for(nq, [&](std::size_t i) {
    const double q = grid.q_axis.at(i);
    for (std::size_t j = 0; j < np; ++j) {
      cplx acc{0.0, 0.0};
      for (std::size_t a = 0; a < nf; ++a) {
        acc += trapezoid_weight(a, nf, hf) * G[a * np + j] *
               std::polar(1.0, -frame_at(a) * q);
      }
      grid(i, j) = acc.real() / (2.0 * kPi);
    }
  });

  const double norm = normalized_integral(grid);
  if (!(std::abs(norm - 1.0) <= opts.normalization_tolerance)) {
    std::ostringstream msg;
    msg << "invert_to_wigner: reconstructed phase-space integral / 2pi = "
        << norm << " (tolerance " << opts.normalization_tolerance
        << "); enlarge the frame cutoff, the Y window, or the output grid";
    throw ReconstructionQuality(msg.str());
  }
  return grid;
}

std::vector<double> ramp_hann_kernel(double tau, std::size_t n_max) {
  // k(s) = (1/pi) int_0^B rho H(rho) cos(rho s) drho, B = pi / tau,
  // H = (1 + cos(pi rho / B)) / 2, sampled at s = n tau.
  const double b = kPi / tau;
  auto ramp = [&](long m) {
    if (m == 0) return 0.5 * b * b;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double s = static_cast<double>(m) * tau;
    return (sign - 1.0) / (s * s);
  };
  std::vector<double> k(2 * n_max + 1);
  for (std::size_t idx = 0; idx < k.size(); ++idx) {
    const long n = static_cast<long>(idx) - static_cast<long>(n_max);
    k[idx] = (0.5 * ramp(n) + 0.25 * (ramp(n + 1) + ramp(n - 1))) / kPi;
  }
  return k;
}

WignerGrid radon_reconstruct(const OpticalSinogram& sinogram,
                             const GridSpec& out, const FbpOptions& opts) {
  sinogram.validate();
  if (sinogram.phi_axis.count < opts.min_angles) {
    std::ostringstream msg;
    msg << "radon_reconstruct: " << sinogram.phi_axis.count
        << " angles, at least " << opts.min_angles << " required";
    throw InsufficientAngles(msg.str());
  }
  const std::size_t nphi = sinogram.phi_axis.count;
  const std::size_t nx = sinogram.x_axis.count;
  const double tau = sinogram.x_axis.step();
  const std::vector<double> kernel = ramp_hann_kernel(tau, nx - 1);

  std::vector<double> filtered(nphi * nx);
  parallel_for(nphi, [&](std::size_t i) {
    for (std::size_t j = 0; j < nx; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < nx; ++m) {
        acc += kernel[j + (nx - 1) - m] * sinogram(i, m);
      }
      filtered[i * nx + j] = tau * acc;
    }
  });

  std::vector<double> cosines(nphi);
  std::vector<double> sines(nphi);
  for (std::size_t i = 0; i < nphi; ++i) {
    cosines[i] = std::cos(sinogram.phi_axis.at(i));
    sines[i] = std::sin(sinogram.phi_axis.at(i));
  }
  const double dphi = sinogram.phi_axis.step();
  const double x0 = sinogram.x_axis.min;
  const double last = static_cast<double>(nx - 1);

  WignerGrid grid(out);
  parallel_for(grid.q_axis.count, [&](std::size_t a) {
    const double q = grid.q_axis.at(a);
    for (std::size_t b = 0; b < grid.p_axis.count; ++b) {
      const double p = grid.p_axis.at(b);
      double acc = 0.0;
      for (std::size_t i = 0; i < nphi; ++i) {
        const double f = (q * cosines[i] + p * sines[i] - x0) / tau;
        if (f < 0.0 || f > last) continue;
        auto j = static_cast<std::size_t>(f);
        if (j + 1 >= nx) j = nx - 2;
        const double w = f - static_cast<double>(j);
        acc += (1.0 - w) * filtered[i * nx + j] + w * filtered[i * nx + j + 1];
      }
      grid(a, b) = acc * dphi;
    }
  });
  return grid;
}

}  // namespace iontomo
