#pragma once

// Symplectic tomograms w(X, mu, nu, delta): the probability density of the
// observable X = mu q + nu p + delta. They depend on X and delta only through
// Y = X - delta, so evaluators below take (Y, mu, nu).

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "iontomo/grid.hpp"
#include "iontomo/oscillator.hpp"
#include "iontomo/states.hpp"

namespace iontomo {

struct TomogramQuery {
  double X = 0.0;
  double mu = 1.0;
  double nu = 0.0;
  double delta = 0.0;

  double Y() const { return X - delta; }
};

/// P(Y, mu, nu).
using TomogramFn = std::function<double(double Y, double mu, double nu)>;

/// w(X, mu, nu, delta) = P(X - delta, mu, nu).
inline double tomogram(const TomogramFn& fn, const TomogramQuery& q) {
  return fn(q.Y(), q.mu, q.nu);
}

/// Normal density with variance mu^2 s_qq + nu^2 s_pp + 2 mu nu s_pq and mean
/// mu <q> + nu <p> + delta. Throws DegenerateFrame if the variance is not
/// positive.
double tomogram_gaussian(const GaussianState& state, const TomogramQuery& q);

/// Pieces of the even/odd coherent-state tomogram
///   N^2 / sqrt(pi (mu^2 + nu^2)) * (w1 + w2 +- (w3 + w4))
/// with s = alpha (mu - i nu) / sqrt2. w4 is computed from its own formula,
/// not as conj(w3).
struct CatTomogramParts {
  double prefactor;
  double w1;
  double w2;
  std::complex<double> w3;
  std::complex<double> w4;
  double sign;

  std::complex<double> total() const {
    return prefactor * (w1 + w2 + sign * (w3 + w4));
  }
};

CatTomogramParts tomogram_cat_parts(const CatSpec& spec, double Y, double mu,
                                    double nu);
double tomogram_cat(const CatSpec& spec, const TomogramQuery& q);

/// Tomogram of the number state m at t = 0: |psi_m(Y/r)|^2 / r, r = |(mu, nu)|.
double tomogram_number(int m, const TomogramQuery& q);

TomogramFn tomogram_function(const GaussianState& state);
TomogramFn tomogram_function(const CatSpec& spec);
TomogramFn tomogram_number_function(int m);

/// w(X, mu, nu, delta, t) = w0(X - delta, mu(t), nu(t)) with
/// mu(t) = Re(eps) mu + Re(eps') nu, nu(t) = Im(eps) mu + Im(eps') nu.
double evolve_tomogram(const TomogramFn& initial, const ModePoint& point,
                       const TomogramQuery& q);
TomogramFn evolved(TomogramFn initial, const ModePoint& point);

/// Optical tomography: mu = cos(phi), nu = sin(phi), delta = 0; with a mode
/// point the frame is evolved to time t first.
double optical_slice(const TomogramFn& fn, double phi, double X,
                     const std::optional<ModePoint>& point = std::nullopt);

// ---------------------------------------------------------------------------
// Sinograms

/// Angles phi_i = i pi / count, i = 0 .. count - 1.
struct AngleAxis {
  std::size_t count = 180;

  double at(std::size_t i) const;
  double step() const;
  bool operator==(const AngleAxis&) const = default;
};

/// w(X_j, phi_i), row-major with phi as the slow index.
struct OpticalSinogram {
  AngleAxis phi_axis;
  Axis x_axis;
  std::vector<double> values;

  double& operator()(std::size_t i, std::size_t j) {
    return values[i * x_axis.count + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values[i * x_axis.count + j];
  }
  void validate() const;
  /// Trapezoidal integral over X of column i.
  double column_integral(std::size_t i) const;
};

OpticalSinogram make_sinogram(const TomogramFn& fn, std::size_t phi_count,
                              const Axis& x_axis,
                              const std::optional<ModePoint>& point = std::nullopt);

/// Tomogram evaluator backed by a sinogram (bilinear in phi and X), extended
/// to all (mu, nu) through P(Y, r n) = P(Y / r, n) / r and
/// P(Y, -n) = P(-Y, n).
TomogramFn sinogram_tomogram(OpticalSinogram sinogram);

// ---------------------------------------------------------------------------
// Projection (oracle) and reconstruction

struct ProjectionOptions {
  std::size_t points = 2049;
  /// Boundary density (per unit X) above which the result is flagged.
  double truncation_threshold = 1e-6;
};

struct ProjectionResult {
  double value;
  double boundary_mass;
  bool truncated;
};

/// Integrates W over the line mu q + nu p = X - delta, divided by
/// 2 pi |(mu, nu)|. The line segment covers the evaluator's support disc.
ProjectionResult project_wigner_checked(const WignerFunction& w,
                                        const TomogramQuery& q,
                                        const ProjectionOptions& opts = {});
double project_wigner(const WignerFunction& w, const TomogramQuery& q,
                      const ProjectionOptions& opts = {});

/// Same line integral through a sampled grid (bicubic interpolation), clipped
/// to the grid rectangle.
ProjectionResult project_wigner_checked(const WignerGrid& grid,
                                        const TomogramQuery& q,
                                        const ProjectionOptions& opts = {});
double project_wigner(const WignerGrid& grid, const TomogramQuery& q,
                      const ProjectionOptions& opts = {});

struct InversionOptions {
  double frame_cutoff = 12.0;   // mu, nu in [-K, K]
  std::size_t frame_points = 193;
  double y_cutoff = 12.0;       // u = Y / |(mu, nu)| in [-L, L]
  std::size_t y_points = 513;
  double normalization_tolerance = 1e-2;
};

/// W(q, p) = (1 / 2 pi) int P(Y, mu, nu) exp(i (Y - mu q - nu p)) dY dmu dnu,
/// trapezoidal in all three variables. Throws ReconstructionQuality when the
/// phase-space integral / 2 pi misses 1 by more than the tolerance.
WignerGrid invert_to_wigner(const TomogramFn& fn, const GridSpec& out,
                            const InversionOptions& opts = {});

struct FbpOptions {
  std::size_t min_angles = 16;
};

/// Filtered backprojection: ramp filter with Hann apodization (zero at the
/// detector Nyquist frequency), linear interpolation in the backprojection,
/// scaled so that the result follows the 2 pi normalization.
WignerGrid radon_reconstruct(const OpticalSinogram& sinogram,
                             const GridSpec& out, const FbpOptions& opts = {});

/// Sampled apodized ramp kernel k(n tau) for n = -(n_max) .. n_max.
std::vector<double> ramp_hann_kernel(double tau, std::size_t n_max);

}  // namespace iontomo
