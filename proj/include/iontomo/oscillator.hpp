#pragma once

// Classical mode function of the trapped ion.
//
// The ion is a parametric oscillator with omega^2(t) = 1 + kappa^2 sin^2(Omega t)
// (hbar = m = omega(0) = 1). Every quantum evolution rule in this library is
// expressed through the complex solution eps(t) of
//
//     eps'' + omega^2(t) eps = 0,   eps(0) = 1,   eps'(0) = i,
//
// whose Wronskian Im(conj(eps) eps') = 1 is conserved.

#include <complex>
#include <cstddef>
#include <vector>

namespace iontomo {

using cplx = std::complex<double>;

struct OscillatorParams {
  double kappa = 0.0;        // drive strength, >= 0
  double omega_drive = 1.0;  // drive frequency, > 0

  /// Throws std::invalid_argument if the invariants are violated.
  void validate() const;
};

/// 1 + kappa^2 sin^2(Omega t).
double omega_squared(double t, const OscillatorParams& params);

/// Value of eps and its time derivative at one instant.
struct ModePoint {
  cplx eps{1.0, 0.0};
  cplx deps{0.0, 1.0};

  /// Im(conj(eps) * deps); equals 1 along every exact solution.
  double wronskian() const { return (std::conj(eps) * deps).imag(); }
};

enum class Integrator {
  /// Embedded Dormand-Prince 5(4) with local error control, stepping
  /// exactly onto every output sample.
  kAdaptiveDP54,
  /// Classical RK4, one step per output interval (tol is ignored).
  kFixedRK4,
};

struct SolverOptions {
  double tol = 1e-10;
  Integrator method = Integrator::kAdaptiveDP54;
  std::size_t max_steps = 50'000'000;
};

/// Uniformly sampled eps(t), eps'(t) on [0, t_end].
///
/// Off-grid queries: `interpolate` is linear in t (O(h^2) error);
/// `propagate_to` integrates from the nearest sample with RK4 substeps and is
/// accurate to near round-off for the dense grids used by the verifiers.
class EpsilonTrajectory {
 public:
  EpsilonTrajectory(OscillatorParams params, std::vector<double> times,
                    std::vector<cplx> eps, std::vector<cplx> deps);

  const OscillatorParams& params() const { return params_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<cplx>& eps() const { return eps_; }
  const std::vector<cplx>& deps() const { return deps_; }
  ModePoint at(std::size_t i) const { return {eps_[i], deps_[i]}; }
  double step() const;
  double t_end() const { return times_.back(); }

  /// max_i |Im(conj(eps_i) deps_i) - 1|.
  double max_wronskian_error() const;

  ModePoint interpolate(double t) const;
  ModePoint propagate_to(double t) const;

 private:
  OscillatorParams params_;
  std::vector<double> times_;
  std::vector<cplx> eps_;
  std::vector<cplx> deps_;
};

/// Integrates the mode equation on n_steps uniform intervals of [0, t_end].
/// Throws SolverFailure on step-size underflow or when max_steps is exceeded.
EpsilonTrajectory solve_epsilon(const OscillatorParams& params, double t_end,
                                std::size_t n_steps,
                                const SolverOptions& options = {});

/// eps(t), eps'(t) at a single time, integrated adaptively from t = 0.
ModePoint solve_epsilon_at(const OscillatorParams& params, double t,
                           double tol = 1e-12);

/// Advances (eps, eps') from t0 by dt using `substeps` RK4 steps.
ModePoint rk4_propagate(const OscillatorParams& params, double t0,
                        ModePoint start, double dt, int substeps = 1);

/// Linear phase-space map attached to one trajectory point.
///
/// `initial_point` sends a phase-space point (p, q) at time t to the initial
/// point of the classical trajectory through it (the linear integrals of
/// motion p0, q0):
///
///     p0 = Re(eps) p - Re(eps') q
///     q0 = Im(eps') q - Im(eps) p
///
/// `evolve_frame` maps tomographic frame parameters (mu, nu) to
///
///     mu(t) = Re(eps) mu + Re(eps') nu
///     nu(t) = Im(eps) mu + Im(eps') nu
struct SymplecticMap {
  // Rows act on (p, q).
  double pp = 1.0, pq = 0.0;
  double qp = 0.0, qq = 1.0;

  struct PhasePoint {
    double p;
    double q;
  };
  struct Frame {
    double mu;
    double nu;
  };

  double determinant() const { return pp * qq - pq * qp; }
  PhasePoint initial_point(double p, double q) const {
    return {pp * p + pq * q, qp * p + qq * q};
  }
  /// Transpose of the inverse of the phase-space map, expressed on (mu, nu).
  Frame evolve_frame(double mu, double nu) const {
    // mu q + nu p = mu(t) q0 + nu(t) p0 with (p, q) = M^{-1}(p0, q0), det M = 1.
    return {pp * mu - pq * nu, -qp * mu + qq * nu};
  }
};

/// Wronskian tolerance accepted by `symplectic_map` and friends.
inline constexpr double kWronskianTolerance = 1e-6;

/// Throws InvalidTrajectory when |Im(conj(eps) deps) - 1| >= 1e-6.
void require_valid(const ModePoint& point);

SymplecticMap symplectic_map(const ModePoint& point);
inline SymplecticMap symplectic_map(cplx eps, cplx deps) {
  return symplectic_map(ModePoint{eps, deps});
}

}  // namespace iontomo
