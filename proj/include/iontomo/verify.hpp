#pragma once

// Numerical checks of the quadratic-trap evolution equation
//
//     dw/dt - mu dw/dnu + omega^2(t) nu dw/dmu = 0
//
// and of the Ehrenfest / variance equations of the parametric oscillator.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iontomo/grid.hpp"
#include "iontomo/oscillator.hpp"
#include "iontomo/states.hpp"
#include "iontomo/tomography.hpp"

namespace iontomo {

/// w(X, mu, nu, delta, t).
using TomogramEvolutionFn =
    std::function<double(double X, double mu, double nu, double delta, double t)>;

struct ProbeGrid {
  Axis X{-2.0, 2.0, 5};
  Axis mu{0.4, 1.6, 5};
  Axis nu{-1.2, 1.2, 5};
  Axis t{0.5, 4.0, 5};
  std::vector<double> deltas{-1.0, 0.0, 2.0};
};

struct ResidualThresholds {
  double max_residual = 1e-4;
  double order_min = 1.7;
  double order_max = 2.3;
  /// Coarse residuals below this are round-off; the order is not estimated.
  double noise_floor = 1e-11;
};

struct ResidualReport {
  std::string name;
  std::string grid;           // human-readable probe description
  std::size_t probes = 0;
  double h_t = 0.0;
  double h_mu = 0.0;
  double h_nu = 0.0;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
  double refined_max_abs_residual = 0.0;  // at the refined step
  std::optional<double> order;            // log2(coarse / refined)
  ResidualThresholds thresholds;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Central-difference residual of the evolution equation at every probe,
/// repeated at h / 2 to estimate the convergence order.
ResidualReport pde_residual(const TomogramEvolutionFn& fn,
                            const OscillatorParams& params,
                            const ProbeGrid& probe, double h,
                            const ResidualThresholds& thresholds = {});

/// Evolution by frame replacement, with eps(t) taken from a dense trajectory
/// (propagated exactly to off-grid times).
TomogramEvolutionFn replacement_evolution(TomogramFn initial,
                                          EpsilonTrajectory trajectory);

/// Negative control: only nu is evolved, mu(t) = mu.
TomogramEvolutionFn frozen_mu_evolution(TomogramFn initial,
                                        EpsilonTrajectory trajectory);

/// Central differences of the moments of gaussian_from_epsilon along the
/// trajectory against
///   d<q>/dt = <p>,            d<p>/dt = -w^2 <q>,
///   ds_qq/dt = 2 s_pq,        ds_pq/dt = s_pp - w^2 s_qq,
///   ds_pp/dt = -2 w^2 s_pq.
/// The order estimate compares step h with 2h.
ResidualReport moment_odes_check(const EpsilonTrajectory& traj, cplx alpha,
                                 const ResidualThresholds& thresholds = {
                                     1e-6, 1.7, 2.3, 1e-11});

/// <q>, <p>, and the dispersion matrix by quadrature of |Psi|^2 and of the
/// closed-form derivative of Psi. Ground and coherent states only. Throws
/// NumericalError when two quadrature resolutions disagree.
GaussianState wavefunction_moment_oracle(const WavefunctionKind& kind,
                                         const ModePoint& point);

}  // namespace iontomo
