#include <gtest/gtest.h>

#include <cmath>

#include "iontomo/error.hpp"
#include "iontomo/verify.hpp"

using namespace iontomo;

namespace {

EpsilonTrajectory dense(const OscillatorParams& p, double t_end = 5.0) {
  SolverOptions opts;
  opts.tol = 1e-12;
  return solve_epsilon(p, t_end, static_cast<std::size_t>(t_end / 1e-2), opts);
}

ProbeGrid small_probe() {
  ProbeGrid g;
  g.X = {-1.5, 1.5, 3};
  g.mu = {0.5, 1.5, 3};
  g.nu = {-1.0, 1.0, 3};
  g.t = {0.5, 3.5, 3};
  g.deltas = {0.0, 1.0};
  return g;
}

}  // namespace

TEST(PdeResidual, VacuumStaticTrap) {
  const OscillatorParams p{0.0, 1.0};
  const auto r = pde_residual(
      replacement_evolution(tomogram_function(GaussianState::vacuum()), dense(p)), p,
      ProbeGrid{}, 1e-3);
  EXPECT_LT(r.max_abs_residual, 1e-5);
  EXPECT_EQ(r.probes, 5u * 5 * 5 * 5 * 3);
}

TEST(PdeResidual, EvolvedCatConvergesAtSecondOrder) {
  const OscillatorParams p{0.4, 2.0};
  const auto r = pde_residual(
      replacement_evolution(tomogram_function(CatSpec{1.0, Parity::kEven}), dense(p)), p,
      small_probe(), 1e-3);
  ASSERT_TRUE(r.order.has_value());
  EXPECT_GT(*r.order, 1.7);
  EXPECT_LT(*r.order, 2.3);
  EXPECT_LT(r.max_abs_residual, 1e-4);
  EXPECT_TRUE(r.passed);
}

TEST(PdeResidual, LargerCatStillSecondOrder) {
  // Above the 1e-4 threshold at h = 1e-3, but the truncation error is clean.
  const OscillatorParams p{0.4, 2.0};
  const auto r = pde_residual(
      replacement_evolution(tomogram_function(CatSpec{2.0, Parity::kEven}), dense(p)), p,
      small_probe(), 1e-3);
  ASSERT_TRUE(r.order.has_value());
  EXPECT_NEAR(*r.order, 2.0, 0.1);
  EXPECT_LT(r.refined_max_abs_residual, r.max_abs_residual / 3.5);
}

TEST(PdeResidual, NegativeControlFails) {
  const OscillatorParams p{0.4, 2.0};
  const auto traj = dense(p);
  const TomogramFn g = tomogram_function(gaussian_from_epsilon({}, cplx(1.0, 0.5)));
  const auto good = pde_residual(replacement_evolution(g, traj), p, small_probe(), 1e-3);
  const auto bad = pde_residual(frozen_mu_evolution(g, traj), p, small_probe(), 1e-3);
  EXPECT_FALSE(bad.passed);
  EXPECT_GE(bad.max_abs_residual, 1e-1);
  EXPECT_GE(bad.max_abs_residual, 1e3 * good.max_abs_residual);
}

TEST(PdeResidual, NonFiniteEvaluatorIsAnError) {
  const TomogramEvolutionFn nan_fn = [](double, double, double, double, double) {
    return std::nan("");
  };
  EXPECT_THROW(pde_residual(nan_fn, {0.4, 2.0}, small_probe(), 1e-3), NumericalError);
}

TEST(MomentOdes, StaticTrapHarmonicMotion) {
  const auto traj = solve_epsilon({0.0, 1.0}, 2.0, 20000, {1e-12});
  for (std::size_t i = 0; i < traj.size(); i += 2500) {
    const double t = traj.times()[i];
    const GaussianState s = gaussian_from_epsilon(traj.at(i), 1.0);
    EXPECT_NEAR(s.mean_q, std::sqrt(2.0) * std::cos(t), 1e-10);
    EXPECT_NEAR(s.mean_p, -std::sqrt(2.0) * std::sin(t), 1e-10);
    EXPECT_NEAR(s.sigma_qq, 0.5, 1e-10);
  }
  const auto r = moment_odes_check(traj, 1.0);
  EXPECT_LT(r.max_abs_residual, 1e-6);
  EXPECT_TRUE(r.passed);
}

TEST(MomentOdes, DrivenTrap) {
  const auto traj = solve_epsilon({0.4, 2.0}, 2.0, 20000, {1e-12});
  const auto r = moment_odes_check(traj, cplx(1.0, 0.5));
  EXPECT_LT(r.max_abs_residual, 1e-6);
  ASSERT_TRUE(r.order.has_value());
  EXPECT_NEAR(*r.order, 2.0, 0.3);
  EXPECT_TRUE(r.passed);
}

TEST(MomentOracle, SpotValues) {
  const GaussianState g = wavefunction_moment_oracle(wavefunction::Ground{}, {});
  EXPECT_NEAR(g.mean_q, 0.0, 1e-12);
  EXPECT_NEAR(g.mean_p, 0.0, 1e-12);
  EXPECT_NEAR(g.sigma_qq, 0.5, 1e-12);
  EXPECT_NEAR(g.sigma_pp, 0.5, 1e-12);
  EXPECT_NEAR(g.sigma_pq, 0.0, 1e-12);
  const GaussianState c = wavefunction_moment_oracle(wavefunction::Coherent{1.0}, {});
  EXPECT_NEAR(c.mean_q, std::sqrt(2.0), 1e-12);

  const ModePoint pt = solve_epsilon_at({0.4, 2.0}, 2.0);
  const GaussianState o = wavefunction_moment_oracle(wavefunction::Ground{}, pt);
  const GaussianState d = gaussian_from_epsilon(pt, 0.0);
  EXPECT_NEAR(o.sigma_qq, d.sigma_qq, 1e-8);
  EXPECT_NEAR(o.sigma_pp, d.sigma_pp, 1e-8);
  EXPECT_NEAR(o.sigma_pq, d.sigma_pq, 1e-8);

  EXPECT_THROW(wavefunction_moment_oracle(wavefunction::Number{2}, {}), std::invalid_argument);
}

TEST(ResidualReport, JsonCarriesStepsAndOrder) {
  const auto traj = solve_epsilon({0.4, 2.0}, 1.0, 10000, {1e-12});
  const auto j = moment_odes_check(traj, 0.0).to_json();
  for (const char* key : {"name", "grid", "probes", "h_t", "h_mu", "h_nu", "max_abs_residual",
                          "rms_residual", "refined_max_abs_residual", "order", "thresholds",
                          "passed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}
