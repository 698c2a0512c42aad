#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "iontomo/error.hpp"
#include "iontomo/grid.hpp"
#include "iontomo/tomography.hpp"
#include "oracles.hpp"

using namespace iontomo;
using oracle::kPi;

namespace {

struct Family {
  std::string name;
  TomogramFn fn;
};

std::vector<Family> families() {
  const ModePoint pt = solve_epsilon_at({0.4, 2.0}, 3.0);
  const GaussianState sq = gaussian_from_epsilon(pt, cplx(0.7, -0.2));
  std::vector<Family> out{
      {"vacuum", tomogram_function(GaussianState::vacuum())},
      {"squeezed", tomogram_function(sq)},
      {"number3", tomogram_number_function(3)},
      {"evolved_cat", evolved(tomogram_function(CatSpec{2.0, Parity::kEven}), pt)},
      {"sinogram", sinogram_tomogram(make_sinogram(
                       tomogram_function(CatSpec{1.0, Parity::kOdd}), 90, {-8, 8, 161}))},
  };
  for (cplx a : {cplx(1.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 2.0)}) {
    for (Parity par : {Parity::kEven, Parity::kOdd}) {
      out.push_back({"cat", tomogram_function(CatSpec{a, par})});
    }
  }
  return out;
}

double x_integral(const TomogramFn& fn, double mu, double nu, double delta) {
  const double r = std::hypot(mu, nu);
  return oracle::trapezoid(
      [&](double x) { return tomogram(fn, {x, mu, nu, delta}); },
      delta - 14.0 * r - 8.0, delta + 14.0 * r + 8.0, 6000);
}

}  // namespace

TEST(TomogramGaussian, SpotValues) {
  const GaussianState vac = GaussianState::vacuum();
  EXPECT_NEAR(tomogram_gaussian(vac, {0.0, 1.0, 0.0, 0.0}), 1.0 / std::sqrt(kPi), 1e-15);
  for (double phi : {0.1, 1.0, 2.5}) {
    const double w = tomogram_gaussian(vac, {0.3, std::cos(phi), std::sin(phi), 0.0});
    EXPECT_NEAR(w, std::exp(-0.09) / std::sqrt(kPi), 1e-14);
  }
  // Coherent alpha = 1: the peak sits at X = sqrt2.
  const GaussianState coh = gaussian_from_epsilon({}, 1.0);
  const double s2 = std::sqrt(2.0);
  EXPECT_NEAR(tomogram_gaussian(coh, {s2, 1, 0, 0}), 1.0 / std::sqrt(kPi), 1e-15);
  EXPECT_THROW(tomogram_gaussian(vac, {0.0, 0.0, 0.0, 0.0}), DegenerateFrame);
}

TEST(TomogramCat, EvenAtZeroAmplitudeIsVacuum) {
  for (int k = 0; k < 20; ++k) {
    const auto [mu, nu] = oracle::random_frame();
    const double Y = oracle::uniform(-3, 3);
    const double r2 = mu * mu + nu * nu;
    EXPECT_NEAR(tomogram_cat(CatSpec{0.0, Parity::kEven}, {Y, mu, nu, 0.0}),
                std::exp(-Y * Y / r2) / std::sqrt(kPi * r2), 1e-14);
  }
  EXPECT_THROW(tomogram_cat(CatSpec{0.0, Parity::kOdd}, {0, 1, 0, 0}),
               NormalizationDivergence);
  EXPECT_THROW(tomogram_cat(CatSpec{1.0, Parity::kEven}, {0, 0, 0, 0}), DegenerateFrame);
}

TEST(TomogramCat, OpticalFramesMatchRotatedWavefunction) {
  // At mu = cos phi, nu = sin phi the cat looks like the cat of alpha e^{-i phi}
  // measured in position.
  for (cplx a : {cplx(2.0, 0.0), cplx(0.0, 2.0), cplx(1.0, 0.7)}) {
    for (bool odd : {false, true}) {
      for (double phi : {0.0, 0.6, kPi / 2, 2.4}) {
        const oracle::CatPsi psi(a * std::exp(cplx(0.0, -phi)), odd);
        const CatSpec spec{a, odd ? Parity::kOdd : Parity::kEven};
        for (double X = -5.0; X <= 5.0; X += 0.31) {
          EXPECT_NEAR(tomogram_cat(spec, {X, std::cos(phi), std::sin(phi), 0.0}),
                      std::norm(psi(X)), 1e-10)
              << a << " odd=" << odd << " phi=" << phi << " X=" << X;
        }
      }
    }
  }
}

TEST(TomogramCat, FringesOnlyForImaginaryAmplitude) {
  // alpha = 2: two separated peaks at +-2 sqrt2 and no fringes between them;
  // alpha = 2i: the position marginal oscillates with full contrast.
  const CatSpec real{2.0, Parity::kEven}, imag{cplx(0.0, 2.0), Parity::kEven};
  EXPECT_LT(tomogram_cat(real, {0.0, 1, 0, 0}), 1e-3);
  EXPECT_GT(tomogram_cat(real, {2.0 * std::sqrt(2.0), 1, 0, 0}), 0.25);
  double lo = 1.0, hi = 0.0;
  for (double X = -0.6; X <= 0.6; X += 0.01) {
    const double w = tomogram_cat(imag, {X, 1, 0, 0});
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  EXPECT_LT(lo, 1e-3 * hi);
}

TEST(TomogramCat, InterferenceIsReal) {
  for (int k = 0; k < 200; ++k) {
    const auto [mu, nu] = oracle::random_frame(0.01, 9.0);
    const cplx a(oracle::uniform(-3, 3), oracle::uniform(-3, 3));
    const auto parts = tomogram_cat_parts(
        CatSpec{a, k % 2 ? Parity::kOdd : Parity::kEven}, oracle::uniform(-6, 6), mu, nu);
    EXPECT_LT(std::abs((parts.w3 + parts.w4).imag()), 1e-12);
    EXPECT_LT(std::abs(parts.total().imag()), 1e-12);
    EXPECT_GE(parts.total().real(), -1e-14);
  }
}

TEST(Tomogram, NormalizationRandomFrames) {
  for (int k = 0; k < 50; ++k) {
    const auto [mu, nu] = oracle::random_frame();
    const double delta = oracle::uniform(-2, 2);
    for (const Family& f : families()) {
      const double tol = f.name == "sinogram" ? 1e-3 : 1e-6;
      EXPECT_NEAR(x_integral(f.fn, mu, nu, delta), 1.0, tol)
          << f.name << " mu=" << mu << " nu=" << nu;
    }
  }
}

TEST(Tomogram, Homogeneity) {
  for (const Family& f : families()) {
    for (int k = 0; k < 25; ++k) {
      const auto [mu, nu] = oracle::random_frame();
      const double Y = oracle::uniform(-4, 4);
      const double w = f.fn(Y, mu, nu);
      for (double lambda : {-2.0, 0.5, 3.0}) {
        EXPECT_NEAR(f.fn(lambda * Y, lambda * mu, lambda * nu), w / std::abs(lambda),
                    1e-10 * std::max(1.0, w))
            << f.name << " lambda=" << lambda;
      }
    }
  }
}

TEST(Tomogram, ShiftCovarianceIsExact) {
  for (const Family& f : families()) {
    for (int k = 0; k < 25; ++k) {
      const auto [mu, nu] = oracle::random_frame();
      const double X = oracle::uniform(-4, 4), delta = oracle::uniform(-3, 3);
      EXPECT_EQ(tomogram(f.fn, {X, mu, nu, delta}), tomogram(f.fn, {X - delta, mu, nu, 0.0}))
          << f.name;
    }
  }
}

TEST(Tomogram, NumberStateVacuumAndSymmetry) {
  const TomogramFn n0 = tomogram_number_function(0);
  const TomogramFn vac = tomogram_function(GaussianState::vacuum());
  EXPECT_NEAR(n0(0.4, 0.8, -0.3), vac(0.4, 0.8, -0.3), 1e-15);
  EXPECT_NEAR(tomogram_number(1, {0.0, 1, 0, 0}), 0.0, 1e-15);
  EXPECT_THROW(tomogram_number(-1, {0.0, 1, 0, 0}), std::invalid_argument);
}

TEST(ProjectWigner, VacuumGridAndGaussianStates) {
  const WignerGrid vac = sample_wigner(wigner_function(GaussianState::vacuum()),
                                       {{-8, 8, 321}, {-8, 8, 321}});
  EXPECT_NEAR(project_wigner(vac, {0.0, 1, 0, 0}), 1.0 / std::sqrt(kPi), 1e-6);

  const GaussianState sq = gaussian_from_epsilon(solve_epsilon_at({0.4, 2.0}, 5.0),
                                                 cplx(-0.4, 0.9));
  const WignerFunction w = wigner_function(sq);
  for (int k = 0; k < 30; ++k) {
    const auto [mu, nu] = oracle::random_frame();
    const TomogramQuery q{oracle::uniform(-4, 4), mu, nu, oracle::uniform(-1, 1)};
    const ProjectionResult r = project_wigner_checked(w, q);
    EXPECT_FALSE(r.truncated);
    EXPECT_NEAR(r.value, tomogram_gaussian(sq, q), 1e-6);
  }
}

TEST(ProjectWigner, FlagsTruncatedSupport) {
  const WignerGrid small = sample_wigner(wigner_function(CatSpec{2.0, Parity::kEven}),
                                         {{-2, 2, 81}, {-2, 2, 81}});
  EXPECT_TRUE(project_wigner_checked(small, {0.0, 0.0, 1.0, 0.0}).truncated);
}

TEST(EvolveTomogram, IdentityRotationAndDirectConstruction) {
  const TomogramFn cat = tomogram_function(CatSpec{cplx(1.0, 1.0), Parity::kOdd});
  EXPECT_EQ(evolve_tomogram(cat, {}, {0.4, 0.9, -0.3, 0.2}), tomogram(cat, {0.4, 0.9, -0.3, 0.2}));

  const TomogramFn vac = tomogram_function(GaussianState::vacuum());
  const ModePoint rot = solve_epsilon_at({0.0, 1.0}, 2.2);
  EXPECT_NEAR(evolve_tomogram(vac, rot, {0.4, 0.9, -0.3, 0.2}), tomogram(vac, {0.4, 0.9, -0.3, 0.2}),
              1e-12);

  const cplx alpha(0.8, -0.6);
  const TomogramFn g0 = tomogram_function(gaussian_from_epsilon({}, alpha));
  const ModePoint pt = solve_epsilon_at({0.4, 2.0}, 3.0);
  const GaussianState direct = gaussian_from_epsilon(pt, alpha);
  double sup = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto [mu, nu] = oracle::random_frame();
    const TomogramQuery q{oracle::uniform(-3, 3), mu, nu, oracle::uniform(-1, 1)};
    sup = std::max(sup, std::abs(evolve_tomogram(g0, pt, q) - tomogram_gaussian(direct, q)));
  }
  EXPECT_LT(sup, 1e-8);
}

TEST(OpticalSlice, RestrictsEvolvedTomogram) {
  const TomogramFn cat = tomogram_function(CatSpec{2.0, Parity::kEven});
  const ModePoint pt = solve_epsilon_at({0.4, 2.0}, 1.7);
  for (double phi : {0.0, 0.9, 2.0}) {
    EXPECT_EQ(optical_slice(cat, phi, 0.7, pt),
              evolve_tomogram(cat, pt, {0.7, std::cos(phi), std::sin(phi), 0.0}));
    EXPECT_EQ(optical_slice(cat, phi, 0.7), tomogram(cat, {0.7, std::cos(phi), std::sin(phi), 0}));
  }
  const TomogramFn vac = tomogram_function(GaussianState::vacuum());
  EXPECT_NEAR(optical_slice(vac, 1.1, 0.5), std::exp(-0.25) / std::sqrt(kPi), 1e-15);
}

TEST(Sinogram, VacuumColumnsAreIdentical) {
  const OpticalSinogram s =
      make_sinogram(tomogram_function(GaussianState::vacuum()), 32, {-6, 6, 121});
  for (std::size_t i = 1; i < 32; ++i) {
    for (std::size_t j = 0; j < 121; ++j) EXPECT_NEAR(s(i, j), s(0, j), 1e-15);
    EXPECT_NEAR(s.column_integral(i), 1.0, 1e-10);
  }
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(make_sinogram(tomogram_function(GaussianState::vacuum()), 0, {-6, 6, 11}),
               std::invalid_argument);
}

TEST(Sinogram, BackedEvaluatorReproducesNodes) {
  const TomogramFn cat = tomogram_function(CatSpec{cplx(0.0, 2.0), Parity::kEven});
  const OpticalSinogram s = make_sinogram(cat, 60, {-8, 8, 161});
  const TomogramFn back = sinogram_tomogram(s);
  for (std::size_t i = 0; i < 60; i += 7) {
    const double phi = s.phi_axis.at(i);
    for (std::size_t j = 3; j < 161; j += 11) {
      const double X = s.x_axis.at(j);
      EXPECT_NEAR(back(X, std::cos(phi), std::sin(phi)), s(i, j), 1e-12);
      // phi + pi is the mirrored column.
      EXPECT_NEAR(back(-X, -std::cos(phi), -std::sin(phi)), s(i, j), 1e-12);
    }
  }
}

TEST(RampKernel, EvenWithZeroDcResponse) {
  const double tau = 0.0625;
  const std::vector<double> k = ramp_hann_kernel(tau, 4000);
  ASSERT_EQ(k.size(), 8001u);
  for (std::size_t n = 1; n <= 4000; ++n) EXPECT_EQ(k[4000 + n], k[4000 - n]);
  double dc = 0.0;
  for (double v : k) dc += v * tau;
  EXPECT_NEAR(dc, 0.0, 1e-3 * k[4000] * tau);
  EXPECT_GT(k[4000], 0.0);
}
