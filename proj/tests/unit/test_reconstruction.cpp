#include <gtest/gtest.h>

#include <cmath>

#include "iontomo/error.hpp"
#include "iontomo/grid.hpp"
#include "iontomo/parallel.hpp"
#include "iontomo/tomography.hpp"
#include "oracles.hpp"

using namespace iontomo;
using oracle::kPi;

namespace {

const GridSpec kCoarse{{-6, 6, 61}, {-6, 6, 61}};

std::size_t index_of_max(const WignerGrid& g) {
  return static_cast<std::size_t>(
      std::max_element(g.values.begin(), g.values.end()) - g.values.begin());
}

}  // namespace

TEST(FourierInversion, Vacuum) {
  const WignerGrid g = invert_to_wigner(tomogram_function(GaussianState::vacuum()), kCoarse);
  EXPECT_NEAR(g(30, 30), 2.0, 2e-2);
  const GaussianState m = grid_moments(g);
  EXPECT_NEAR(m.mean_q, 0.0, 1e-3);
  EXPECT_NEAR(m.mean_p, 0.0, 1e-3);
  EXPECT_NEAR(m.sigma_qq, 0.5, 1e-2);
  EXPECT_NEAR(m.sigma_pp, 0.5, 1e-2);
  EXPECT_NEAR(m.sigma_pq, 0.0, 1e-2);
}

TEST(FourierInversion, CoherentPeakPosition) {
  const GridSpec fine{{-5, 5, 201}, {-5, 5, 201}};
  const WignerGrid g = invert_to_wigner(tomogram_function(gaussian_from_epsilon({}, 1.0)), fine);
  const std::size_t k = index_of_max(g);
  EXPECT_NEAR(g.q_axis.at(k / 201), std::sqrt(2.0), 0.05);
  EXPECT_NEAR(g.p_axis.at(k % 201), 0.0, 0.05);
}

TEST(FourierInversion, SqueezedStateMomentsRoundTrip) {
  const GaussianState s = gaussian_from_epsilon(solve_epsilon_at({0.4, 2.0}, 3.0), cplx(0.5, -0.3));
  const WignerGrid g = invert_to_wigner(tomogram_function(s), kCoarse);
  const GaussianState m = grid_moments(g);
  EXPECT_NEAR(m.mean_q, s.mean_q, 1e-3);
  EXPECT_NEAR(m.mean_p, s.mean_p, 1e-3);
  EXPECT_NEAR(m.sigma_qq, s.sigma_qq, 1e-2);
  EXPECT_NEAR(m.sigma_pp, s.sigma_pp, 1e-2);
  EXPECT_NEAR(m.sigma_pq, s.sigma_pq, 1e-2);
}

TEST(FourierInversion, EvenCatL2Error) {
  const CatSpec cat{2.0, Parity::kEven};
  const WignerGrid g = invert_to_wigner(tomogram_function(cat), kCoarse);
  const WignerGrid ref = sample_wigner(wigner_function(cat), kCoarse);
  EXPECT_LT(relative_l2_error(g, ref), 0.05);
}

TEST(FourierInversion, TooSmallCutoffIsReported) {
  InversionOptions opts;
  opts.frame_cutoff = 0.5;
  opts.frame_points = 11;
  EXPECT_THROW(invert_to_wigner(tomogram_function(GaussianState::vacuum()), kCoarse, opts),
               ReconstructionQuality);
}

TEST(Fbp, Vacuum) {
  const OpticalSinogram s =
      make_sinogram(tomogram_function(GaussianState::vacuum()), 180, {-8, 8, 257});
  const WignerGrid g = radon_reconstruct(s, {});
  EXPECT_NEAR(g(60, 60), 2.0, 0.1);
  EXPECT_NEAR(normalized_integral(g), 1.0, 1e-2);
}

TEST(Fbp, EvenCatL2Error) {
  const CatSpec cat{2.0, Parity::kEven};
  const OpticalSinogram s = make_sinogram(tomogram_function(cat), 180, {-8, 8, 257});
  const WignerGrid g = radon_reconstruct(s, {});
  const WignerGrid ref = sample_wigner(wigner_function(cat), {});
  EXPECT_LT(relative_l2_error(g, ref), 0.05);
}

TEST(Fbp, RotatedStateConsistency) {
  // Free evolution by t = pi/8 rotates the reconstruction, up to twice the
  // reconstruction error at t = 0.
  const CatSpec cat{2.0, Parity::kEven};
  const TomogramFn w0 = tomogram_function(cat);
  const double t = kPi / 8;
  const ModePoint pt = solve_epsilon_at({0.0, 1.0}, t);
  const GridSpec spec{};

  const WignerGrid rec0 = radon_reconstruct(make_sinogram(w0, 180, {-8, 8, 257}), spec);
  const WignerGrid rect = radon_reconstruct(make_sinogram(w0, 180, {-8, 8, 257}, pt), spec);
  const double e0 = relative_l2_error(rec0, sample_wigner(wigner_function(cat), spec));

  WignerGrid rotated(spec);
  for (std::size_t i = 0; i < spec.q.count; ++i) {
    for (std::size_t j = 0; j < spec.p.count; ++j) {
      const double q = spec.q.at(i), p = spec.p.at(j);
      // Initial point of the free flow through (q, p).
      rotated(i, j) = rec0.interpolate(q * std::cos(t) - p * std::sin(t),
                                       q * std::sin(t) + p * std::cos(t));
    }
  }
  EXPECT_LT(relative_l2_error(rect, rotated), 2.0 * e0);
}

TEST(Fbp, InsufficientAngles) {
  const OpticalSinogram s =
      make_sinogram(tomogram_function(GaussianState::vacuum()), 15, {-8, 8, 65});
  EXPECT_THROW(radon_reconstruct(s, kCoarse), InsufficientAngles);
  EXPECT_NO_THROW(radon_reconstruct(s, kCoarse, FbpOptions{8}));
}

TEST(Reconstruction, SerialAndParallelAreBitIdentical) {
  const CatSpec cat{cplx(1.0, 1.0), Parity::kOdd};
  const OpticalSinogram s = make_sinogram(tomogram_function(cat), 64, {-8, 8, 129});
  set_serial(true);
  const WignerGrid a = radon_reconstruct(s, kCoarse);
  const OpticalSinogram sa = make_sinogram(tomogram_function(cat), 64, {-8, 8, 129});
  set_serial(false);
  const WignerGrid b = radon_reconstruct(s, kCoarse);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(sa.values, s.values);
}
