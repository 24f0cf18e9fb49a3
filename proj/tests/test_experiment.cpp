#include <gtest/gtest.h>

#include <cmath>

#include "spdcshape/experiment.hpp"

using namespace spdc;

namespace {

constexpr double kLambdaP = 405e-9;

CrystalConfig liio3() {
  CrystalConfig c;
  c.internal_angle = phase_matching_angle(c.index, kLambdaP);
  return c;
}

PumpSpectrum pump() { return PumpSpectrum::from_wavelength_width(kLambdaP, 0.4e-9, WidthConvention::std_dev); }

CameraGeometry camera(double f = 0.2) {
  const auto d = CentralDispersion::of(liio3(), kLambdaP);
  return {f, 5e-6, d.ns, d.phi, angular_frequency(2 * kLambdaP)};
}

}  // namespace

TEST(SimulateScan, ZeroWhereNoSignal) {
  auto s = make_spectrum_shell(SpectralGrid::square(10, 4.0), 810e-9, "oracle");
  s.at(3, 4) = 1.0;
  const auto d = simulate_scan(s, {100.0, 0.0, 50.0}, 1);
  for (std::size_t k = 0; k < d.counts.size(); ++k) {
    if (k != 3 * 10 + 4) EXPECT_EQ(d.counts[k], 0u);
  }
  EXPECT_GT(d.at(3, 4), 0u);
}

TEST(SimulateScan, SeededAndReproducible) {
  const auto g = joint_spectrum_gaussian({30e-6, 133.48e-6}, pump(), liio3(), SpectralGrid::square(16, 6.0));
  const auto a = simulate_scan(g.spectrum, {2.0, 0.1, 50.0}, 42);
  const auto b = simulate_scan(g.spectrum, {2.0, 0.1, 50.0}, 42);
  const auto c = simulate_scan(g.spectrum, {2.0, 0.1, 50.0}, 43);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, c.counts);
  // Absolute wavelengths around the degenerate center.
  EXPECT_NEAR(0.5 * (a.lambda_s_nm.front() + a.lambda_s_nm.back()), 810.0, 1e-9);
}

TEST(SimulateScan, MeanConvergesToExpectation) {
  const auto g = joint_spectrum_gaussian({30e-6, 133.48e-6}, pump(), liio3(), SpectralGrid::square(8, 4.0));
  const ScanRates rates{3.0, 0.05, 10.0};
  const int reps = 1000;
  std::vector<double> mean(g.spectrum.values.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto d = simulate_scan(g.spectrum, rates, 9000 + r);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += static_cast<double>(d.counts[k]) / reps;
  }
  for (std::size_t k = 0; k < mean.size(); ++k) {
    const double mu = rates.integration_s * (rates.peak_rate * g.spectrum.values[k] + rates.accidental_rate);
    EXPECT_NEAR(mean[k], mu, 3.0 * std::sqrt(mu) / std::sqrt(static_cast<double>(reps)) + 1e-12) << k;
  }
}

TEST(SimulateScan, NeedsPeakNormalization) {
  auto g = joint_spectrum_gaussian({30e-6}, pump(), liio3(), SpectralGrid::square(8, 4.0)).spectrum;
  normalize(g, Normalization::sum);
  EXPECT_THROW(simulate_scan(g, {}, 1), Error);
}

TEST(ScanSurface, RecoversOffsets) {
  const auto g = joint_spectrum_gaussian({30e-6}, pump(), liio3(), SpectralGrid::square(9, 4.0)).spectrum;
  const auto d = simulate_scan(g, {1000.0, 0.0, 10.0}, 3);
  const auto s = scan_to_surface(d);
  for (std::size_t a = 0; a < g.ns(); ++a) EXPECT_NEAR(s.lambda_s[a], g.lambda_s[a], 1e-9);
  EXPECT_EQ(s.values[7], static_cast<double>(d.counts[7]));
}

TEST(Camera, LinearMapAndInverse) {
  const auto g = camera();
  EXPECT_EQ(camera_to_lambda(0.0, g), 0.0);
  EXPECT_NEAR(camera_to_lambda(1e-3, camera(0.4)), 0.5 * camera_to_lambda(1e-3, g), 1e-15);
  for (double y : {-3e-3, -1e-5, 2e-4, 7e-3}) {
    EXPECT_NEAR(lambda_to_camera(camera_to_lambda(y, g), g), y, 1e-15 * std::abs(y));
  }
  EXPECT_NEAR(pixel_to_y(110, 100, g), 10 * g.pixel_pitch, 1e-18);
}

TEST(Camera, ConsistentWithFourierPlaneMomentum) {
  const auto g = camera(0.15);
  const double wp = angular_frequency(kLambdaP);
  const LambdaScale scale(2 * kLambdaP);
  for (double y : {1e-4, -2.5e-3, 6e-3}) {
    const double qy = wp / kSpeedOfLight * (y / g.focal_length);
    const double om = qy / (g.ns * std::sin(g.phi));
    const double want = scale.to_lambda_nm(om);
    EXPECT_NEAR(camera_to_lambda(y, g), want, 1e-12 * std::abs(want));
  }
}

TEST(Camera, InvalidGeometry) {
  CameraGeometry g = camera();
  g.focal_length = 0.0;
  EXPECT_THROW(g.validate(), Error);
}

TEST(Overlay, IdenticalCurvesHaveZeroResidual) {
  Curve a{symmetric_axis(51, 5.0), {}};
  for (double x : a.x) a.y.push_back(std::exp(-x * x));
  const auto r = overlay_compare(a, a);
  EXPECT_LT(r.l2, 1e-12);
  EXPECT_LT(r.max_abs, 1e-12);
  EXPECT_NEAR(r.dip_depth, 0.0, 1e-12);
}

TEST(Overlay, ShiftIncreasesResidual) {
  Curve a{symmetric_axis(101, 6.0), {}};
  for (double x : a.x) a.y.push_back(std::exp(-x * x / 2));
  double prev = -1.0;
  for (double shift : {0.0, 0.1, 0.3, 0.6, 1.0}) {
    Curve b{a.x, {}};
    for (double x : b.x) b.y.push_back(std::exp(-(x - shift) * (x - shift) / 2));
    const double l2 = overlay_compare(a, b).l2;
    EXPECT_GT(l2, prev);
    prev = l2;
  }
}

TEST(Overlay, DisjointSupport) {
  Curve a{{0, 1, 2}, {1, 1, 1}};
  Curve b{{5, 6, 7}, {1, 1, 1}};
  try {
    overlay_compare(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(Overlay, MappedMarginalMatchesPumpSlice) {
  const double w0 = 100e-6;
  for (const TransverseProfile& p :
       std::vector<TransverseProfile>{GaussianProfile{w0}, VortexProfile{w0, 2}, PhaseStepProfile{w0}}) {
    const auto pf = make_pump_field(pump(), p, default_grid_for_waist(w0));
    const auto s = joint_spectrum_mapped(pf, liio3(), SpectralGrid::square(81, 10.0));
    const Curve marginal = marginal_curve(s);
    const Curve slice = pump_slice_curve(pf, liio3(), symmetric_axis(81, 8.0));
    const auto r = overlay_compare(slice, marginal);
    EXPECT_LT(r.l2, 1e-2);
    if (!std::holds_alternative<GaussianProfile>(p)) {
      EXPECT_NEAR(r.dip_depth, 1.0, 1e-6);
    } else {
      EXPECT_NEAR(r.dip_depth, 0.0, 1e-6);
    }
  }
}
