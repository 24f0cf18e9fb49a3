#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "spdcshape/analysis.hpp"
#include "spdcshape/experiment.hpp"

using namespace spdc;

namespace {

constexpr double kLambdaP = 405e-9;
constexpr double kWs = 133.48e-6;
const double kInf = std::numeric_limits<double>::infinity();

CrystalConfig liio3() {
  CrystalConfig c;
  c.internal_angle = phase_matching_angle(c.index, kLambdaP);
  return c;
}

PumpSpectrum pump() { return PumpSpectrum::from_wavelength_width(kLambdaP, 0.4e-9, WidthConvention::std_dev); }

// Rotated Gaussian surface with known widths and center.
JointSpectrum surface(double dlp, double dlm, std::size_t n, double span, double cp = 0.0, double cm = 0.0,
                      double amp = 1.0, double bg = 0.0) {
  JointSpectrum s = make_spectrum_shell(SpectralGrid::square(n, span), 810e-9, "oracle");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double u = s.lambda_s[a] + s.lambda_i[b] - cp;
      const double v = s.lambda_s[a] - s.lambda_i[b] - cm;
      s.at(a, b) = amp * std::exp(-u * u / (2 * dlp * dlp) - v * v / (2 * dlm * dlm)) + bg;
    }
  return s;
}

}  // namespace

TEST(MomentWidths, RecoverClosedFormSurface) {
  const auto g = joint_spectrum_gaussian({30e-6, kWs}, pump(), liio3(), SpectralGrid::square(121, 14.0));
  const auto r = moment_widths(g.spectrum);
  EXPECT_NEAR(r.delta_lambda_plus, g.delta_lambda_plus_nm, 1e-3 * g.delta_lambda_plus_nm);
  EXPECT_NEAR(r.delta_lambda_minus, g.delta_lambda_minus_nm, 1e-3 * g.delta_lambda_minus_nm);
  EXPECT_EQ(r.method, WidthMethod::moments);
}

TEST(MomentWidths, IsotropicGivesEqualWidths) {
  const auto r = moment_widths(surface(1.5, 1.5, 81, 8.0));
  EXPECT_NEAR(r.delta_lambda_plus, r.delta_lambda_minus, 1e-12);
  EXPECT_EQ(r.classification, Correlation::uncorrelated);
}

TEST(MomentWidths, RidgeHasZeroPlusWidth) {
  JointSpectrum s = make_spectrum_shell(SpectralGrid::square(21, 5.0), 810e-9, "ridge");
  for (std::size_t a = 0; a < 21; ++a) s.at(a, 20 - a) = std::exp(-0.1 * static_cast<double>(a));
  const auto r = moment_widths(s);
  EXPECT_NEAR(r.delta_lambda_plus, 0.0, 1e-12);
  EXPECT_GT(r.delta_lambda_minus, 1.0);
}

TEST(MomentWidths, EmptyIsDegenerate) {
  JointSpectrum s = make_spectrum_shell(SpectralGrid::square(8, 5.0), 810e-9, "zero");
  try {
    moment_widths(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateDistribution);
  }
}

TEST(GaussianFit, NoiselessSurfaceExact) {
  const auto g = joint_spectrum_gaussian({462e-6, kWs}, pump(), liio3(), SpectralGrid::square(48, 6.0));
  const auto r = gaussian_fit_2d(g.spectrum);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.delta_lambda_plus, g.delta_lambda_plus_nm, 1e-6 * g.delta_lambda_plus_nm);
  EXPECT_NEAR(r.delta_lambda_minus, g.delta_lambda_minus_nm, 1e-6 * g.delta_lambda_minus_nm);
  EXPECT_LT(std::abs(r.background), 1e-8 * r.amplitude);
  EXPECT_LT(r.fit_residual, 1e-8);
  EXPECT_FALSE(r.warning);
}

TEST(GaussianFit, OffsetCenterAndBackground) {
  const auto s = surface(1.2, 2.7, 40, 8.0, 0.8, -1.1, 50.0, 3.0);
  const auto r = gaussian_fit_2d(s);
  EXPECT_NEAR(r.delta_lambda_plus, 1.2, 1e-6);
  EXPECT_NEAR(r.delta_lambda_minus, 2.7, 1e-6);
  EXPECT_NEAR(r.center_s + r.center_i, 0.8, 1e-6);
  EXPECT_NEAR(r.center_s - r.center_i, -1.1, 1e-6);
  EXPECT_NEAR(r.background, 3.0, 1e-6);
  EXPECT_NEAR(r.amplitude, 50.0, 1e-5);
}

TEST(GaussianFit, PinnedBackground) {
  FitOptions o;
  o.fit_background = false;
  const auto r = gaussian_fit_2d(surface(1.0, 2.0, 30, 6.0), o);
  EXPECT_EQ(r.background, 0.0);
  EXPECT_NEAR(r.delta_lambda_minus, 2.0, 1e-6);
}

TEST(GaussianFit, AgreesWithMoments) {
  const auto s = surface(1.37, 1.73, 81, 9.0);
  const auto f = gaussian_fit_2d(s);
  const auto m = moment_widths(s);
  EXPECT_NEAR(f.delta_lambda_plus, m.delta_lambda_plus, 1e-3 * m.delta_lambda_plus);
  EXPECT_NEAR(f.delta_lambda_minus, m.delta_lambda_minus, 1e-3 * m.delta_lambda_minus);
}

TEST(GaussianFit, NonGaussianRaisesWarning) {
  // A checkerboard is nowhere near the model.
  JointSpectrum s = make_spectrum_shell(SpectralGrid::square(12, 5.0), 810e-9, "checker");
  for (std::size_t a = 0; a < 12; ++a)
    for (std::size_t b = 0; b < 12; ++b) s.at(a, b) = (a + b) % 2 ? 1.0 : 0.0;
  try {
    const auto r = gaussian_fit_2d(s);
    EXPECT_TRUE(r.warning);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FitDiverged);
  }
}

TEST(GaussianFit, RejectsSmallGrid) {
  EXPECT_THROW(gaussian_fit_2d(surface(1, 1, 5, 3.0)), Error);
}

TEST(GaussianFit, PoissonCoverage) {
  // Closed loop on seeded scans: errors scale like the reported sigma.
  const auto g = joint_spectrum_gaussian({462e-6, kWs, 7.0e12}, pump(), liio3(), SpectralGrid::square(32, 6.0));
  FitOptions o;
  o.weighting = FitWeighting::poisson_model;
  int within1 = 0, within3 = 0;
  const int reps = 60;
  for (int k = 0; k < reps; ++k) {
    const auto scan = simulate_scan(g.spectrum, {1.0, 0.01, 200.0}, 500 + k);
    const auto r = gaussian_fit_2d(scan_to_surface(scan), o);
    const double zp = std::abs(r.delta_lambda_plus - g.delta_lambda_plus_nm) / r.sigma_plus;
    const double zm = std::abs(r.delta_lambda_minus - g.delta_lambda_minus_nm) / r.sigma_minus;
    within1 += (zp <= 1.0) + (zm <= 1.0);
    within3 += (zp <= 3.0) + (zm <= 3.0);
  }
  const double f1 = within1 / (2.0 * reps), f3 = within3 / (2.0 * reps);
  EXPECT_GT(f1, 0.5);
  EXPECT_LT(f1, 0.85);
  EXPECT_GE(f3, 0.95);
}

TEST(Classify, ReferenceValues) {
  EXPECT_EQ(classify(1.29, 3.05), Correlation::anticorrelated);
  EXPECT_EQ(classify(1.37, 1.73, 0.1), Correlation::anticorrelated);
  EXPECT_EQ(classify(1.37, 1.73, 0.25), Correlation::uncorrelated);
  EXPECT_EQ(classify(3.0, 1.0), Correlation::correlated);
  EXPECT_EQ(classify(2.0, 2.0, 1e-9), Correlation::uncorrelated);
}

TEST(Classify, ScaleInvariant) {
  for (double s : {1e-3, 0.5, 7.0, 1e4}) {
    EXPECT_EQ(classify(1.37 * s, 1.73 * s, 0.1), classify(1.37, 1.73, 0.1));
    EXPECT_EQ(classify(1.37 * s, 1.73 * s, 0.25), classify(1.37, 1.73, 0.25));
  }
}

TEST(Marginal, DiagonalSums) {
  const auto s = surface(0.5, 2.0, 41, 8.0);
  const auto m = minus_marginal(s);
  ASSERT_EQ(m.values.size(), 81u);
  EXPECT_NEAR(m.lambda_minus[40], 0.0, 1e-12);
  double total = 0.0, sum = 0.0;
  for (double v : m.values) total += v;
  for (double v : s.values) sum += v;
  EXPECT_NEAR(total, sum, 1e-9 * sum);
}

TEST(Sweep, CrossingDichotomy) {
  const auto crystal = liio3();
  const double bp = pump_bandwidth_for_plus_width(1.38, kInf, std::nullopt, crystal, kLambdaP);
  const PumpSpectrum p{kLambdaP, bp};
  const auto r = sweep_waist(log_space(1e-6, 5e-3, 200), {kWs, kInf}, p, std::nullopt, crystal);
  ASSERT_EQ(r.curves.size(), 2u);
  EXPECT_FALSE(r.curves[0].crossing_waist.has_value());
  ASSERT_TRUE(r.curves[1].crossing_waist.has_value());
  const double w = *r.curves[1].crossing_waist;
  const auto b = gaussian_bandwidths({w, kInf}, p, crystal);
  const LambdaScale sc(2 * kLambdaP);
  EXPECT_LT(std::abs(sc.to_lambda_nm(b.b_plus) - sc.to_lambda_nm(b.b_minus)), 1e-3);
  EXPECT_NEAR(r.curves[1].delta_lambda_plus.front(), 1.38, 1e-9);
}

TEST(Sweep, MinusMonotone) {
  const auto r = sweep_waist(log_space(1e-6, 5e-3, 150), {kWs, 50e-6, kInf}, pump(), 3e12, liio3());
  for (const auto& c : r.curves) {
    ASSERT_EQ(c.delta_lambda_minus.size(), r.pump_waists.size());
    for (std::size_t i = 1; i < c.delta_lambda_minus.size(); ++i) {
      EXPECT_LT(c.delta_lambda_minus[i], c.delta_lambda_minus[i - 1]);
    }
  }
}

TEST(Sweep, EmptyRange) {
  EXPECT_THROW(sweep_waist({}, {kWs}, pump(), std::nullopt, liio3()), Error);
  EXPECT_THROW(log_space(1e-3, 1e-6, 10), Error);
}

TEST(Calibration, FilterForMinusWidth) {
  const auto crystal = liio3();
  const double bf = filter_bandwidth_for_minus_width(3.05, 30e-6, kWs, pump(), crystal);
  const auto b = gaussian_bandwidths({30e-6, kWs, bf}, pump(), crystal);
  EXPECT_NEAR(LambdaScale(2 * kLambdaP).to_lambda_nm(b.b_minus), 3.05, 1e-9);
  EXPECT_THROW(filter_bandwidth_for_minus_width(50.0, 30e-6, kWs, pump(), crystal), Error);
}
