#include <gtest/gtest.h>

#include <cmath>

#include "spdcshape/inverse.hpp"

using namespace spdc;

namespace {

constexpr double kLambdaP = 405e-9;

CrystalConfig liio3() {
  CrystalConfig c;
  c.internal_angle = phase_matching_angle(c.index, kLambdaP);
  return c;
}

PumpSpectrum pump() { return PumpSpectrum::from_wavelength_width(kLambdaP, 0.4e-9, WidthConvention::std_dev); }

double gain() {
  const auto d = CentralDispersion::of(liio3(), kLambdaP);
  return d.ns * std::sin(d.phi);
}

// Intensity second moment along y of a sampled field.
double y_std(const SampledField& f) {
  double p = 0.0, m2 = 0.0;
  for (std::size_t iy = 0; iy < f.grid.n; ++iy)
    for (std::size_t ix = 0; ix < f.grid.n; ++ix) {
      const double w = std::norm(f.at(ix, iy));
      const double y = f.grid.coordinate(iy);
      p += w;
      m2 += w * y * y;
    }
  return std::sqrt(m2 / p);
}

TargetWaveform hermite_target(double scale_nm, double span, std::size_t n) {
  // |x|^2 exp(-x^2/s^2) with a pi jump at the origin: an odd field.
  TargetWaveform t;
  t.lambda_minus_nm = symmetric_axis(n, span);
  for (double l : t.lambda_minus_nm) {
    t.amplitude.push_back(l * l * std::exp(-l * l / (scale_nm * scale_nm)));
    t.phase.push_back(l > 0.0 ? kPi : 0.0);
  }
  return t;
}

TargetWaveform two_lobe_target(double sep, double std_nm, double span, std::size_t n) {
  TargetWaveform t;
  t.lambda_minus_nm = symmetric_axis(n, span);
  for (double l : t.lambda_minus_nm) {
    t.amplitude.push_back(std::exp(-(l - sep) * (l - sep) / (2 * std_nm * std_nm)) +
                          0.6 * std::exp(-(l + sep) * (l + sep) / (2 * std_nm * std_nm)));
  }
  return t;
}

}  // namespace

TEST(PumpForTarget, GaussianTargetGivesGaussianWaist) {
  const double sigma_nm = 2.0;
  const auto t = gaussian_target(sigma_nm, 12.0, 121);
  const auto d = pump_for_target(t, liio3(), kLambdaP);
  const double w0 = 1.0 / (gain() * LambdaScale(2 * kLambdaP).to_omega(sigma_nm));
  EXPECT_NEAR(d.qx_waist, w0, 1e-6 * w0);
  // Gaussian beam exp(-r^2/W0^2): intensity std along y is W0/2.
  EXPECT_NEAR(2.0 * y_std(d.field), w0, 0.01 * w0);
}

TEST(PumpForTarget, OddPhaseGivesPiStepAndNull) {
  const auto t = hermite_target(3.0, 12.0, 121);
  const auto d = pump_for_target(t, liio3(), kLambdaP);
  const std::size_t n = d.slice.values.size();
  const std::size_t c = n / 2;  // q_y = 0
  double peak = 0.0;
  for (const auto& v : d.slice.values) peak = std::max(peak, std::abs(v));
  EXPECT_LT(std::abs(d.slice.values[c]), 1e-12 * peak);
  // Mirror samples carry opposite sign.
  for (std::size_t k = 1; k < c / 4; ++k) {
    const cplx a = d.slice.values[c + k], b = d.slice.values[c - k];
    if (std::abs(a) < 1e-6 * peak) continue;
    EXPECT_NEAR(std::abs(std::arg(a / b)), kPi, 1e-9);
  }
}

TEST(PumpForTarget, AmplitudeOnlyGivesRealCentrosymmetricField) {
  const auto t = gaussian_target(3.0, 12.0, 121);
  const auto d = pump_for_target(t, liio3(), kLambdaP);
  const std::size_t n = d.momentum.n;
  double peak = 0.0;
  for (const auto& v : d.momentum.values) peak = std::max(peak, std::abs(v));
  for (std::size_t ky = 1; ky < n; ++ky)
    for (std::size_t kx = 1; kx < n; ++kx) {
      const cplx a = d.momentum.at(kx, ky), b = d.momentum.at(n - kx, n - ky);
      EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * peak);
      EXPECT_NEAR(a.imag(), 0.0, 1e-15);
    }
}

TEST(PumpForTarget, BandwidthExceeded) {
  const auto t = gaussian_target(200.0, 1100.0, 221);
  try {
    pump_for_target(t, liio3(), kLambdaP);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BandwidthExceeded);
  }
}

TEST(PumpForTarget, GridTooSmall) {
  const auto t = gaussian_target(3.0, 12.0, 601);
  InverseOptions o;
  o.grid_points = 256;
  try {
    pump_for_target(t, liio3(), kLambdaP, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooSmall);
  }
}

TEST(PumpForTarget, InvalidTargets) {
  TargetWaveform t = gaussian_target(2.0, 6.0, 11);
  t.amplitude[3] = -1.0;
  EXPECT_THROW(pump_for_target(t, liio3(), kLambdaP), Error);
  t = gaussian_target(2.0, 6.0, 11);
  t.lambda_minus_nm[5] += 0.1;
  EXPECT_THROW(pump_for_target(t, liio3(), kLambdaP), Error);
  t = gaussian_target(2.0, 6.0, 11);
  for (auto& a : t.amplitude) a = 0.0;
  EXPECT_THROW(pump_for_target(t, liio3(), kLambdaP), Error);
}

TEST(Roundtrip, ThreeTargetsWithinOnePercent) {
  const std::vector<TargetWaveform> targets = {gaussian_target(3.0, 14.0, 141), hermite_target(3.0, 16.0, 161),
                                               two_lobe_target(4.0, 1.5, 12.0, 121)};
  for (const auto& t : targets) {
    const auto r = roundtrip_report(t, liio3(), pump());
    EXPECT_LT(r.l2, 0.01);
    EXPECT_EQ(r.offgrid_samples, 0u);
  }
}

TEST(Roundtrip, NumericResidualGrowsWithBandwidth) {
  // Narrowband pump isolates the transverse mapping.
  const PumpSpectrum p = PumpSpectrum::from_wavelength_width(kLambdaP, 0.04e-9, WidthConvention::std_dev);
  double prev = 0.0;
  for (double sigma : {2.0, 10.0, 30.0}) {
    const auto t = gaussian_target(sigma, 4.0 * sigma, 41);
    InverseOptions o;
    o.grid_points = 256;
    const double l2 = roundtrip_report(t, liio3(), p, o, RoundtripEngine::numeric_large_area).l2;
    EXPECT_GT(l2, prev) << sigma;
    prev = l2;
  }
}
