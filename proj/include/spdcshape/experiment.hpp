#pragma once

// Monochromator scans with Poisson counts, camera-plane to Lambda_- mapping,
// and the pump-slice versus spectral-marginal overlay.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "spdcshape/analysis.hpp"
#include "spdcshape/biphoton.hpp"
#include "spdcshape/errors.hpp"

namespace spdc {

/// Coincidence counts on a (lambda_s, lambda_i) grid of absolute wavelengths.
struct ScanData {
  std::vector<double> lambda_s_nm;
  std::vector<double> lambda_i_nm;
  std::vector<std::uint64_t> counts;  // counts[is * ni + ii]
  double integration_s = 0.0;
  std::map<std::string, std::string> metadata;

  // Columns beyond the schema, kept verbatim per row.
  std::vector<std::string> extra_columns;
  std::vector<std::vector<std::string>> extra_values;
  std::vector<std::string> warnings;

  std::size_t ns() const { return lambda_s_nm.size(); }
  std::size_t ni() const { return lambda_i_nm.size(); }
  std::uint64_t at(std::size_t is, std::size_t ii) const { return counts[is * ni() + ii]; }

  bool operator==(const ScanData& o) const {
    return lambda_s_nm == o.lambda_s_nm && lambda_i_nm == o.lambda_i_nm && counts == o.counts &&
           integration_s == o.integration_s && extra_columns == o.extra_columns && extra_values == o.extra_values;
  }
};

struct ScanRates {
  double peak_rate = 1.0;        // coincidences/s at S = 1
  double accidental_rate = 0.0;  // coincidences/s, uniform
  double integration_s = 1.0;    // per grid point
};

/// counts ~ Poisson(T (R S + R_acc)), drawn in row-major order from one
/// seeded stream. S must be peak-normalized.
inline ScanData simulate_scan(const JointSpectrum& s, const ScanRates& rates, std::uint64_t seed) {
  if (s.normalization != Normalization::peak) {
    throw Error(ErrorKind::InvalidArgument, "scan simulation expects a peak-normalized spectrum");
  }
  if (!(rates.integration_s > 0.0) || rates.peak_rate < 0.0 || rates.accidental_rate < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "rates must be nonnegative and the integration time positive");
  }
  const double center_nm = s.signal_center_wavelength / kMetersPerNm;
  ScanData d;
  for (double l : s.lambda_s) d.lambda_s_nm.push_back(center_nm - l);
  for (double l : s.lambda_i) d.lambda_i_nm.push_back(center_nm - l);
  d.integration_s = rates.integration_s;
  d.counts.resize(s.values.size());
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double mean = rates.integration_s * (rates.peak_rate * s.values[k] + rates.accidental_rate);
    if (mean <= 0.0) {
      d.counts[k] = 0;
      continue;
    }
    std::poisson_distribution<std::uint64_t> pois(mean);
    d.counts[k] = pois(rng);
  }
  d.metadata["seed"] = std::to_string(seed);
  d.metadata["config_hash"] = std::to_string(s.config_hash);
  return d;
}

/// Counts as a surface over Lambda = center - lambda (first order in Omega).
/// The default center is the midpoint of each wavelength axis.
inline JointSpectrum scan_to_surface(const ScanData& d, std::optional<double> center_nm = std::nullopt) {
  if (d.ns() < 2 || d.ni() < 2 || d.counts.size() != d.ns() * d.ni()) {
    throw Error(ErrorKind::SchemaError, "scan is not a complete grid");
  }
  const double cs = center_nm ? *center_nm : 0.5 * (d.lambda_s_nm.front() + d.lambda_s_nm.back());
  const double ci = center_nm ? *center_nm : 0.5 * (d.lambda_i_nm.front() + d.lambda_i_nm.back());
  JointSpectrum s;
  for (double l : d.lambda_s_nm) s.lambda_s.push_back(cs - l);
  for (double l : d.lambda_i_nm) s.lambda_i.push_back(ci - l);
  s.values.assign(d.counts.begin(), d.counts.end());
  s.signal_center_wavelength = cs * kMetersPerNm;
  s.engine = "scan";
  return s;
}

// ---------------------------------------------------------------------------
// Camera mapping

/// Fourier-plane geometry. The focal length has no default.
struct CameraGeometry {
  double focal_length = 0.0;   // m
  double pixel_pitch = 0.0;    // m
  double ns = 0.0;             // s/m
  double phi = 0.0;            // rad
  double omega_s0 = 0.0;       // rad/s

  void validate() const {
    if (!(focal_length > 0.0) || !(pixel_pitch > 0.0) || !(ns > 0.0) || !(phi > 0.0) || !(omega_s0 > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "camera geometry entries must all be positive");
    }
  }

  /// meters of camera y per nm of Lambda_-.
  double meters_per_nm() const { return focal_length * ns * std::sin(phi) * omega_s0 / (4.0 * kPi) * kMetersPerNm; }
};

/// Lambda_- = 4 pi y / (f Ns sin(phi) omega_s0), returned in nm.
inline double camera_to_lambda(double y, const CameraGeometry& g) {
  return 4.0 * kPi * y / (g.focal_length * g.ns * std::sin(g.phi) * g.omega_s0) / kMetersPerNm;
}

inline double lambda_to_camera(double lambda_minus_nm, const CameraGeometry& g) {
  return lambda_minus_nm * kMetersPerNm * g.focal_length * g.ns * std::sin(g.phi) * g.omega_s0 / (4.0 * kPi);
}

/// Camera y of pixel row j when row `center` sits on the optical axis.
inline double pixel_to_y(double j, double center, const CameraGeometry& g) { return (j - center) * g.pixel_pitch; }

// ---------------------------------------------------------------------------
// Overlay

struct Curve {
  std::vector<double> x;  // Lambda_-, nm; uniform, increasing
  std::vector<double> y;
};

struct OverlayReport {
  double l2 = 0.0;        // ||b - a|| / ||a|| on the common support, peak-normalized curves
  double max_abs = 0.0;   // max |b - a|
  double dip_depth = 0.0; // 1 - b(0) / max b
  std::size_t points = 0;
};

inline double interpolate_curve(const Curve& c, double x) {
  if (x < c.x.front() || x > c.x.back()) return 0.0;
  const double step = c.x[1] - c.x[0];
  const double f = (x - c.x.front()) / step;
  const std::size_t i = std::min(static_cast<std::size_t>(f), c.x.size() - 2);
  const double t = f - static_cast<double>(i);
  return (1.0 - t) * c.y[i] + t * c.y[i + 1];
}

/// Compares the pump slice `a` and the spectral marginal `b`, both
/// peak-normalized, on a's nodes inside the common support.
inline OverlayReport overlay_compare(const Curve& pump_slice, const Curve& spectral_marginal) {
  for (const Curve* c : {&pump_slice, &spectral_marginal}) {
    if (c->x.size() < 2 || c->x.size() != c->y.size()) throw Error(ErrorKind::InvalidArgument, "curve needs >= 2 samples");
  }
  const double lo = std::max(pump_slice.x.front(), spectral_marginal.x.front());
  const double hi = std::min(pump_slice.x.back(), spectral_marginal.x.back());
  if (!(hi > lo)) throw Error(ErrorKind::GridMismatch, "curves have no overlapping support");
  const double pa = *std::max_element(pump_slice.y.begin(), pump_slice.y.end());
  const double pb = *std::max_element(spectral_marginal.y.begin(), spectral_marginal.y.end());
  if (!(pa > 0.0) || !(pb > 0.0)) throw Error(ErrorKind::DegenerateDistribution, "curve is identically zero");
  const double eps = 1e-12 * (hi - lo);
  OverlayReport r;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < pump_slice.x.size(); ++k) {
    const double x = pump_slice.x[k];
    if (x < lo - eps || x > hi + eps) continue;
    const double a = pump_slice.y[k] / pa;
    const double b = interpolate_curve(spectral_marginal, std::clamp(x, lo, hi)) / pb;
    num += (b - a) * (b - a);
    den += a * a;
    r.max_abs = std::max(r.max_abs, std::abs(b - a));
    ++r.points;
  }
  r.l2 = std::sqrt(num / den);
  r.dip_depth = 0.0 >= spectral_marginal.x.front() && 0.0 <= spectral_marginal.x.back()
                    ? 1.0 - interpolate_curve(spectral_marginal, 0.0) / pb
                    : 0.0;
  return r;
}

/// |E_q(0, Ns sin(phi) Omega_-)|^2 sampled at the given Lambda_- values.
inline Curve pump_slice_curve(const PumpField& pump, const CrystalConfig& crystal, const std::vector<double>& lambda_minus) {
  const auto d = CentralDispersion::of(crystal, pump.spectrum.center_wavelength);
  const LambdaScale scale(2.0 * pump.spectrum.center_wavelength);
  const MomentumSlice slice = eq_slice(pump.momentum);
  Curve c{lambda_minus, {}};
  for (double l : lambda_minus) c.y.push_back(std::norm(slice.interpolate(d.ns * std::sin(d.phi) * scale.to_omega(l))));
  return c;
}

inline Curve marginal_curve(const JointSpectrum& s) {
  auto m = minus_marginal(s);
  return {std::move(m.lambda_minus), std::move(m.values)};
}

}  // namespace spdc
