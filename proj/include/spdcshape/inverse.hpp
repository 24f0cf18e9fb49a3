#pragma once

// Inverse design: a target waveform along Lambda_- fixes the pump's
// momentum slice E_q(0, q_y) with q_y = Ns sin(phi) Omega_-; a Gaussian in
// q_x completes the 2-D spectrum and an inverse transform gives the beam.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "spdcshape/analysis.hpp"
#include "spdcshape/biphoton.hpp"
#include "spdcshape/experiment.hpp"
#include "spdcshape/pump.hpp"

namespace spdc {

struct TargetWaveform {
  std::vector<double> lambda_minus_nm;  // uniform, increasing
  std::vector<double> amplitude;        // >= 0; the desired Lambda_- marginal
  std::vector<double> phase;            // rad per sample; empty means 0

  double step() const { return lambda_minus_nm[1] - lambda_minus_nm[0]; }

  void validate() const {
    const std::size_t n = lambda_minus_nm.size();
    if (n < 3 || amplitude.size() != n || (!phase.empty() && phase.size() != n)) {
      throw Error(ErrorKind::InvalidArgument, "target needs >= 3 samples with matching columns");
    }
    const double h = step();
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "target samples must increase");
    for (std::size_t k = 1; k < n; ++k) {
      if (std::abs(lambda_minus_nm[k] - lambda_minus_nm[k - 1] - h) > 1e-6 * h) {
        throw Error(ErrorKind::InvalidArgument, "target samples must be uniform");
      }
    }
    double peak = 0.0;
    for (double a : amplitude) {
      if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "target amplitude must be nonnegative");
      peak = std::max(peak, a);
    }
    if (!(peak > 0.0)) throw Error(ErrorKind::DegenerateDistribution, "target amplitude is identically zero");
  }

  /// sqrt(amplitude) exp(i phase), linearly interpolated; zero outside.
  cplx field_at(double lambda_nm) const {
    const double f = (lambda_nm - lambda_minus_nm.front()) / step();
    const double last = static_cast<double>(lambda_minus_nm.size() - 1);
    if (f < -1e-9 || f > last + 1e-9) return 0.0;
    const double fc = std::clamp(f, 0.0, last);
    const std::size_t i = std::min(static_cast<std::size_t>(fc), lambda_minus_nm.size() - 2);
    const double t = fc - static_cast<double>(i);
    auto node = [&](std::size_t k) {
      return std::polar(std::sqrt(amplitude[k]), phase.empty() ? 0.0 : phase[k]);
    };
    return (1.0 - t) * node(i) + t * node(i + 1);
  }

  /// Intensity standard deviation of the target along Lambda_- (nm).
  double rms_width() const {
    double p = 0.0, m = 0.0, v = 0.0;
    for (std::size_t k = 0; k < amplitude.size(); ++k) {
      p += amplitude[k];
      m += amplitude[k] * lambda_minus_nm[k];
    }
    m /= p;
    for (std::size_t k = 0; k < amplitude.size(); ++k) v += amplitude[k] * (lambda_minus_nm[k] - m) * (lambda_minus_nm[k] - m);
    return std::sqrt(v / p);
  }
};

struct InverseOptions {
  std::size_t grid_points = 512;          // momentum grid per axis, power of two
  std::optional<double> qx_waist;         // position-space waist of the q_x Gaussian; default from target width
  double paraxial_limit = 0.2;            // max |q| / k_p
};

struct PumpDesign {
  MomentumSlice slice;       // required E_q(0, q_y)
  MomentumSpectrum momentum; // full 2-D spectrum
  SampledField field;        // position-space pump
  double qx_waist = 0.0;     // m
};

/// Pump whose mapped joint spectrum has `target` as its Lambda_- marginal.
inline PumpDesign pump_for_target(const TargetWaveform& target, const CrystalConfig& crystal, double pump_wavelength,
                                  const InverseOptions& opts = {}) {
  target.validate();
  crystal.validate();
  if (!fft::is_power_of_two(opts.grid_points)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  const auto d = CentralDispersion::of(crystal, pump_wavelength);
  const double gain = d.ns * std::sin(d.phi);  // q_y per rad/s of Omega_-
  if (!(gain > 0.0)) throw Error(ErrorKind::Unsupported, "collinear geometry has no spatial-to-spectral mapping");
  const LambdaScale scale(2.0 * pump_wavelength);
  const double kp = crystal.k_pump(angular_frequency(pump_wavelength));

  const double qmax = gain * scale.to_omega(std::max(std::abs(target.lambda_minus_nm.front()),
                                                     std::abs(target.lambda_minus_nm.back())));
  if (qmax > opts.paraxial_limit * kp) {
    throw Error(ErrorKind::BandwidthExceeded, "target needs |q_y| beyond the paraxial window");
  }

  const std::size_t n = opts.grid_points;
  const double dq = gain * scale.to_omega(target.step());
  if (static_cast<double>(n / 2 - 1) * dq < qmax) {
    throw Error(ErrorKind::GridTooSmall, "momentum grid does not cover the target; raise grid_points");
  }

  PumpDesign out;
  out.qx_waist = opts.qx_waist ? *opts.qx_waist : 1.0 / (gain * scale.to_omega(target.rms_width()));
  if (!(out.qx_waist > 0.0)) throw Error(ErrorKind::InvalidArgument, "q_x waist must be positive");

  MomentumSpectrum& m = out.momentum;
  m.n = n;
  m.dq = dq;
  m.qx0 = m.qy0 = -static_cast<double>(n / 2) * dq;
  m.values.assign(n * n, 0.0);
  out.slice.qy.resize(n);
  out.slice.values.resize(n);
  for (std::size_t ky = 0; ky < n; ++ky) {
    const double qy = m.qy(ky);
    out.slice.qy[ky] = qy;
    out.slice.values[ky] = target.field_at(scale.to_lambda_nm(qy / gain));
  }
  const double wx2 = out.qx_waist * out.qx_waist;
  for (std::size_t ky = 0; ky < n; ++ky)
    for (std::size_t kx = 0; kx < n; ++kx) {
      const double qx = m.qx(kx);
      m.values[ky * n + kx] = out.slice.values[ky] * std::exp(-qx * qx * wx2 / 4.0);
    }
  normalize_l2(m.values);
  for (std::size_t ky = 0; ky < n; ++ky) out.slice.values[ky] = m.at(n / 2, ky);
  out.field = position_field(m);
  return out;
}

enum class RoundtripEngine { mapped, numeric_large_area };

struct RoundtripReport {
  double l2 = 0.0;       // relative L2 of marginal versus target, peak-normalized
  double max_abs = 0.0;
  std::size_t offgrid_samples = 0;
  PumpDesign design;
};

/// pump_for_target, then the forward engine on a grid whose Lambda_- reach is
/// twice the target's, then the Lambda_- marginal compared with the target.
inline RoundtripReport roundtrip_report(const TargetWaveform& target, const CrystalConfig& crystal,
                                        const PumpSpectrum& pump_spectrum, const InverseOptions& opts = {},
                                        RoundtripEngine engine = RoundtripEngine::mapped) {
  RoundtripReport r;
  r.design = pump_for_target(target, crystal, pump_spectrum.center_wavelength, opts);
  PumpField pump{pump_spectrum, momentum_distribution(r.design.field), std::nullopt};

  // The Lambda_+ ridge must be resolved or the diagonal sums alias; refine
  // the target step by an integer factor so target nodes stay on the grid.
  const double ridge = LambdaScale(2.0 * pump_spectrum.center_wavelength)
                           .to_lambda_nm(gaussian_bandwidths({1.0}, pump_spectrum, crystal).b_plus);
  const double refine = std::max(1.0, std::ceil(target.step() / (0.5 * ridge)));
  const double h = target.step() / refine;
  const double reach = std::max(std::abs(target.lambda_minus_nm.front()), std::abs(target.lambda_minus_nm.back()));
  const auto half_points = static_cast<std::size_t>(std::ceil(reach / h - 1e-9));
  const std::size_t points = 2 * half_points + 1;
  SpectralGrid grid = SpectralGrid::square(points, static_cast<double>(half_points) * h);

  JointSpectrum s;
  if (engine == RoundtripEngine::mapped) {
    s = joint_spectrum_mapped(pump, crystal, grid);
  } else {
    s = joint_spectrum_numeric(pump, crystal, CollectionMode::large_area(), grid).spectrum;
  }
  r.offgrid_samples = s.offgrid_samples;
  const Curve target_curve{target.lambda_minus_nm, target.amplitude};
  const OverlayReport o = overlay_compare(target_curve, marginal_curve(s));
  r.l2 = o.l2;
  r.max_abs = o.max_abs;
  return r;
}

/// Lambda_- target of the given shape sampled on [-span, span] with n points.
inline TargetWaveform gaussian_target(double std_nm, double span_nm, std::size_t n) {
  TargetWaveform t;
  t.lambda_minus_nm = symmetric_axis(n, span_nm);
  for (double l : t.lambda_minus_nm) t.amplitude.push_back(std::exp(-l * l / (2.0 * std_nm * std_nm)));
  return t;
}

}  // namespace spdc
