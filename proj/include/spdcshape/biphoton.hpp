#pragma once

// The biphoton mode function and the three joint-spectrum engines:
//   numeric   - Gauss-Hermite projection of the full mode function onto the
//               collection modes (exact sinc, exact crystal dispersion),
//   mapped    - large-area collection with first-order dispersion, where the
//               pump's q_y profile maps directly onto Omega_-,
//   gaussian  - closed form for Gaussian pump, collection and filters.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spdcshape/dispersion.hpp"
#include "spdcshape/errors.hpp"
#include "spdcshape/pump.hpp"
#include "spdcshape/quadrature.hpp"
#include "spdcshape/units.hpp"

namespace spdc {

/// Gaussian collection U(q) = exp(-|q|^2 Ws^2 / 4), or the large-area limit
/// U(q) ~ delta(q); optional filters H(Omega) = exp(-Omega^2 / (4 Bf^2)).
struct CollectionMode {
  std::optional<double> waist;             // nullopt: large-area collection
  std::optional<double> filter_bandwidth;  // Bf, rad/s; nullopt: no filter

  static CollectionMode gaussian(double ws, std::optional<double> bf = std::nullopt) { return {ws, bf}; }
  static CollectionMode large_area(std::optional<double> bf = std::nullopt) { return {std::nullopt, bf}; }

  bool is_large_area() const { return !waist.has_value(); }

  double filter(double omega) const {
    if (!filter_bandwidth) return 1.0;
    return std::exp(-omega * omega / (4.0 * *filter_bandwidth * *filter_bandwidth));
  }

  void validate() const {
    if (waist && !(*waist > 0.0)) throw Error(ErrorKind::InvalidArgument, "collection waist must be positive");
    if (filter_bandwidth && !(*filter_bandwidth > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "filter bandwidth must be positive");
    }
  }
};

struct TransverseWavevector {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

struct Mismatch {
  double transverse;    // Delta_0, rad/m
  double longitudinal;  // Delta_k, rad/m
};

struct MismatchOptions {
  /// Include the |q|^2 / 2k longitudinal corrections of each beam.
  bool second_order = false;
};

/// Phase mismatches in the rotated-beam geometry (signal at +phi, idler at
/// -phi, q measured in each beam's own transverse frame):
///   Delta_0 = (q_sy + q_iy) cos phi + (k_s - k_i) sin phi
///   Delta_k = k_p - (k_s + k_i) cos phi + (q_sy - q_iy) sin phi
inline Mismatch mismatches(double omega_s, double omega_i, TransverseWavevector qs, TransverseWavevector qi,
                           const CrystalConfig& crystal, const CentralFrequencies& centers,
                           MismatchOptions opts = {}) {
  const double ks = crystal.k_down(centers.signal + omega_s);
  const double ki = crystal.k_down(centers.idler + omega_i);
  const double kp = crystal.k_pump(centers.pump + omega_s + omega_i);
  if (qs.norm() > 0.2 * ks || qi.norm() > 0.2 * ki) {
    throw Error(ErrorKind::NonParaxial, "transverse wavevector exceeds 0.2 k");
  }
  const double sphi = std::sin(crystal.internal_angle);
  const double cphi = std::cos(crystal.internal_angle);
  double ksz = ks;
  double kiz = ki;
  if (opts.second_order) {
    ksz -= (qs.x * qs.x + qs.y * qs.y) / (2.0 * ks);
    kiz -= (qi.x * qi.x + qi.y * qi.y) / (2.0 * ki);
  }
  const double d0 = (qs.y + qi.y) * cphi + (ksz - kiz) * sphi;
  double dk = kp - (ksz + kiz) * cphi + (qs.y - qi.y) * sphi;
  if (opts.second_order) {
    const double qpx = qs.x + qi.x;
    dk -= (qpx * qpx + d0 * d0) / (2.0 * kp);
  }
  return {d0, dk};
}

/// sin(x)/x with sinc(0) = 1.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// Phi = E_q(q_sx + q_ix, Delta_0) E_w(Omega_s + Omega_i) sinc(Delta_k L/2) exp(-i Delta_k L/2).
/// Off-window pump momenta contribute zero and are counted in *offgrid.
inline cplx mode_function(double omega_s, double omega_i, TransverseWavevector qs, TransverseWavevector qi,
                          const PumpField& pump, const CrystalConfig& crystal, MismatchOptions opts = {},
                          std::size_t* offgrid = nullptr) {
  const auto centers = CentralFrequencies::degenerate(pump.spectrum.center_wavelength);
  const Mismatch m = mismatches(omega_s, omega_i, qs, qi, crystal, centers, opts);
  const cplx eq = pump.momentum.interpolate(qs.x + qi.x, m.transverse, offgrid);
  const double half = 0.5 * m.longitudinal * crystal.length;
  return eq * pump.spectrum.amplitude(omega_s + omega_i) * sinc(half) * std::polar(1.0, -half);
}

// ---------------------------------------------------------------------------
// Joint spectrum container

enum class Normalization { peak, sum };

inline std::vector<double> symmetric_axis(std::size_t n, double half_span) {
  std::vector<double> axis(n);
  if (n == 1) {
    axis[0] = 0.0;
    return axis;
  }
  const double step = 2.0 * half_span / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) axis[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * step;
  return axis;
}

/// Uniform grid of signal/idler deviations Lambda_s, Lambda_i (nm).
struct SpectralGrid {
  std::size_t points_s = 64;
  std::size_t points_i = 64;
  double half_span_s_nm = 8.0;
  double half_span_i_nm = 8.0;

  static SpectralGrid square(std::size_t n, double half_span_nm) { return {n, n, half_span_nm, half_span_nm}; }

  void validate() const {
    if (points_s < 2 || points_i < 2) throw Error(ErrorKind::InvalidArgument, "spectral grid needs >= 2 points per axis");
    if (!(half_span_s_nm > 0.0) || !(half_span_i_nm > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "spectral grid span must be positive");
    }
  }
};

/// S(Lambda_s, Lambda_i) on a rectangular grid, values[is * n_i + ii].
/// Lambda_j = lambda_s0 Omega_j / omega_s0, so Lambda_+ = Lambda_s + Lambda_i
/// and Lambda_- = Lambda_s - Lambda_i.
struct JointSpectrum {
  std::vector<double> lambda_s;  // nm
  std::vector<double> lambda_i;  // nm
  std::vector<double> values;
  Normalization normalization = Normalization::peak;
  std::string engine;
  std::uint64_t config_hash = 0;
  double signal_center_wavelength = 810e-9;  // m
  std::size_t offgrid_samples = 0;

  std::size_t ns() const { return lambda_s.size(); }
  std::size_t ni() const { return lambda_i.size(); }
  double at(std::size_t is, std::size_t ii) const { return values[is * ni() + ii]; }
  double& at(std::size_t is, std::size_t ii) { return values[is * ni() + ii]; }
};

inline JointSpectrum make_spectrum_shell(const SpectralGrid& grid, double signal_center_wavelength, std::string engine) {
  grid.validate();
  JointSpectrum s;
  s.lambda_s = symmetric_axis(grid.points_s, grid.half_span_s_nm);
  s.lambda_i = symmetric_axis(grid.points_i, grid.half_span_i_nm);
  s.values.assign(grid.points_s * grid.points_i, 0.0);
  s.signal_center_wavelength = signal_center_wavelength;
  s.engine = std::move(engine);
  return s;
}

inline void normalize(JointSpectrum& s, Normalization norm) {
  double ref = 0.0;
  if (norm == Normalization::peak) {
    for (double v : s.values) ref = std::max(ref, v);
  } else {
    for (double v : s.values) ref += v;
  }
  if (!(ref > 0.0) || !std::isfinite(ref)) {
    throw Error(ErrorKind::DegenerateDistribution, "joint spectrum vanishes on the whole grid");
  }
  for (double& v : s.values) v /= ref;
  s.normalization = norm;
}

/// ||a - b|| / ||b|| over the grid values.
inline double relative_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "grids differ in size");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (!(den > 0.0)) throw Error(ErrorKind::DegenerateDistribution, "reference grid is zero");
  return std::sqrt(num / den);
}

inline double relative_l2(const JointSpectrum& a, const JointSpectrum& b) {
  if (a.lambda_s != b.lambda_s || a.lambda_i != b.lambda_i) {
    throw Error(ErrorKind::GridMismatch, "joint spectra are on different grids");
  }
  return relative_l2(a.values, b.values);
}

// ---------------------------------------------------------------------------
// Closed-form bandwidths

/// Gaussian approximation of the phase-matching sinc with equal 1/e^2
/// intensity width: sinc(b x) ~ exp(-(alpha b)^2 x^2).
struct SincApprox {
  double alpha = 0.455;
  bool enabled = true;
};

/// Group-velocity quantities at the degenerate central frequencies.
struct CentralDispersion {
  double ns;  // signal/idler inverse group velocity, s/m
  double np;  // pump inverse group velocity, s/m
  double phi;

  static CentralDispersion of(const CrystalConfig& crystal, double pump_wavelength) {
    const auto c = CentralFrequencies::degenerate(pump_wavelength);
    return {crystal.n_down_group(c.signal), crystal.n_pump_group(c.pump), crystal.internal_angle};
  }
};

struct GaussianModel {
  double pump_waist = 100e-6;                                             // W0, m
  double collection_waist = std::numeric_limits<double>::infinity();      // Ws, m; inf allowed
  std::optional<double> filter_bandwidth;                                 // Bf, rad/s

  void validate() const {
    if (!(pump_waist > 0.0) || !(collection_waist > 0.0) || (filter_bandwidth && !(*filter_bandwidth > 0.0))) {
      throw Error(ErrorKind::DegenerateInput, "Gaussian model widths must be positive");
    }
  }
};

struct GaussianBandwidths {
  double b_plus;   // rad/s
  double b_minus;  // rad/s
};

/// B_- = [1/(2Bf^2) + (Ns sin(phi) W0)^2 / (1 + 2 (W0 cos(phi)/Ws)^2)]^(-1/2)
/// B_+ = [1/Bp^2 + 1/(2Bf^2) + (alpha L)^2 (Np - Ns cos(phi))^2 / (1 + 2 (alpha sin(phi) L/Ws)^2)]^(-1/2)
inline GaussianBandwidths gaussian_bandwidths(const GaussianModel& model, const PumpSpectrum& pump,
                                              const CrystalConfig& crystal, const SincApprox& sinc_approx = {}) {
  model.validate();
  if (!(pump.bandwidth > 0.0) || !(crystal.length > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "pump bandwidth and crystal length must be positive");
  }
  const auto d = CentralDispersion::of(crystal, pump.center_wavelength);
  const double sphi = std::sin(d.phi);
  const double cphi = std::cos(d.phi);
  const double filt = model.filter_bandwidth ? 1.0 / (2.0 * *model.filter_bandwidth * *model.filter_bandwidth) : 0.0;
  const double w0 = model.pump_waist;
  const double ws = model.collection_waist;
  const double r = w0 * cphi / ws;
  const double spatial = (d.ns * sphi * w0) * (d.ns * sphi * w0) / (1.0 + 2.0 * r * r);
  const double alpha = sinc_approx.alpha;
  const double al = alpha * crystal.length;
  const double slope = d.np - d.ns * cphi;
  const double t = alpha * sphi * crystal.length / ws;
  const double pm = al * al * slope * slope / (1.0 + 2.0 * t * t);
  const double inv_bp2 = 1.0 / (pump.bandwidth * pump.bandwidth);
  return {1.0 / std::sqrt(inv_bp2 + filt + pm), 1.0 / std::sqrt(filt + spatial)};
}

struct GaussianJointSpectrum {
  JointSpectrum spectrum;
  GaussianBandwidths bandwidths;
  double delta_lambda_plus_nm;
  double delta_lambda_minus_nm;
};

/// S = exp(-Omega_+^2 / (2 B_+^2)) exp(-Omega_-^2 / (2 B_-^2)).
inline GaussianJointSpectrum joint_spectrum_gaussian(const GaussianModel& model, const PumpSpectrum& pump,
                                                     const CrystalConfig& crystal, const SpectralGrid& grid,
                                                     Normalization norm = Normalization::peak,
                                                     const SincApprox& sinc_approx = {}) {
  const GaussianBandwidths b = gaussian_bandwidths(model, pump, crystal, sinc_approx);
  const double ls0 = 2.0 * pump.center_wavelength;
  const LambdaScale scale(ls0);
  JointSpectrum s = make_spectrum_shell(grid, ls0, "gaussian");
  // Work directly in Lambda units: Delta Lambda_+- = scale * B_+-.
  const double dlp = scale.to_lambda_nm(b.b_plus);
  const double dlm = scale.to_lambda_nm(b.b_minus);
  for (std::size_t is = 0; is < s.ns(); ++is) {
    for (std::size_t ii = 0; ii < s.ni(); ++ii) {
      const double lp = s.lambda_s[is] + s.lambda_i[ii];
      const double lm = s.lambda_s[is] - s.lambda_i[ii];
      s.at(is, ii) = std::exp(-lp * lp / (2.0 * dlp * dlp)) * std::exp(-lm * lm / (2.0 * dlm * dlm));
    }
  }
  normalize(s, norm);
  return {std::move(s), b, dlp, dlm};
}

// ---------------------------------------------------------------------------
// Mapped engine

struct MappedOptions {
  SincApprox sinc_approx{};
  /// Use the phase-matching slope (Np - Ns) cos(phi) instead of the
  /// first-order result Np - Ns cos(phi); kept for comparison only.
  bool printed_slope = false;
  Normalization normalization = Normalization::peak;
};

/// Large-area collection, first-order dispersion:
///   S = |E_q(0, Ns sin(phi) Omega_-)|^2 |E_w(Omega_+)|^2 exp(-(alpha L slope)^2 Omega_+^2 / 2)
/// The last factor is the squared Gaussian stand-in for sinc(Delta_k L / 2).
inline JointSpectrum joint_spectrum_mapped(const PumpField& pump, const CrystalConfig& crystal,
                                           const SpectralGrid& grid, const MappedOptions& opts = {}) {
  crystal.validate();
  pump.spectrum.validate();
  const auto d = CentralDispersion::of(crystal, pump.spectrum.center_wavelength);
  const double sphi = std::sin(d.phi);
  const double cphi = std::cos(d.phi);
  const double slope = opts.printed_slope ? (d.np - d.ns) * cphi : d.np - d.ns * cphi;
  const double a = opts.sinc_approx.enabled ? opts.sinc_approx.alpha * crystal.length * slope : 0.0;
  const MomentumSlice slice = eq_slice(pump.momentum);
  const double ls0 = 2.0 * pump.spectrum.center_wavelength;
  const LambdaScale scale(ls0);
  JointSpectrum s = make_spectrum_shell(grid, ls0, "mapped");
  std::size_t off = 0;
  for (std::size_t is = 0; is < s.ns(); ++is) {
    const double ws = scale.to_omega(s.lambda_s[is]);
    for (std::size_t ii = 0; ii < s.ni(); ++ii) {
      const double wi = scale.to_omega(s.lambda_i[ii]);
      const double wp = ws + wi;
      const double wm = ws - wi;
      const double eq = std::norm(slice.interpolate(d.ns * sphi * wm, &off));
      const double ew = pump.spectrum.amplitude(wp);
      s.at(is, ii) = eq * ew * ew * std::exp(-a * a * wp * wp / 2.0);
    }
  }
  s.offgrid_samples = off;
  normalize(s, opts.normalization);
  return s;
}

// ---------------------------------------------------------------------------
// Numeric engine

struct NumericOptions {
  std::size_t order = 24;
  bool check_convergence = true;
  double convergence_tolerance = 0.005;  // relative L2 between order n and 2n
  MismatchOptions mismatch{};
  /// Evaluate the full 4-D tensor-product sum point by point. Forced on when
  /// second-order mismatch terms are requested, since the factorization below
  /// relies on the first-order form.
  bool brute_force = false;
  Normalization normalization = Normalization::peak;
};

namespace detail {

// Tensor-product Gauss-Hermite projection for one grid. With first-order
// mismatches the 4-D integrand is E_q(q_sx + q_ix, Y(q_sy + q_iy)) P(q_sy - q_iy),
// and bilinear interpolation of E_q is linear in its row weights, so the
// (q_sx, q_ix) double sum can be done once per momentum row. The result is
// identical to the point-by-point 4-D sum.
inline std::vector<double> numeric_amplitudes_factored(const PumpField& pump, const CrystalConfig& crystal,
                                                       const CollectionMode& collection, const JointSpectrum& shell,
                                                       std::size_t order, std::size_t& offgrid) {
  const GaussHermiteRule rule(order);
  const double ws = *collection.waist;
  std::vector<double> q(order);
  for (std::size_t k = 0; k < order; ++k) q[k] = 2.0 * rule.nodes()[k] / ws;
  const auto& w = rule.weights();
  const auto& mom = pump.momentum;
  const std::size_t n = mom.n;

  // Row sums g_j = sum_ab w_a w_b E_row_j(q_a + q_b).
  std::vector<cplx> g(n, 0.0);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      const double fx = (q[a] + q[b] - mom.qx0) / mom.dq;
      if (!(fx >= 0.0 && fx <= static_cast<double>(n - 1))) continue;
      const std::size_t ix = std::min(static_cast<std::size_t>(fx), n - 2);
      const double tx = fx - static_cast<double>(ix);
      const double wab = w[a] * w[b];
      for (std::size_t j = 0; j < n; ++j) {
        g[j] += wab * ((1.0 - tx) * mom.at(ix, j) + tx * mom.at(ix + 1, j));
      }
    }
  }

  const auto centers = CentralFrequencies::degenerate(pump.spectrum.center_wavelength);
  const LambdaScale scale(shell.signal_center_wavelength);
  const double sphi = std::sin(crystal.internal_angle);
  const double cphi = std::cos(crystal.internal_angle);
  const double len = crystal.length;
  std::vector<double> out(shell.values.size());
  for (std::size_t is = 0; is < shell.ns(); ++is) {
    const double om_s = scale.to_omega(shell.lambda_s[is]);
    for (std::size_t ii = 0; ii < shell.ni(); ++ii) {
      const double om_i = scale.to_omega(shell.lambda_i[ii]);
      const Mismatch base = mismatches(om_s, om_i, {}, {}, crystal, centers);
      cplx amp = 0.0;
      for (std::size_t c = 0; c < order; ++c) {
        for (std::size_t dd = 0; dd < order; ++dd) {
          const double y = (q[c] + q[dd]) * cphi + base.transverse;
          const double fy = (y - mom.qy0) / mom.dq;
          if (!(fy >= 0.0 && fy <= static_cast<double>(n - 1))) {
            ++offgrid;
            continue;
          }
          const std::size_t iy = std::min(static_cast<std::size_t>(fy), n - 2);
          const double ty = fy - static_cast<double>(iy);
          const cplx gy = (1.0 - ty) * g[iy] + ty * g[iy + 1];
          const double half = 0.5 * (base.longitudinal + (q[c] - q[dd]) * sphi) * len;
          amp += w[c] * w[dd] * gy * sinc(half) * std::polar(1.0, -half);
        }
      }
      amp *= pump.spectrum.amplitude(om_s + om_i) * collection.filter(om_s) * collection.filter(om_i);
      out[is * shell.ni() + ii] = std::norm(amp);
    }
  }
  return out;
}

inline std::vector<double> numeric_amplitudes_brute(const PumpField& pump, const CrystalConfig& crystal,
                                                    const CollectionMode& collection, const JointSpectrum& shell,
                                                    std::size_t order, MismatchOptions mopts,
                                                    std::size_t& offgrid) {
  const GaussHermiteRule rule(order);
  const double ws = *collection.waist;
  std::vector<double> q(order);
  for (std::size_t k = 0; k < order; ++k) q[k] = 2.0 * rule.nodes()[k] / ws;
  const auto& w = rule.weights();
  const LambdaScale scale(shell.signal_center_wavelength);
  std::vector<double> out(shell.values.size());
  for (std::size_t is = 0; is < shell.ns(); ++is) {
    const double om_s = scale.to_omega(shell.lambda_s[is]);
    for (std::size_t ii = 0; ii < shell.ni(); ++ii) {
      const double om_i = scale.to_omega(shell.lambda_i[ii]);
      cplx amp = 0.0;
      for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b)
          for (std::size_t c = 0; c < order; ++c)
            for (std::size_t d = 0; d < order; ++d) {
              amp += w[a] * w[b] * w[c] * w[d] *
                     mode_function(om_s, om_i, {q[a], q[c]}, {q[b], q[d]}, pump, crystal, mopts, &offgrid);
            }
      amp *= collection.filter(om_s) * collection.filter(om_i);
      out[is * shell.ni() + ii] = std::norm(amp);
    }
  }
  return out;
}

inline std::vector<double> numeric_values(const PumpField& pump, const CrystalConfig& crystal,
                                          const CollectionMode& collection, const JointSpectrum& shell,
                                          std::size_t order, const NumericOptions& opts, std::size_t& offgrid) {
  if (opts.brute_force || opts.mismatch.second_order) {
    return numeric_amplitudes_brute(pump, crystal, collection, shell, order, opts.mismatch, offgrid);
  }
  return numeric_amplitudes_factored(pump, crystal, collection, shell, order, offgrid);
}

}  // namespace detail

struct NumericResult {
  JointSpectrum spectrum;
  std::size_t order = 0;
  double convergence_delta = 0.0;  // relative L2 between order n and 2n; 0 when unchecked
};

/// S(Omega_s, Omega_i) = | int dq_s dq_i Phi U*(q_s) U*(q_i) |^2 H(Omega_s)^2 H(Omega_i)^2,
/// evaluated by tensor-product Gauss-Hermite quadrature matched to the
/// Gaussian collection weights. Large-area collection evaluates Phi at q = 0.
inline NumericResult joint_spectrum_numeric(const PumpField& pump, const CrystalConfig& crystal,
                                            const CollectionMode& collection, const SpectralGrid& grid,
                                            const NumericOptions& opts = {}) {
  crystal.validate();
  collection.validate();
  pump.spectrum.validate();
  const double ls0 = 2.0 * pump.spectrum.center_wavelength;
  JointSpectrum s = make_spectrum_shell(grid, ls0, "numeric");
  NumericResult result;
  std::size_t off = 0;
  if (collection.is_large_area()) {
    const LambdaScale scale(ls0);
    for (std::size_t is = 0; is < s.ns(); ++is) {
      const double om_s = scale.to_omega(s.lambda_s[is]);
      for (std::size_t ii = 0; ii < s.ni(); ++ii) {
        const double om_i = scale.to_omega(s.lambda_i[ii]);
        const cplx phi = mode_function(om_s, om_i, {}, {}, pump, crystal, opts.mismatch, &off);
        s.at(is, ii) = std::norm(phi * collection.filter(om_s) * collection.filter(om_i));
      }
    }
    s.offgrid_samples = off;
    normalize(s, opts.normalization);
    result.spectrum = std::move(s);
    return result;
  }

  s.values = detail::numeric_values(pump, crystal, collection, s, opts.order, opts, off);
  s.offgrid_samples = off;
  normalize(s, opts.normalization);
  result.order = opts.order;
  if (opts.check_convergence) {
    JointSpectrum twice = s;
    std::size_t off2 = 0;
    twice.values = detail::numeric_values(pump, crystal, collection, s, 2 * opts.order, opts, off2);
    normalize(twice, opts.normalization);
    result.convergence_delta = relative_l2(s.values, twice.values);
    if (result.convergence_delta > opts.convergence_tolerance) {
      throw Error(ErrorKind::QuadratureNotConverged,
                  "doubling the Gauss-Hermite order changed the spectrum by " +
                      std::to_string(100.0 * result.convergence_delta) + "% (L2)");
    }
  }
  result.spectrum = std::move(s);
  return result;
}

}  // namespace spdc
