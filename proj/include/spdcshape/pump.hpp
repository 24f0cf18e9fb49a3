#pragma once

// Pump spectral envelope and transverse profiles, rendered on a square grid
// and carried into the transverse-momentum domain.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spdcshape/errors.hpp"
#include "spdcshape/fft.hpp"
#include "spdcshape/units.hpp"

namespace spdc {

using cplx = std::complex<double>;

enum class WidthConvention { std_dev, fwhm };

struct PumpSpectrum {
  double center_wavelength = 405e-9;  // m
  double bandwidth = 0.0;             // Bp, rad/s; intensity standard deviation in Omega_p

  /// Converts a wavelength-domain width using dOmega = 2 pi c / lambda^2 dlambda.
  static PumpSpectrum from_wavelength_width(double center_wavelength, double width, WidthConvention conv) {
    if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "pump bandwidth must be positive");
    const double sigma = conv == WidthConvention::fwhm ? width / (2.0 * std::sqrt(2.0 * std::log(2.0))) : width;
    return {center_wavelength, 2.0 * kPi * kSpeedOfLight * sigma / (center_wavelength * center_wavelength)};
  }

  double wavelength_std() const {
    return bandwidth * center_wavelength * center_wavelength / (2.0 * kPi * kSpeedOfLight);
  }

  /// E(Omega_p) = exp(-Omega_p^2 / (4 Bp^2)).
  double amplitude(double omega_p) const { return std::exp(-omega_p * omega_p / (4.0 * bandwidth * bandwidth)); }

  void validate() const {
    if (!(bandwidth > 0.0)) throw Error(ErrorKind::InvalidArgument, "pump bandwidth Bp must be positive");
    if (!(center_wavelength > 0.0)) throw Error(ErrorKind::InvalidArgument, "pump wavelength must be positive");
  }
};

/// Square cell-centered grid: coordinate(j) = (j - (n-1)/2) * spacing.
struct GridSpec {
  std::size_t n = 256;
  double spacing = 1e-6;

  double coordinate(std::size_t j) const {
    return (static_cast<double>(j) - 0.5 * static_cast<double>(n - 1)) * spacing;
  }
  double span() const { return static_cast<double>(n) * spacing; }

  /// Grid whose total span is span_in_waists * waist.
  static GridSpec covering(double waist, std::size_t n, double span_in_waists) {
    return {n, span_in_waists * waist / static_cast<double>(n)};
  }
};

/// Complex field on a GridSpec, row-major with y as the slow index.
struct SampledField {
  GridSpec grid;
  std::vector<cplx> values;

  cplx at(std::size_t ix, std::size_t iy) const { return values[iy * grid.n + ix]; }
  double power() const {
    double p = 0.0;
    for (const auto& v : values) p += std::norm(v);
    return p;
  }
  void validate() const {
    if (!fft::is_power_of_two(grid.n)) throw Error(ErrorKind::InvalidArgument, "field grid size must be a power of two");
    if (!(grid.spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "field grid spacing must be positive");
    if (values.size() != grid.n * grid.n) throw Error(ErrorKind::InvalidArgument, "field has wrong number of samples");
    if (!(power() > 0.0)) throw Error(ErrorKind::InvalidArgument, "field has zero power");
  }
};

struct GaussianProfile {
  double waist;
};
struct VortexProfile {
  double waist;
  int charge;
};
/// Gaussian multiplied by exp(i step) on the half-plane y > edge.
struct PhaseStepProfile {
  double waist;
  double step = kPi;
  double edge = 0.0;
};

using TransverseProfile = std::variant<GaussianProfile, VortexProfile, PhaseStepProfile, SampledField>;

/// Characteristic waist of an analytic profile, nullopt for sampled fields.
inline std::optional<double> profile_waist(const TransverseProfile& p) {
  return std::visit(
      [](const auto& v) -> std::optional<double> {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, SampledField>) {
          return std::nullopt;
        } else {
          return v.waist;
        }
      },
      p);
}

inline void normalize_l2(std::vector<cplx>& v) {
  double p = 0.0;
  for (const auto& x : v) p += std::norm(x);
  if (!(p > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero field");
  const double s = 1.0 / std::sqrt(p);
  for (auto& x : v) x *= s;
}

/// Value of an analytic profile at (x, y), before normalization.
///   Gaussian:   exp(-r^2/W0^2)
///   Vortex:     (r/W0)^|m| exp(-r^2/W0^2) exp(i m theta)
///   PhaseStep:  exp(-r^2/W0^2), times exp(i step) where y > edge
inline cplx profile_value(const TransverseProfile& profile, double x, double y) {
  return std::visit(
      [&](const auto& p) -> cplx {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SampledField>) {
          throw Error(ErrorKind::InvalidArgument, "sampled fields have no analytic value");
        } else {
          const double r2 = (x * x + y * y) / (p.waist * p.waist);
          const double g = std::exp(-r2);
          if constexpr (std::is_same_v<T, GaussianProfile>) {
            return g;
          } else if constexpr (std::is_same_v<T, VortexProfile>) {
            const int m = std::abs(p.charge);
            if (m == 0) return g;
            if (r2 == 0.0) return 0.0;
            return std::pow(std::sqrt(r2), m) * g * std::polar(1.0, p.charge * std::atan2(y, x));
          } else {
            return y > p.edge ? g * std::polar(1.0, p.step) : cplx(g);
          }
        }
      },
      profile);
}

/// Samples an analytic profile (unit discrete L2 norm). Sampled fields pass
/// through unchanged.
inline SampledField render_profile(const TransverseProfile& profile, const GridSpec& grid) {
  if (const auto* s = std::get_if<SampledField>(&profile)) {
    s->validate();
    return *s;
  }
  if (!fft::is_power_of_two(grid.n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  const double waist = *profile_waist(profile);
  if (!(waist > 0.0)) throw Error(ErrorKind::InvalidArgument, "waist must be positive");
  if (waist < 4.0 * grid.spacing) throw Error(ErrorKind::GridTooCoarse, "waist spans fewer than 4 grid spacings");
  if (grid.span() < 6.0 * waist) throw Error(ErrorKind::GridTooSmall, "grid spans less than 6 waists");

  SampledField out{grid, std::vector<cplx>(grid.n * grid.n)};
  const std::size_t n = grid.n;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      out.values[iy * n + ix] = profile_value(profile, grid.coordinate(ix), grid.coordinate(iy));
    }
  }
  normalize_l2(out.values);
  return out;
}

/// Pump amplitude on a uniform (q_x, q_y) grid: q(k) = q0 + k dq, row-major
/// with q_y as the slow index.
struct MomentumSpectrum {
  std::size_t n = 0;
  double dq = 0.0;
  double qx0 = 0.0;
  double qy0 = 0.0;
  std::vector<cplx> values;

  double qx(std::size_t k) const { return qx0 + static_cast<double>(k) * dq; }
  double qy(std::size_t k) const { return qy0 + static_cast<double>(k) * dq; }
  double qx_max() const { return qx(n - 1); }
  double qy_max() const { return qy(n - 1); }
  cplx at(std::size_t kx, std::size_t ky) const { return values[ky * n + kx]; }

  double power() const {
    double p = 0.0;
    for (const auto& v : values) p += std::norm(v);
    return p;
  }

  /// Bilinear interpolation; zero outside the sampled window, in which case
  /// *offgrid (when given) is incremented.
  cplx interpolate(double qx_val, double qy_val, std::size_t* offgrid = nullptr) const {
    const double fx = (qx_val - qx0) / dq;
    const double fy = (qy_val - qy0) / dq;
    const double last = static_cast<double>(n - 1);
    if (!(fx >= 0.0 && fx <= last && fy >= 0.0 && fy <= last)) {
      if (offgrid) ++*offgrid;
      return 0.0;
    }
    std::size_t ix = std::min(static_cast<std::size_t>(fx), n - 2);
    std::size_t iy = std::min(static_cast<std::size_t>(fy), n - 2);
    const double tx = fx - static_cast<double>(ix);
    const double ty = fy - static_cast<double>(iy);
    const cplx r0 = (1.0 - tx) * at(ix, iy) + tx * at(ix + 1, iy);
    const cplx r1 = (1.0 - tx) * at(ix, iy + 1) + tx * at(ix + 1, iy + 1);
    return (1.0 - ty) * r0 + ty * r1;
  }

  /// Throwing variant used when leaving the window is a caller error.
  cplx interpolate_checked(double qx_val, double qy_val) const {
    std::size_t off = 0;
    const cplx v = interpolate(qx_val, qy_val, &off);
    if (off) throw Error(ErrorKind::OutOfGrid, "momentum argument outside the sampled pump window");
    return v;
  }
};

/// Centered unitary 2-D DFT with physical q scaling, dq = 2 pi / (n dx).
inline MomentumSpectrum momentum_distribution(const SampledField& field) {
  field.validate();
  const std::size_t n = field.grid.n;
  MomentumSpectrum m;
  m.n = n;
  m.dq = 2.0 * kPi / (static_cast<double>(n) * field.grid.spacing);
  m.qx0 = m.qy0 = -static_cast<double>(n / 2) * m.dq;
  m.values = fft::centered_transform(field.values, n, -1);
  return m;
}

/// Inverse of momentum_distribution; requires the centered q layout.
inline SampledField position_field(const MomentumSpectrum& spectrum) {
  const std::size_t n = spectrum.n;
  const double expected0 = -static_cast<double>(n / 2) * spectrum.dq;
  if (std::abs(spectrum.qx0 - expected0) > 1e-9 * spectrum.dq || std::abs(spectrum.qy0 - expected0) > 1e-9 * spectrum.dq) {
    throw Error(ErrorKind::OffGrid, "inverse transform needs a centered momentum grid");
  }
  SampledField f;
  f.grid = {n, 2.0 * kPi / (static_cast<double>(n) * spectrum.dq)};
  f.values = fft::centered_transform(spectrum.values, n, +1);
  return f;
}

struct MomentumSlice {
  std::vector<double> qy;
  std::vector<cplx> values;

  /// Linear interpolation in q_y, zero outside.
  cplx interpolate(double q, std::size_t* offgrid = nullptr) const {
    const std::size_t n = qy.size();
    const double dq = qy[1] - qy[0];
    const double f = (q - qy[0]) / dq;
    if (!(f >= 0.0 && f <= static_cast<double>(n - 1))) {
      if (offgrid) ++*offgrid;
      return 0.0;
    }
    const std::size_t i = std::min(static_cast<std::size_t>(f), n - 2);
    const double t = f - static_cast<double>(i);
    return (1.0 - t) * values[i] + t * values[i + 1];
  }
};

/// E_q(0, q_y): the column at q_x = 0, which must be a grid node.
inline MomentumSlice eq_slice(const MomentumSpectrum& spectrum) {
  const double f = -spectrum.qx0 / spectrum.dq;
  const double k = std::round(f);
  if (std::abs(f - k) > 1e-9 || k < 0.0 || k > static_cast<double>(spectrum.n - 1)) {
    throw Error(ErrorKind::OffGrid, "q_x = 0 is not a node of the momentum grid");
  }
  const auto kx = static_cast<std::size_t>(k);
  MomentumSlice s;
  s.qy.resize(spectrum.n);
  s.values.resize(spectrum.n);
  for (std::size_t ky = 0; ky < spectrum.n; ++ky) {
    s.qy[ky] = spectrum.qy(ky);
    s.values[ky] = spectrum.at(kx, ky);
  }
  return s;
}

/// Spectral envelope plus transverse momentum profile of the pump.
struct PumpField {
  PumpSpectrum spectrum;
  MomentumSpectrum momentum;
  std::optional<double> waist;  // set for analytic profiles
};

inline PumpField make_pump_field(const PumpSpectrum& spectrum, const TransverseProfile& profile, const GridSpec& grid) {
  spectrum.validate();
  return {spectrum, momentum_distribution(render_profile(profile, grid)), profile_waist(profile)};
}

/// Default rendering grid for an analytic profile: 512 points over 48 waists,
/// which resolves the Gaussian momentum width with ~15 samples per 1/e.
inline GridSpec default_grid_for_waist(double waist, std::size_t n = 512, double span_in_waists = 48.0) {
  return GridSpec::covering(waist, n, span_in_waists);
}

}  // namespace spdc
