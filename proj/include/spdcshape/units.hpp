#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kMetersPerNm = 1e-9;
inline constexpr double kMetersPerUm = 1e-6;

inline double angular_frequency(double wavelength) { return 2.0 * kPi * kSpeedOfLight / wavelength; }
inline double wavelength_from_omega(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Central frequencies of a degenerate type-I process: the signal and idler
/// sit at half the pump frequency.
struct CentralFrequencies {
  double pump = 0.0;
  double signal = 0.0;
  double idler = 0.0;

  static CentralFrequencies degenerate(double pump_wavelength) {
    const double wp = angular_frequency(pump_wavelength);
    return {wp, 0.5 * wp, 0.5 * wp};
  }

  double signal_wavelength() const { return wavelength_from_omega(signal); }
};

/// Linear map between frequency deviations (rad/s) and the wavelength-unit
/// variables Lambda = lambda_s0 * Omega / omega_s0, reported in nm. The same
/// scale applies to single-photon deviations and to the sum/difference
/// coordinates.
class LambdaScale {
 public:
  explicit LambdaScale(double signal_center_wavelength)
      : lambda0_(signal_center_wavelength), omega0_(angular_frequency(signal_center_wavelength)) {}

  double center_wavelength() const { return lambda0_; }
  double center_omega() const { return omega0_; }

  double to_lambda_nm(double omega_dev) const { return lambda0_ * omega_dev / omega0_ / kMetersPerNm; }
  double to_omega(double lambda_nm) const { return lambda_nm * kMetersPerNm * omega0_ / lambda0_; }

  /// Meters of Lambda per rad/s of Omega.
  double meters_per_radps() const { return lambda0_ / omega0_; }

  std::vector<double> to_lambda_nm(std::span<const double> omegas) const {
    std::vector<double> out(omegas.size());
    const double s = lambda0_ / omega0_ / kMetersPerNm;
    for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = s * omegas[i];
    return out;
  }
  std::vector<double> to_omega(std::span<const double> lambdas_nm) const {
    std::vector<double> out(lambdas_nm.size());
    const double s = kMetersPerNm * omega0_ / lambda0_;
    for (std::size_t i = 0; i < lambdas_nm.size(); ++i) out[i] = s * lambdas_nm[i];
    return out;
  }

 private:
  double lambda0_;
  double omega0_;
};

}  // namespace spdc
