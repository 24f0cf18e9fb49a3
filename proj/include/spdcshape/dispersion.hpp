#pragma once

// Refractive-index and group-velocity models for the three interacting waves,
// plus the degenerate noncollinear phase-matching angle.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spdcshape/errors.hpp"
#include "spdcshape/units.hpp"

namespace spdc {

enum class Polarization { ordinary, extraordinary };

/// One principal-index dispersion law, wavelength in micrometers:
///   sellmeier form:  n^2 = A + sum_i B_i l^2 / (l^2 - C_i) - D l^2
///   handbook form:   n^2 = A + sum_i B_i / (l^2 - C_i)     - D l^2
struct DispersionLaw {
  enum class Form { sellmeier, handbook };

  Form form = Form::sellmeier;
  double a = 1.0;
  std::vector<double> b;
  std::vector<double> c;  // um^2
  double d = 0.0;         // um^-2

  double n_squared(double um) const {
    const double l2 = um * um;
    double n2 = a - d * l2;
    for (std::size_t i = 0; i < b.size(); ++i) {
      n2 += form == Form::sellmeier ? b[i] * l2 / (l2 - c[i]) : b[i] / (l2 - c[i]);
    }
    return n2;
  }

  /// d(n^2)/d(lambda) in um^-1.
  double dn_squared(double um) const {
    const double l2 = um * um;
    double g = -2.0 * d * um;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double den = l2 - c[i];
      g += form == Form::sellmeier ? -2.0 * b[i] * c[i] * um / (den * den) : -2.0 * b[i] * um / (den * den);
    }
    return g;
  }
};

/// Uniaxial crystal dispersion. Immutable once built.
struct IndexModel {
  std::string name;
  DispersionLaw ordinary;
  DispersionLaw extraordinary;
  double range_um_min = 0.0;
  double range_um_max = 0.0;
  std::string source;

  bool in_range(double wavelength) const {
    const double um = wavelength / kMetersPerUm;
    return um >= range_um_min && um <= range_um_max;
  }
};

/// Lithium iodate. The built-in law is the handbook-form fit with an IR
/// correction term; lithium_iodate_alt() is an independent three-term fit
/// used as a cross-check.
inline IndexModel lithium_iodate() {
  IndexModel m;
  m.name = "LiIO3";
  m.ordinary = {DispersionLaw::Form::handbook, 3.415716, {0.047031}, {0.035306}, 0.008801};
  m.extraordinary = {DispersionLaw::Form::handbook, 2.918692, {0.035145}, {0.028224}, 0.003641};
  m.range_um_min = 0.3;
  m.range_um_max = 5.0;
  m.source = "handbook Sellmeier fit n^2 = A + B/(l^2 - C) - D l^2 for LiIO3, 0.3-5 um";
  return m;
}

inline IndexModel lithium_iodate_alt() {
  IndexModel m;
  m.name = "LiIO3-alt";
  m.ordinary = {DispersionLaw::Form::handbook, 3.4095, {0.047664}, {0.033991}, 0.0};
  m.extraordinary = {DispersionLaw::Form::handbook, 2.9163, {0.035919}, {0.028486}, 0.0};
  m.range_um_min = 0.3;
  m.range_um_max = 4.0;
  m.source = "three-term handbook fit n^2 = A + B/(l^2 - C) for LiIO3";
  return m;
}

/// Dispersionless test material.
inline IndexModel constant_index(double n, double ne = 0.0) {
  IndexModel m;
  m.name = "constant";
  m.ordinary.a = n * n;
  m.extraordinary.a = (ne > 0.0 ? ne : n) * (ne > 0.0 ? ne : n);
  m.range_um_min = 0.01;
  m.range_um_max = 1000.0;
  m.source = "constant index";
  return m;
}

inline IndexModel builtin_index_model(const std::string& name) {
  if (name == "LiIO3" || name == "liio3") return lithium_iodate();
  if (name == "LiIO3-alt" || name == "liio3-alt") return lithium_iodate_alt();
  throw Error(ErrorKind::UnknownModel, "no built-in index model named '" + name + "'");
}

namespace detail {

inline DispersionLaw read_law(const boost::property_tree::ptree& pt, const std::string& suffix) {
  DispersionLaw law;
  const auto form = pt.get<std::string>("form", "sellmeier");
  if (form == "sellmeier") {
    law.form = DispersionLaw::Form::sellmeier;
  } else if (form == "handbook") {
    law.form = DispersionLaw::Form::handbook;
  } else {
    throw Error(ErrorKind::ConfigError, "index model: unknown form '" + form + "'");
  }
  law.a = pt.get<double>("A_" + suffix, 1.0);
  law.d = pt.get<double>("D_" + suffix, 0.0);
  for (int i = 1;; ++i) {
    auto bi = pt.get_optional<double>("B" + std::to_string(i) + "_" + suffix);
    auto ci = pt.get_optional<double>("C" + std::to_string(i) + "_" + suffix);
    if (!bi && !ci) break;
    if (!bi || !ci) {
      throw Error(ErrorKind::ConfigError, "index model: B" + std::to_string(i) + "/C" + std::to_string(i) +
                                              " must both be given for the " + suffix + " set");
    }
    law.b.push_back(*bi);
    law.c.push_back(*ci);
  }
  return law;
}

}  // namespace detail

/// Parses the flat key-value index-model format:
///   name, source, form, range_um_min, range_um_max,
///   A_o, B1_o, C1_o, ..., D_o and the same keys with the _e suffix.
inline IndexModel parse_index_model(std::istream& in) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("index model: ") + e.what());
  }
  IndexModel m;
  try {
    m.name = pt.get<std::string>("name");
    m.source = pt.get<std::string>("source", "");
    m.range_um_min = pt.get<double>("range_um_min");
    m.range_um_max = pt.get<double>("range_um_max");
    m.ordinary = detail::read_law(pt, "o");
    m.extraordinary = detail::read_law(pt, "e");
  } catch (const boost::property_tree::ptree_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("index model: ") + e.what());
  }
  if (!(m.range_um_min > 0.0) || !(m.range_um_max > m.range_um_min)) {
    throw Error(ErrorKind::ConfigError, "index model: invalid valid range");
  }
  return m;
}

inline IndexModel load_index_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open index model file '" + path + "'");
  return parse_index_model(in);
}

inline std::string format_index_model(const IndexModel& m) {
  std::ostringstream os;
  os.precision(17);
  const auto law = [&](const DispersionLaw& l, const char* s) {
    os << "A_" << s << " = " << l.a << "\n";
    for (std::size_t i = 0; i < l.b.size(); ++i) {
      os << "B" << i + 1 << "_" << s << " = " << l.b[i] << "\n";
      os << "C" << i + 1 << "_" << s << " = " << l.c[i] << "\n";
    }
    os << "D_" << s << " = " << l.d << "\n";
  };
  os << "name = " << m.name << "\n";
  os << "source = " << m.source << "\n";
  if (m.ordinary.form != m.extraordinary.form) {
    throw Error(ErrorKind::Unsupported, "index model file holds a single form for both sets");
  }
  os << "form = " << (m.ordinary.form == DispersionLaw::Form::handbook ? "handbook" : "sellmeier") << "\n";
  os << "range_um_min = " << m.range_um_min << "\n";
  os << "range_um_max = " << m.range_um_max << "\n";
  law(m.ordinary, "o");
  law(m.extraordinary, "e");
  return os.str();
}

namespace detail {

inline void require_in_range(const IndexModel& model, double wavelength) {
  if (!(wavelength > 0.0) || !model.in_range(wavelength)) {
    std::ostringstream os;
    os << model.name << ": wavelength " << wavelength / kMetersPerUm << " um outside valid range ["
       << model.range_um_min << ", " << model.range_um_max << "] um";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
}

struct IndexAndSlope {
  double n;
  double dn_dlambda;  // per meter
};

inline IndexAndSlope index_and_slope(const IndexModel& model, double wavelength, Polarization pol,
                                     double axis_angle) {
  require_in_range(model, wavelength);
  const double um = wavelength / kMetersPerUm;
  const auto principal = [um](const DispersionLaw& law) {
    const double n2 = law.n_squared(um);
    const double n = std::sqrt(n2);
    return IndexAndSlope{n, law.dn_squared(um) / (2.0 * n) / kMetersPerUm};
  };
  const IndexAndSlope o = principal(model.ordinary);
  if (pol == Polarization::ordinary) return o;
  const double s = std::sin(axis_angle);
  const double c = std::cos(axis_angle);
  if (std::abs(s) < 1e-12) return o;
  const IndexAndSlope e = principal(model.extraordinary);
  if (std::abs(c) < 1e-12) return e;
  // 1/n^2 = cos^2/no^2 + sin^2/ne^2
  const double inv = c * c / (o.n * o.n) + s * s / (e.n * e.n);
  const double n = 1.0 / std::sqrt(inv);
  const double dn = n * n * n * (c * c * o.dn_dlambda / (o.n * o.n * o.n) + s * s * e.dn_dlambda / (e.n * e.n * e.n));
  return {n, dn};
}

}  // namespace detail

/// Refractive index at a vacuum wavelength (meters). axis_angle is the angle
/// between the wavevector and the optic axis and only matters for the
/// extraordinary wave.
inline double refractive_index(const IndexModel& model, double wavelength, Polarization pol,
                               double axis_angle = kPi / 2) {
  const double n = detail::index_and_slope(model, wavelength, pol, axis_angle).n;
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::OutOfRange, model.name + ": unphysical index at this wavelength");
  }
  return n;
}

/// k = 2 pi n / lambda, rad/m.
inline double wavevector(const IndexModel& model, double wavelength, Polarization pol, double axis_angle = kPi / 2) {
  return 2.0 * kPi * refractive_index(model, wavelength, pol, axis_angle) / wavelength;
}

inline double wavevector_at_omega(const IndexModel& model, double omega, Polarization pol,
                                  double axis_angle = kPi / 2) {
  return refractive_index(model, wavelength_from_omega(omega), pol, axis_angle) * omega / kSpeedOfLight;
}

/// Inverse group velocity dk/domega (s/m) from the analytic derivative of the
/// dispersion law: N = (n - lambda dn/dlambda) / c.
inline double inverse_group_velocity(const IndexModel& model, double wavelength, Polarization pol,
                                     double axis_angle = kPi / 2) {
  const auto [n, dn] = detail::index_and_slope(model, wavelength, pol, axis_angle);
  return (n - wavelength * dn) / kSpeedOfLight;
}

/// Same quantity by a central difference in omega with relative step 1e-6.
inline double inverse_group_velocity_fd(const IndexModel& model, double wavelength, Polarization pol,
                                        double axis_angle = kPi / 2) {
  const double w = angular_frequency(wavelength);
  const double h = 1e-6 * w;
  return (wavevector_at_omega(model, w + h, pol, axis_angle) - wavevector_at_omega(model, w - h, pol, axis_angle)) /
         (2.0 * h);
}

/// Type-I crystal: pump extraordinary, signal and idler ordinary; the
/// signal travels at +phi and the idler at -phi from the pump axis.
struct CrystalConfig {
  double length = 1e-3;            // m
  double internal_angle = 0.0;     // rad
  IndexModel index = lithium_iodate();
  double pump_axis_angle = kPi / 2;  // noncritical cut
  Polarization pump_polarization = Polarization::extraordinary;
  Polarization downconverted_polarization = Polarization::ordinary;

  void validate() const {
    if (!(length > 0.0)) throw Error(ErrorKind::InvalidArgument, "crystal length must be positive");
    if (!(internal_angle >= 0.0 && internal_angle < kPi / 2)) {
      throw Error(ErrorKind::InvalidArgument, "internal angle must lie in [0, pi/2)");
    }
  }

  double k_pump(double omega) const { return wavevector_at_omega(index, omega, pump_polarization, pump_axis_angle); }
  double k_down(double omega) const { return wavevector_at_omega(index, omega, downconverted_polarization, kPi / 2); }
  double n_pump_group(double omega) const {
    return inverse_group_velocity(index, wavelength_from_omega(omega), pump_polarization, pump_axis_angle);
  }
  double n_down_group(double omega) const {
    return inverse_group_velocity(index, wavelength_from_omega(omega), downconverted_polarization, kPi / 2);
  }
};

/// Angle phi with k_p = 2 k_s cos(phi) for degenerate type-I operation,
/// i.e. cos(phi) = n_p(lambda_p) / n_s(2 lambda_p).
inline double phase_matching_angle(const IndexModel& model, double pump_wavelength, bool degenerate = true,
                                   double pump_axis_angle = kPi / 2) {
  if (!degenerate) {
    throw Error(ErrorKind::Unsupported, "phase-matching solver handles degenerate operation only");
  }
  const double np = refractive_index(model, pump_wavelength, Polarization::extraordinary, pump_axis_angle);
  const double ns = refractive_index(model, 2.0 * pump_wavelength, Polarization::ordinary);
  const double ratio = np / ns;
  if (ratio > 1.0) {
    std::ostringstream os;
    os << "n_p/n_s = " << ratio << " > 1, no noncollinear angle exists";
    throw Error(ErrorKind::NoSolution, os.str());
  }
  return std::acos(ratio);
}

}  // namespace spdc
