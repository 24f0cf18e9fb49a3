#pragma once

// Sectioned key-value run configuration. Every physical quantity carries its
// unit in the key name.
//
//   [crystal]    material | index_file, L_mm, phi_deg (number or auto)
//   [pump]       lambda_nm, dlambda_nm, bandwidth_convention (std|fwhm),
//                profile (gaussian|vortex|phase_step), W0_um, charge, step_rad,
//                edge_um, grid_points, grid_span_waists
//   [collection] mode (gaussian|large_area), Ws_um, Bf_nm
//   [grid]       span_nm (half span of each axis), points
//   [engine]     name (numeric|mapped|gaussian|all), order, printed_slope
//   [scan]       peak_rate_hz, accidental_rate_hz, integration_s
//   [sweep]      W0_min_um, W0_max_um, points, Ws_um (comma list, inf allowed),
//                dLp_target_nm
//   [inverse]    target, qx_waist_um, grid_points, engine (mapped|numeric)
//   [camera]     focal_length_mm, pixel_pitch_um

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spdcshape/biphoton.hpp"
#include "spdcshape/dispersion.hpp"
#include "spdcshape/errors.hpp"
#include "spdcshape/io.hpp"
#include "spdcshape/pump.hpp"

namespace spdc {

enum class EngineChoice { numeric, mapped, gaussian, all };

inline EngineChoice parse_engine(const std::string& s) {
  if (s == "numeric") return EngineChoice::numeric;
  if (s == "mapped") return EngineChoice::mapped;
  if (s == "gaussian") return EngineChoice::gaussian;
  if (s == "all") return EngineChoice::all;
  throw Error(ErrorKind::ConfigError, "engine must be numeric, mapped, gaussian or all (got '" + s + "')");
}

/// FNV-1a, used to tag outputs with the configuration they came from.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct RunConfig {
  // crystal
  IndexModel index = lithium_iodate();
  double length = 1e-3;
  std::optional<double> phi;  // nullopt: solve for it

  // pump
  double pump_wavelength = 405e-9;
  double pump_dlambda = 0.4e-9;
  WidthConvention convention = WidthConvention::std_dev;
  std::string profile = "gaussian";
  double pump_waist = 30e-6;
  int charge = 2;
  double step = kPi;
  double edge = 0.0;
  std::size_t pump_grid_points = 512;
  double pump_grid_span_waists = 48.0;

  // collection
  bool large_area = false;
  double collection_waist = 133.48e-6;
  std::optional<double> filter_nm;  // single-photon filter width, wavelength-equivalent std

  // spectral grid
  double span_nm = 8.0;
  std::size_t points = 64;

  // engine
  EngineChoice engine = EngineChoice::gaussian;
  std::size_t order = 24;
  bool printed_slope = false;

  // scan
  double peak_rate = 1.0;
  double accidental_rate = 0.0;
  double integration_s = 200.0;

  // sweep
  double sweep_w0_min = 1e-6;
  double sweep_w0_max = 5e-3;
  std::size_t sweep_points = 200;
  std::vector<double> sweep_ws = {133.48e-6, 50e-6, std::numeric_limits<double>::infinity()};
  std::optional<double> sweep_plus_target_nm;

  // inverse
  std::string target_path;
  std::optional<double> qx_waist;
  std::size_t inverse_grid_points = 512;
  std::string inverse_engine = "mapped";

  // camera
  std::optional<double> focal_length;
  double pixel_pitch = 5e-6;

  std::uint64_t hash = 0;
  std::filesystem::path base_dir;

  CrystalConfig crystal() const {
    CrystalConfig c;
    c.index = index;
    c.length = length;
    c.internal_angle = phi ? *phi : phase_matching_angle(index, pump_wavelength);
    c.validate();
    return c;
  }

  PumpSpectrum pump_spectrum() const {
    return PumpSpectrum::from_wavelength_width(pump_wavelength, pump_dlambda, convention);
  }

  TransverseProfile transverse_profile() const {
    if (profile == "gaussian") return GaussianProfile{pump_waist};
    if (profile == "vortex") return VortexProfile{pump_waist, charge};
    if (profile == "phase_step") return PhaseStepProfile{pump_waist, step, edge};
    throw Error(ErrorKind::ConfigError, "pump.profile must be gaussian, vortex or phase_step");
  }

  PumpField pump_field() const {
    return make_pump_field(pump_spectrum(), transverse_profile(),
                           default_grid_for_waist(pump_waist, pump_grid_points, pump_grid_span_waists));
  }

  /// Filter bandwidth Bf in rad/s.
  std::optional<double> filter_bandwidth() const {
    if (!filter_nm) return std::nullopt;
    return LambdaScale(2.0 * pump_wavelength).to_omega(*filter_nm);
  }

  CollectionMode collection() const {
    return large_area ? CollectionMode::large_area(filter_bandwidth())
                      : CollectionMode::gaussian(collection_waist, filter_bandwidth());
  }

  GaussianModel gaussian_model() const {
    return {pump_waist, large_area ? std::numeric_limits<double>::infinity() : collection_waist, filter_bandwidth()};
  }

  SpectralGrid spectral_grid() const { return SpectralGrid::square(points, span_nm); }

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  }
};

namespace detail {

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> k = {
      "crystal.material", "crystal.index_file", "crystal.L_mm", "crystal.phi_deg",
      "pump.lambda_nm", "pump.dlambda_nm", "pump.bandwidth_convention", "pump.profile", "pump.W0_um",
      "pump.charge", "pump.step_rad", "pump.edge_um", "pump.grid_points", "pump.grid_span_waists",
      "collection.mode", "collection.Ws_um", "collection.Bf_nm",
      "grid.span_nm", "grid.points",
      "engine.name", "engine.order", "engine.printed_slope",
      "scan.peak_rate_hz", "scan.accidental_rate_hz", "scan.integration_s",
      "sweep.W0_min_um", "sweep.W0_max_um", "sweep.points", "sweep.Ws_um", "sweep.dLp_target_nm",
      "inverse.target", "inverse.qx_waist_um", "inverse.grid_points", "inverse.engine",
      "camera.focal_length_mm", "camera.pixel_pitch_um"};
  return k;
}

inline double number(const boost::property_tree::ptree& pt, const std::string& key, double fallback) {
  const auto v = pt.get_optional<std::string>(key);
  if (!v) return fallback;
  double out;
  if (*v == "inf") return std::numeric_limits<double>::infinity();
  if (!io::parse_number(*v, out)) throw Error(ErrorKind::ConfigError, key + ": '" + *v + "' is not a number");
  return out;
}

inline std::optional<double> optional_number(const boost::property_tree::ptree& pt, const std::string& key) {
  const auto v = pt.get_optional<std::string>(key);
  if (!v || v->empty() || *v == "none") return std::nullopt;
  return number(pt, key, 0.0);
}

inline std::size_t count(const boost::property_tree::ptree& pt, const std::string& key, std::size_t fallback) {
  const double v = number(pt, key, static_cast<double>(fallback));
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e7) throw Error(ErrorKind::ConfigError, key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

inline bool flag(const boost::property_tree::ptree& pt, const std::string& key, bool fallback) {
  const auto v = pt.get_optional<std::string>(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw Error(ErrorKind::ConfigError, key + " must be true or false");
}

}  // namespace detail

/// Parses a configuration; `warnings` collects unknown keys.
inline RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {},
                                  std::vector<std::string>* warnings = nullptr) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    for (const auto& [key, value] : body) {
      if (!detail::known_keys().count(section + "." + key) && warnings) {
        warnings->push_back("unknown config key " + section + "." + key);
      }
    }
  }

  using detail::number;
  RunConfig c;
  c.hash = fnv1a(text);
  c.base_dir = base_dir;

  if (const auto f = tree.get_optional<std::string>("crystal.index_file")) {
    c.index = load_index_model(c.resolve(*f).string());
  } else {
    c.index = builtin_index_model(tree.get<std::string>("crystal.material", "LiIO3"));
  }
  c.length = number(tree, "crystal.L_mm", 1.0) * 1e-3;
  const std::string phi = tree.get<std::string>("crystal.phi_deg", "auto");
  if (phi != "auto") c.phi = deg_to_rad(number(tree, "crystal.phi_deg", 0.0));

  c.pump_wavelength = number(tree, "pump.lambda_nm", 405.0) * kMetersPerNm;
  c.pump_dlambda = number(tree, "pump.dlambda_nm", 0.4) * kMetersPerNm;
  const std::string conv = tree.get<std::string>("pump.bandwidth_convention", "std");
  if (conv == "std") {
    c.convention = WidthConvention::std_dev;
  } else if (conv == "fwhm") {
    c.convention = WidthConvention::fwhm;
  } else {
    throw Error(ErrorKind::ConfigError, "pump.bandwidth_convention must be std or fwhm");
  }
  c.profile = tree.get<std::string>("pump.profile", "gaussian");
  c.pump_waist = number(tree, "pump.W0_um", 30.0) * kMetersPerUm;
  c.charge = static_cast<int>(number(tree, "pump.charge", 2.0));
  c.step = number(tree, "pump.step_rad", kPi);
  c.edge = number(tree, "pump.edge_um", 0.0) * kMetersPerUm;
  c.pump_grid_points = detail::count(tree, "pump.grid_points", 512);
  c.pump_grid_span_waists = number(tree, "pump.grid_span_waists", 48.0);

  const std::string mode = tree.get<std::string>("collection.mode", "gaussian");
  if (mode != "gaussian" && mode != "large_area") {
    throw Error(ErrorKind::ConfigError, "collection.mode must be gaussian or large_area");
  }
  c.large_area = mode == "large_area";
  c.collection_waist = number(tree, "collection.Ws_um", 133.48) * kMetersPerUm;
  if (const auto bf = detail::optional_number(tree, "collection.Bf_nm")) c.filter_nm = *bf;

  c.span_nm = number(tree, "grid.span_nm", 8.0);
  c.points = detail::count(tree, "grid.points", 64);

  c.engine = parse_engine(tree.get<std::string>("engine.name", "gaussian"));
  c.order = detail::count(tree, "engine.order", 24);
  c.printed_slope = detail::flag(tree, "engine.printed_slope", false);

  c.peak_rate = number(tree, "scan.peak_rate_hz", 1.0);
  c.accidental_rate = number(tree, "scan.accidental_rate_hz", 0.0);
  c.integration_s = number(tree, "scan.integration_s", 200.0);

  c.sweep_w0_min = number(tree, "sweep.W0_min_um", 1.0) * kMetersPerUm;
  c.sweep_w0_max = number(tree, "sweep.W0_max_um", 5000.0) * kMetersPerUm;
  c.sweep_points = detail::count(tree, "sweep.points", 200);
  if (const auto ws = tree.get_optional<std::string>("sweep.Ws_um")) {
    c.sweep_ws.clear();
    std::stringstream ss(*ws);
    std::string item;
    while (std::getline(ss, item, ',')) {
      while (!item.empty() && item.front() == ' ') item.erase(item.begin());
      while (!item.empty() && item.back() == ' ') item.pop_back();
      if (item.empty()) continue;
      double v;
      if (item == "inf") {
        v = std::numeric_limits<double>::infinity();
      } else if (!io::parse_number(item, v)) {
        throw Error(ErrorKind::ConfigError, "sweep.Ws_um: '" + item + "' is not a number");
      } else {
        v *= kMetersPerUm;
      }
      c.sweep_ws.push_back(v);
    }
  }
  c.sweep_plus_target_nm = detail::optional_number(tree, "sweep.dLp_target_nm");

  c.target_path = tree.get<std::string>("inverse.target", "");
  if (const auto q = detail::optional_number(tree, "inverse.qx_waist_um")) c.qx_waist = *q * kMetersPerUm;
  c.inverse_grid_points = detail::count(tree, "inverse.grid_points", 512);
  c.inverse_engine = tree.get<std::string>("inverse.engine", "mapped");

  if (const auto f = detail::optional_number(tree, "camera.focal_length_mm")) c.focal_length = *f * 1e-3;
  c.pixel_pitch = number(tree, "camera.pixel_pitch_um", 5.0) * kMetersPerUm;

  // Basic sanity; deeper checks happen in the engines.
  if (!(c.length > 0.0)) throw Error(ErrorKind::ConfigError, "crystal.L_mm must be positive");
  if (!(c.pump_wavelength > 0.0) || !(c.pump_dlambda > 0.0)) {
    throw Error(ErrorKind::ConfigError, "pump.lambda_nm and pump.dlambda_nm must be positive");
  }
  if (!(c.pump_waist > 0.0)) throw Error(ErrorKind::ConfigError, "pump.W0_um must be positive");
  if (!c.large_area && !(c.collection_waist > 0.0)) throw Error(ErrorKind::ConfigError, "collection.Ws_um must be positive");
  if (c.filter_nm && !(*c.filter_nm > 0.0)) throw Error(ErrorKind::ConfigError, "collection.Bf_nm must be positive");
  if (!(c.span_nm > 0.0) || c.points < 2) throw Error(ErrorKind::ConfigError, "grid needs span_nm > 0 and points >= 2");
  if (c.integration_s <= 0.0 || c.peak_rate < 0.0 || c.accidental_rate < 0.0) {
    throw Error(ErrorKind::ConfigError, "scan rates must be >= 0 and integration_s > 0");
  }
  if (!(c.sweep_w0_max > c.sweep_w0_min) || !(c.sweep_w0_min > 0.0) || c.sweep_points < 2) {
    throw Error(ErrorKind::ConfigError, "sweep needs 0 < W0_min_um < W0_max_um and points >= 2");
  }
  if (c.sweep_ws.empty()) throw Error(ErrorKind::ConfigError, "sweep.Ws_um list is empty");
  if (c.inverse_engine != "mapped" && c.inverse_engine != "numeric") {
    throw Error(ErrorKind::ConfigError, "inverse.engine must be mapped or numeric");
  }
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return parse_run_config(text, path.parent_path(), warnings);
}

}  // namespace spdc
