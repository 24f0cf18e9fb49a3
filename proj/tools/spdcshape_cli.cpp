// spdcshape-cli: configuration-driven front end writing CSV tables and SVG figures.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spdcshape/spdcshape.hpp"

namespace fs = std::filesystem;
using namespace spdc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::string engine;  // empty: take it from the config
  bool quiet = false;
};

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::IoError:
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownModel:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

class Run {
 public:
  explicit Run(const Globals& g) : g_(g) {
    std::string path = g.config_path;
    if (path.empty()) {
      if (const char* env = std::getenv("SPDCSHAPE_CONFIG")) path = env;
    }
    std::vector<std::string> warnings;
    if (path.empty()) {
      cfg_ = parse_run_config("", {}, &warnings);
      log("no config given; using built-in defaults");
    } else {
      cfg_ = load_run_config(path, &warnings);
      log("config " + path);
    }
    for (const auto& w : warnings) log("warning: " + w);
    if (!g.engine.empty()) cfg_.engine = parse_engine(g.engine);
    out_ = g.out_dir;
  }

  const RunConfig& cfg() const { return cfg_; }

  void log(const std::string& s) const {
    if (!g_.quiet) std::cerr << s << '\n';
  }

  void write(const std::string& name, const std::string& content) const {
    io::atomic_write(out_ / name, content);
    log("wrote " + (out_ / name).string());
  }

  std::uint64_t seed() const { return g_.seed; }

 private:
  Globals g_;
  RunConfig cfg_;
  fs::path out_;
};

std::string engine_name(EngineChoice e) {
  switch (e) {
    case EngineChoice::numeric: return "numeric";
    case EngineChoice::mapped: return "mapped";
    case EngineChoice::gaussian: return "gaussian";
    case EngineChoice::all: return "all";
  }
  return "?";
}

JointSpectrum compute_spectrum(const RunConfig& c, EngineChoice e) {
  const CrystalConfig crystal = c.crystal();
  JointSpectrum s;
  switch (e) {
    case EngineChoice::gaussian:
      if (c.profile != "gaussian") {
        throw Error(ErrorKind::ConfigError, "the gaussian engine needs pump.profile = gaussian");
      }
      s = joint_spectrum_gaussian(c.gaussian_model(), c.pump_spectrum(), crystal, c.spectral_grid()).spectrum;
      break;
    case EngineChoice::mapped: {
      MappedOptions o;
      o.printed_slope = c.printed_slope;
      s = joint_spectrum_mapped(c.pump_field(), crystal, c.spectral_grid(), o);
      break;
    }
    case EngineChoice::numeric: {
      NumericOptions o;
      o.order = c.order;
      s = joint_spectrum_numeric(c.pump_field(), crystal, c.collection(), c.spectral_grid(), o).spectrum;
      break;
    }
    case EngineChoice::all:
      throw Error(ErrorKind::InvalidArgument, "engine 'all' is resolved by the caller");
  }
  s.config_hash = c.hash;
  return s;
}

std::string label_for(const RunConfig& c, const std::string& engine) {
  return engine + " engine, " + c.profile + " pump, W0 = " + svg::num(c.pump_waist / kMetersPerUm, 1) + " um";
}

int cmd_joint_spectrum(const Run& run) {
  const RunConfig& c = run.cfg();
  std::vector<EngineChoice> engines = {c.engine};
  if (c.engine == EngineChoice::all) engines = {EngineChoice::numeric, EngineChoice::mapped, EngineChoice::gaussian};
  std::map<std::string, JointSpectrum> results;
  for (EngineChoice e : engines) {
    const std::string name = engine_name(e);
    if (e == EngineChoice::gaussian && c.profile != "gaussian") {
      run.log("skipping gaussian engine: closed form needs a Gaussian pump");
      continue;
    }
    JointSpectrum s = compute_spectrum(c, e);
    if (s.offgrid_samples > 0) run.log("warning: " + std::to_string(s.offgrid_samples) + " samples beyond the pump grid");
    const WidthReport r = moment_widths(s);
    run.write("joint_spectrum_" + name + ".csv", io::joint_spectrum_csv(s));
    run.write("joint_spectrum_" + name + ".bin", io::joint_spectrum_binary(s));
    run.write("joint_spectrum_" + name + ".svg", svg::heatmap(s, label_for(c, name)));
    run.write("widths_" + name + ".txt", io::width_report_text(r));
    std::cout << name << ": dLp = " << io::fmt(r.delta_lambda_plus) << " nm, dLm = " << io::fmt(r.delta_lambda_minus)
              << " nm, " << to_string(r.classification) << '\n';
    results.emplace(name, std::move(s));
  }
  if (results.count("mapped") && !c.large_area) {
    run.log("note: the mapped engine assumes large-area collection; compare it with collection.mode = large_area");
  }
  if (results.size() > 1) {
    std::string table = "engine_a,engine_b,relative_l2\n";
    for (auto a = results.begin(); a != results.end(); ++a)
      for (auto b = std::next(a); b != results.end(); ++b) {
        const double l2 = relative_l2(a->second, b->second);
        table += a->first + ',' + b->first + ',' + io::fmt(l2) + '\n';
        std::cout << "L2(" << a->first << ", " << b->first << ") = " << io::fmt(l2) << '\n';
      }
    run.write("engine_l2.csv", table);
  }
  return kExitOk;
}

int cmd_sweep(const Run& run) {
  const RunConfig& c = run.cfg();
  const CrystalConfig crystal = c.crystal();
  PumpSpectrum pump = c.pump_spectrum();
  if (c.sweep_plus_target_nm) {
    pump.bandwidth = pump_bandwidth_for_plus_width(*c.sweep_plus_target_nm, std::numeric_limits<double>::infinity(),
                                                   c.filter_bandwidth(), crystal, c.pump_wavelength);
    run.log("pump bandwidth calibrated to dLp(Ws = inf) = " + io::fmt(*c.sweep_plus_target_nm) + " nm");
  }
  const auto r = sweep_waist(log_space(c.sweep_w0_min, c.sweep_w0_max, c.sweep_points), c.sweep_ws, pump,
                             c.filter_bandwidth(), crystal);
  run.write("sweep.csv", io::sweep_csv(r));

  std::vector<double> w_um;
  for (double w : r.pump_waists) w_um.push_back(w / kMetersPerUm);
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::vector<svg::Series> series;
  std::string crossings = "Ws_um,crossing_W0_um\n";
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    const auto& cv = r.curves[k];
    const std::string ws = std::isinf(cv.collection_waist) ? "inf" : io::fmt(cv.collection_waist / kMetersPerUm);
    const std::string color = colors[k % 6];
    series.push_back({"dLm, Ws = " + ws + " um", w_um, cv.delta_lambda_minus, color, false});
    series.push_back({"dLp, Ws = " + ws + " um", w_um, cv.delta_lambda_plus, color, true});
    crossings += ws + ',' + (cv.crossing_waist ? io::fmt(*cv.crossing_waist / kMetersPerUm) : std::string("none")) + '\n';
    std::cout << "Ws = " << ws << " um: asymptotic dLm = " << io::fmt(cv.delta_lambda_minus.back())
              << " nm, crossing " << (cv.crossing_waist ? "at W0 = " + io::fmt(*cv.crossing_waist / kMetersPerUm) + " um" : "none")
              << '\n';
  }
  run.write("sweep_crossings.csv", crossings);
  run.write("sweep.svg", svg::line_plot(series, "Bandwidths versus pump waist", "W0 (um)", "width (nm)", true));
  return kExitOk;
}

int cmd_fit(const Run& run, const std::string& scan_path, const std::string& method, const std::string& weighting) {
  const RunConfig& c = run.cfg();
  const ScanData scan = io::load_scan(scan_path);
  for (const auto& w : scan.warnings) run.log("warning: " + w);
  JointSpectrum s = scan_to_surface(scan);
  s.config_hash = c.hash;
  WidthReport r;
  if (method == "moments") {
    r = moment_widths(s);
  } else {
    FitOptions o;
    if (weighting == "uniform") {
      o.weighting = FitWeighting::uniform;
    } else if (weighting == "counts") {
      o.weighting = FitWeighting::poisson_counts;
    } else {
      o.weighting = FitWeighting::poisson_model;
    }
    r = gaussian_fit_2d(s, o);
    if (r.warning) run.log("warning: fit residual above 20% of peak; the surface may not be Gaussian");
  }
  run.write("widths_fit.txt", io::width_report_text(r));
  run.write("scan.svg", svg::heatmap(s, "Coincidence counts"));
  std::cout << "dLp = " << io::fmt(r.delta_lambda_plus) << " nm";
  if (r.method == WidthMethod::gaussian_fit) std::cout << " +- " << io::fmt(r.sigma_plus);
  std::cout << ", dLm = " << io::fmt(r.delta_lambda_minus) << " nm";
  if (r.method == WidthMethod::gaussian_fit) std::cout << " +- " << io::fmt(r.sigma_minus);
  std::cout << ", " << to_string(r.classification) << '\n';
  return kExitOk;
}

int cmd_simulate_scan(const Run& run) {
  const RunConfig& c = run.cfg();
  if (c.engine == EngineChoice::all) throw Error(ErrorKind::ConfigError, "simulate-scan needs a single engine");
  const JointSpectrum s = compute_spectrum(c, c.engine);
  const ScanData d = simulate_scan(s, {c.peak_rate, c.accidental_rate, c.integration_s}, run.seed());
  run.write("scan.csv", io::scan_csv(d));
  run.write("scan.svg", svg::heatmap(scan_to_surface(d), "Simulated coincidences, seed " + std::to_string(run.seed())));
  std::uint64_t total = 0;
  for (auto n : d.counts) total += n;
  std::cout << "total counts = " << total << '\n';
  return kExitOk;
}

int cmd_inverse(const Run& run, std::string target_path) {
  const RunConfig& c = run.cfg();
  if (target_path.empty()) {
    if (c.target_path.empty()) throw Error(ErrorKind::ConfigError, "no target: set inverse.target or pass --target");
    target_path = c.resolve(c.target_path).string();
  }
  const TargetWaveform target = io::load_target(target_path);
  InverseOptions o;
  o.grid_points = c.inverse_grid_points;
  o.qx_waist = c.qx_waist;
  const auto engine = c.inverse_engine == "numeric" ? RoundtripEngine::numeric_large_area : RoundtripEngine::mapped;
  const RoundtripReport r = roundtrip_report(target, c.crystal(), c.pump_spectrum(), o, engine);
  const PumpDesign& d = r.design;

  run.write("pump_field.bin", io::field_binary(d.field));
  std::string slice = "q_y_per_m,re,im\n";
  for (std::size_t k = 0; k < d.slice.qy.size(); ++k) {
    slice += io::fmt(d.slice.qy[k]) + ',' + io::fmt(d.slice.values[k].real()) + ',' + io::fmt(d.slice.values[k].imag()) + '\n';
  }
  run.write("pump_slice.csv", slice);

  // Recompute the forward marginal on the target's own nodes for the figure.
  PumpField pump{c.pump_spectrum(), momentum_distribution(d.field), std::nullopt};
  const double reach = std::max(std::abs(target.lambda_minus_nm.front()), std::abs(target.lambda_minus_nm.back()));
  const Curve slice_curve = pump_slice_curve(pump, c.crystal(), target.lambda_minus_nm);
  double peak_t = 0.0, peak_s = 0.0;
  for (double v : target.amplitude) peak_t = std::max(peak_t, v);
  for (double v : slice_curve.y) peak_s = std::max(peak_s, v);
  std::vector<double> tn, sn;
  for (double v : target.amplitude) tn.push_back(v / peak_t);
  for (double v : slice_curve.y) sn.push_back(v / peak_s);
  run.write("roundtrip.csv", io::curves_csv({"lambda_minus_nm", "target", "designed_slice"}, target.lambda_minus_nm, {tn, sn}));
  run.write("roundtrip.svg", svg::line_plot({{"target", target.lambda_minus_nm, tn, "#1f77b4", false},
                                             {"designed pump slice", target.lambda_minus_nm, sn, "#d62728", true}},
                                            "Target versus designed pump", "Lambda_- (nm)", "normalized"));
  std::string report;
  report += "engine = " + c.inverse_engine + '\n';
  report += "roundtrip_l2 = " + io::fmt(r.l2) + '\n';
  report += "roundtrip_max_abs = " + io::fmt(r.max_abs) + '\n';
  report += "offgrid_samples = " + io::fmt(static_cast<std::uint64_t>(r.offgrid_samples)) + '\n';
  report += "qx_waist_um = " + io::fmt(d.qx_waist / kMetersPerUm) + '\n';
  report += "grid_points = " + io::fmt(static_cast<std::uint64_t>(d.field.grid.n)) + '\n';
  report += "grid_spacing_um = " + io::fmt(d.field.grid.spacing / kMetersPerUm) + '\n';
  report += "target_reach_nm = " + io::fmt(reach) + '\n';
  run.write("roundtrip.txt", report);
  std::cout << "round-trip L2 = " << io::fmt(r.l2) << '\n';
  return kExitOk;
}

int cmd_map_check(const Run& run) {
  const RunConfig& c = run.cfg();
  const CrystalConfig crystal = c.crystal();
  const PumpField pump = c.pump_field();
  JointSpectrum s;
  if (c.engine == EngineChoice::numeric) {
    NumericOptions o;
    o.order = c.order;
    s = joint_spectrum_numeric(pump, crystal, CollectionMode::large_area(c.filter_bandwidth()), c.spectral_grid(), o).spectrum;
  } else {
    MappedOptions o;
    o.printed_slope = c.printed_slope;
    s = joint_spectrum_mapped(pump, crystal, c.spectral_grid(), o);
  }
  const Curve marginal = marginal_curve(s);
  const Curve slice = pump_slice_curve(pump, crystal, marginal.x);
  const OverlayReport r = overlay_compare(slice, marginal);

  double ps = 0.0, pm = 0.0;
  for (double v : slice.y) ps = std::max(ps, v);
  for (double v : marginal.y) pm = std::max(pm, v);
  std::vector<double> sn, mn;
  for (double v : slice.y) sn.push_back(v / ps);
  for (double v : marginal.y) mn.push_back(v / pm);
  std::vector<std::string> names = {"lambda_minus_nm", "pump_slice", "marginal"};
  std::vector<std::vector<double>> cols = {sn, mn};
  if (c.focal_length) {
    const auto d = CentralDispersion::of(crystal, c.pump_wavelength);
    const CameraGeometry cam{*c.focal_length, c.pixel_pitch, d.ns, d.phi, angular_frequency(2.0 * c.pump_wavelength)};
    cam.validate();
    std::vector<double> y_mm;
    for (double l : marginal.x) y_mm.push_back(lambda_to_camera(l, cam) * 1e3);
    names.push_back("camera_y_mm");
    cols.push_back(y_mm);
  }
  run.write("map_check.csv", io::curves_csv(names, marginal.x, cols));
  run.write("map_check.svg", svg::line_plot({{"pump momentum slice", marginal.x, sn, "#1f77b4", false},
                                             {"joint-spectrum marginal", marginal.x, mn, "#d62728", true}},
                                            "Spatial-to-spectral mapping", "Lambda_- (nm)", "normalized"));
  std::string report = "engine = " + std::string(c.engine == EngineChoice::numeric ? "numeric" : "mapped") + '\n';
  report += "l2 = " + io::fmt(r.l2) + '\n';
  report += "max_abs = " + io::fmt(r.max_abs) + '\n';
  report += "dip_depth = " + io::fmt(r.dip_depth) + '\n';
  report += "points = " + io::fmt(static_cast<std::uint64_t>(r.points)) + '\n';
  run.write("map_check.txt", report);
  run.write("map_check_spectrum.svg", svg::heatmap(s, label_for(c, s.engine)));
  std::cout << "L2 = " << io::fmt(r.l2) << ", dip depth = " << io::fmt(r.dip_depth) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint-spectrum toolkit for noncollinear type-I photon pairs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration (default: $SPDCSHAPE_CONFIG, else built-in)");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed for simulated scans")->capture_default_str();
  app.add_option("--engine", g.engine, "Engine override")->check(CLI::IsMember({"numeric", "mapped", "gaussian", "all"}));
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress messages");

  auto* js = app.add_subcommand("joint-spectrum", "Joint spectrum CSV, SVG heatmap and width report");
  auto* sw = app.add_subcommand("sweep", "Bandwidths versus pump waist for each collection waist");
  auto* fit = app.add_subcommand("fit", "Width report from a measured or simulated scan");
  std::string scan_path, method = "gaussian", weighting = "model";
  fit->add_option("scan", scan_path, "Scan CSV")->required();
  fit->add_option("--method", method, "gaussian or moments")->check(CLI::IsMember({"gaussian", "moments"}))->capture_default_str();
  fit->add_option("--weighting", weighting, "model, counts or uniform")
      ->check(CLI::IsMember({"model", "counts", "uniform"}))
      ->capture_default_str();
  auto* sim = app.add_subcommand("simulate-scan", "Poisson-sampled coincidence scan");
  auto* inv = app.add_subcommand("inverse", "Pump design for a target Lambda_- waveform");
  std::string target_path;
  inv->add_option("--target", target_path, "Target CSV (overrides inverse.target)");
  auto* mc = app.add_subcommand("map-check", "Pump momentum slice versus joint-spectrum marginal");
  for (auto* s : {js, sw, fit, sim, inv, mc}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Run run(g);
    if (js->parsed()) return cmd_joint_spectrum(run);
    if (sw->parsed()) return cmd_sweep(run);
    if (fit->parsed()) return cmd_fit(run, scan_path, method, weighting);
    if (sim->parsed()) return cmd_simulate_scan(run);
    if (inv->parsed()) return cmd_inverse(run, target_path);
    if (mc->parsed()) return cmd_map_check(run);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
