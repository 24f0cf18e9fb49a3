#pragma once

// File formats: joint spectra, pump fields, scans, sweeps, width reports and
// inverse-design targets. Numbers are written in shortest round-trip form
// with a '.' decimal point regardless of locale.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spdcshape/analysis.hpp"
#include "spdcshape/biphoton.hpp"
#include "spdcshape/errors.hpp"
#include "spdcshape/experiment.hpp"
#include "spdcshape/inverse.hpp"
#include "spdcshape/pump.hpp"

namespace spdc::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

inline std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt(std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

inline bool parse_number(std::string_view s, std::uint64_t& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

/// Writes through a temporary file in the same directory, then renames.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot move output into place at " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Joint spectrum

inline std::string joint_spectrum_csv(const JointSpectrum& s) {
  std::string out = "lambda_s_nm,lambda_i_nm,value\n";
  for (std::size_t a = 0; a < s.ns(); ++a)
    for (std::size_t b = 0; b < s.ni(); ++b) {
      out += fmt(s.lambda_s[a]);
      out += ',';
      out += fmt(s.lambda_i[b]);
      out += ',';
      out += fmt(s.at(a, b));
      out += '\n';
    }
  return out;
}

namespace detail {

template <class T>
void put(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw Error(ErrorKind::SchemaError, "binary file truncated");
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string_view bytes(std::size_t n) {
    if (pos_ + n > data_.size()) throw Error(ErrorKind::SchemaError, "binary file truncated");
    const auto v = data_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline constexpr std::string_view kSpectrumMagic = "SPDCJS01";
inline constexpr std::string_view kFieldMagic = "SPDCFLD1";

/// Layout: magic[8], u64 ns, u64 ni, f64 signal center (m), u8 normalization,
/// u64 config hash, u64 engine length, engine bytes, f64 lambda_s[ns],
/// f64 lambda_i[ni], f64 values[ns*ni]; little-endian.
inline std::string joint_spectrum_binary(const JointSpectrum& s) {
  std::string out(kSpectrumMagic);
  detail::put<std::uint64_t>(out, s.ns());
  detail::put<std::uint64_t>(out, s.ni());
  detail::put<double>(out, s.signal_center_wavelength);
  detail::put<std::uint8_t>(out, s.normalization == Normalization::peak ? 0 : 1);
  detail::put<std::uint64_t>(out, s.config_hash);
  detail::put<std::uint64_t>(out, s.engine.size());
  out += s.engine;
  for (double v : s.lambda_s) detail::put(out, v);
  for (double v : s.lambda_i) detail::put(out, v);
  for (double v : s.values) detail::put(out, v);
  return out;
}

inline JointSpectrum parse_joint_spectrum_binary(std::string_view data) {
  detail::Reader r(data);
  if (r.bytes(8) != kSpectrumMagic) throw Error(ErrorKind::SchemaError, "not a joint-spectrum file");
  JointSpectrum s;
  const auto ns = r.get<std::uint64_t>();
  const auto ni = r.get<std::uint64_t>();
  if (ns > (1u << 20) || ni > (1u << 20)) throw Error(ErrorKind::SchemaError, "implausible grid size");
  s.signal_center_wavelength = r.get<double>();
  s.normalization = r.get<std::uint8_t>() == 0 ? Normalization::peak : Normalization::sum;
  s.config_hash = r.get<std::uint64_t>();
  s.engine = std::string(r.bytes(r.get<std::uint64_t>()));
  s.lambda_s.resize(ns);
  s.lambda_i.resize(ni);
  s.values.resize(ns * ni);
  for (auto& v : s.lambda_s) v = r.get<double>();
  for (auto& v : s.lambda_i) v = r.get<double>();
  for (auto& v : s.values) v = r.get<double>();
  if (!r.done()) throw Error(ErrorKind::SchemaError, "trailing bytes in joint-spectrum file");
  return s;
}

inline JointSpectrum parse_joint_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"lambda_s_nm", "lambda_i_nm", "value"}) {
    throw Error(ErrorKind::SchemaError, "line 1: expected header lambda_s_nm,lambda_i_nm,value");
  }
  std::vector<double> ls, li, vals;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    double a, b, v;
    if (f.size() != 3 || !parse_number(f[0], a) || !parse_number(f[1], b) || !parse_number(f[2], v)) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(row) + ": malformed joint-spectrum row");
    }
    if (ls.empty() || ls.back() != a) ls.push_back(a);
    if (ls.size() == 1) li.push_back(b);
    vals.push_back(v);
  }
  JointSpectrum s;
  s.lambda_s = ls;
  s.lambda_i = li;
  s.values = vals;
  if (vals.size() != ls.size() * li.size()) throw Error(ErrorKind::SchemaError, "joint-spectrum rows do not form a grid");
  return s;
}

// ---------------------------------------------------------------------------
// Pump field

inline std::string field_csv(const SampledField& f) {
  std::string out = "x_m,y_m,re,im\n";
  const std::size_t n = f.grid.n;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const cplx v = f.at(ix, iy);
      out += fmt(f.grid.coordinate(ix)) + ',' + fmt(f.grid.coordinate(iy)) + ',' + fmt(v.real()) + ',' +
             fmt(v.imag()) + '\n';
    }
  return out;
}

/// Layout: magic[8], u64 n, f64 spacing (m), then n*n (re, im) pairs, y slow.
inline std::string field_binary(const SampledField& f) {
  std::string out(kFieldMagic);
  detail::put<std::uint64_t>(out, f.grid.n);
  detail::put<double>(out, f.grid.spacing);
  for (const cplx& v : f.values) {
    detail::put(out, v.real());
    detail::put(out, v.imag());
  }
  return out;
}

inline SampledField parse_field_binary(std::string_view data) {
  detail::Reader r(data);
  if (r.bytes(8) != kFieldMagic) throw Error(ErrorKind::SchemaError, "not a pump-field file");
  SampledField f;
  f.grid.n = r.get<std::uint64_t>();
  if (f.grid.n > (1u << 14)) throw Error(ErrorKind::SchemaError, "implausible field size");
  f.grid.spacing = r.get<double>();
  f.values.resize(f.grid.n * f.grid.n);
  for (auto& v : f.values) {
    const double re = r.get<double>();
    v = {re, r.get<double>()};
  }
  if (!r.done()) throw Error(ErrorKind::SchemaError, "trailing bytes in pump-field file");
  return f;
}

// ---------------------------------------------------------------------------
// Scans

inline constexpr const char* kScanColumns[] = {"lambda_s_nm", "lambda_i_nm", "counts", "integration_s"};

inline std::string scan_csv(const ScanData& d) {
  std::string out = "lambda_s_nm,lambda_i_nm,counts,integration_s";
  for (const auto& c : d.extra_columns) out += ',' + c;
  out += '\n';
  for (std::size_t a = 0; a < d.ns(); ++a)
    for (std::size_t b = 0; b < d.ni(); ++b) {
      const std::size_t k = a * d.ni() + b;
      out += fmt(d.lambda_s_nm[a]) + ',' + fmt(d.lambda_i_nm[b]) + ',' + fmt(d.counts[k]) + ',' + fmt(d.integration_s);
      if (!d.extra_columns.empty()) {
        for (const auto& v : d.extra_values[k]) out += ',' + v;
      }
      out += '\n';
    }
  return out;
}

/// Parses the scan schema. Rows must enumerate a full grid with the signal
/// wavelength as the slow index. Unknown columns are kept with a warning.
inline ScanData parse_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::SchemaError, "line 1: empty scan file");
  const auto header = split_csv(line);
  int col[4] = {-1, -1, -1, -1};
  std::vector<int> extra_idx;
  ScanData d;
  for (std::size_t j = 0; j < header.size(); ++j) {
    bool known = false;
    for (int c = 0; c < 4; ++c) {
      if (header[j] == kScanColumns[c]) {
        if (col[c] >= 0) throw Error(ErrorKind::SchemaError, "line 1: duplicate column " + header[j]);
        col[c] = static_cast<int>(j);
        known = true;
      }
    }
    if (!known) {
      extra_idx.push_back(static_cast<int>(j));
      d.extra_columns.push_back(header[j]);
      d.warnings.push_back("unknown column '" + header[j] + "' preserved");
    }
  }
  for (int c = 0; c < 4; ++c) {
    if (col[c] < 0) throw Error(ErrorKind::SchemaError, std::string("line 1: missing column ") + kScanColumns[c]);
  }

  std::vector<double> ls_rows, li_rows;
  std::size_t row = 1;
  bool have_t = false;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    const std::string where = "line " + std::to_string(row);
    if (f.size() != header.size()) {
      throw Error(ErrorKind::SchemaError, where + ": expected " + std::to_string(header.size()) + " fields, got " +
                                              std::to_string(f.size()));
    }
    double a, b, t;
    std::uint64_t c;
    if (!parse_number(f[col[0]], a) || !parse_number(f[col[1]], b)) {
      throw Error(ErrorKind::SchemaError, where + ": wavelength is not a number");
    }
    if (!parse_number(f[col[2]], c)) throw Error(ErrorKind::SchemaError, where + ": counts must be a nonnegative integer");
    if (!parse_number(f[col[3]], t) || !(t > 0.0)) {
      throw Error(ErrorKind::SchemaError, where + ": integration_s must be a positive number");
    }
    if (have_t && t != d.integration_s) {
      throw Error(ErrorKind::SchemaError, where + ": integration_s differs from earlier rows");
    }
    d.integration_s = t;
    have_t = true;
    ls_rows.push_back(a);
    li_rows.push_back(b);
    d.counts.push_back(c);
    if (!extra_idx.empty()) {
      std::vector<std::string> ex;
      for (int j : extra_idx) ex.push_back(f[j]);
      d.extra_values.push_back(std::move(ex));
    }
  }
  if (d.counts.empty()) throw Error(ErrorKind::SchemaError, "scan has no data rows");

  // Recover the axes from the row order.
  std::size_t ni = 1;
  while (ni < ls_rows.size() && ls_rows[ni] == ls_rows[0]) ++ni;
  if (d.counts.size() % ni != 0) throw Error(ErrorKind::SchemaError, "rows do not form a full grid");
  const std::size_t ns = d.counts.size() / ni;
  for (std::size_t a = 0; a < ns; ++a) d.lambda_s_nm.push_back(ls_rows[a * ni]);
  for (std::size_t b = 0; b < ni; ++b) d.lambda_i_nm.push_back(li_rows[b]);
  for (std::size_t k = 0; k < d.counts.size(); ++k) {
    if (ls_rows[k] != d.lambda_s_nm[k / ni] || li_rows[k] != d.lambda_i_nm[k % ni]) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(k + 2) + ": row breaks the grid order");
    }
  }
  return d;
}

inline ScanData load_scan(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_scan_csv(in);
}

inline void save_scan(const ScanData& d, const std::filesystem::path& path) { atomic_write(path, scan_csv(d)); }

// ---------------------------------------------------------------------------
// Sweeps, reports, curves, targets

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = "W0_um,Ws_um,dLp_nm,dLm_nm\n";
  for (const auto& c : r.curves)
    for (std::size_t i = 0; i < r.pump_waists.size(); ++i) {
      out += fmt(r.pump_waists[i] / kMetersPerUm) + ',' +
             (std::isinf(c.collection_waist) ? std::string("inf") : fmt(c.collection_waist / kMetersPerUm)) + ',' +
             fmt(c.delta_lambda_plus[i]) + ',' + fmt(c.delta_lambda_minus[i]) + '\n';
    }
  return out;
}

inline std::string width_report_text(const WidthReport& r) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + '\n'; };
  kv("method", to_string(r.method));
  kv("delta_lambda_plus_nm", fmt(r.delta_lambda_plus));
  kv("delta_lambda_minus_nm", fmt(r.delta_lambda_minus));
  kv("center_s_nm", fmt(r.center_s));
  kv("center_i_nm", fmt(r.center_i));
  kv("fit_residual", fmt(r.fit_residual));
  kv("classification", to_string(r.classification));
  kv("classification_tolerance", fmt(r.tolerance));
  if (r.method == WidthMethod::gaussian_fit) {
    kv("amplitude", fmt(r.amplitude));
    kv("background", fmt(r.background));
    kv("sigma_delta_lambda_plus_nm", fmt(r.sigma_plus));
    kv("sigma_delta_lambda_minus_nm", fmt(r.sigma_minus));
    kv("iterations", fmt(static_cast<std::uint64_t>(r.iterations)));
    kv("converged", r.converged ? "true" : "false");
    kv("warning", r.warning ? "residual above 20% of peak" : "none");
  }
  return out;
}

inline std::string curves_csv(const std::vector<std::string>& names, const std::vector<double>& x,
                              const std::vector<std::vector<double>>& ys) {
  std::string out;
  for (std::size_t j = 0; j < names.size(); ++j) out += (j ? "," : "") + names[j];
  out += '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += fmt(x[i]);
    for (const auto& y : ys) out += ',' + fmt(y[i]);
    out += '\n';
  }
  return out;
}

inline TargetWaveform parse_target_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::SchemaError, "line 1: empty target file");
  const auto h = split_csv(line);
  const bool with_phase = h.size() == 3 && h[2] == "phase_rad";
  if (h.size() < 2 || h[0] != "lambda_minus_nm" || h[1] != "amplitude" || (h.size() == 3 && !with_phase) ||
      h.size() > 3) {
    throw Error(ErrorKind::SchemaError, "line 1: expected header lambda_minus_nm,amplitude[,phase_rad]");
  }
  TargetWaveform t;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    double x, a, p = 0.0;
    if (f.size() != h.size() || !parse_number(f[0], x) || !parse_number(f[1], a) ||
        (with_phase && !parse_number(f[2], p))) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(row) + ": malformed target row");
    }
    if (a < 0.0) throw Error(ErrorKind::SchemaError, "line " + std::to_string(row) + ": amplitude must be >= 0");
    t.lambda_minus_nm.push_back(x);
    t.amplitude.push_back(a);
    if (with_phase) t.phase.push_back(p);
  }
  return t;
}

inline TargetWaveform load_target(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_target_csv(in);
}

inline std::string target_csv(const TargetWaveform& t) {
  std::string out = t.phase.empty() ? "lambda_minus_nm,amplitude\n" : "lambda_minus_nm,amplitude,phase_rad\n";
  for (std::size_t k = 0; k < t.lambda_minus_nm.size(); ++k) {
    out += fmt(t.lambda_minus_nm[k]) + ',' + fmt(t.amplitude[k]);
    if (!t.phase.empty()) out += ',' + fmt(t.phase[k]);
    out += '\n';
  }
  return out;
}

}  // namespace spdc::io
