#pragma once

// Width extraction along the rotated Lambda_+ / Lambda_- axes, correlation
// classification and pump-waist sweeps of the closed-form bandwidths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "spdcshape/biphoton.hpp"
#include "spdcshape/errors.hpp"

namespace spdc {

enum class WidthMethod { moments, gaussian_fit };
enum class Correlation { correlated, anticorrelated, uncorrelated };

inline std::string to_string(WidthMethod m) { return m == WidthMethod::moments ? "moments" : "gaussian_fit"; }
inline std::string to_string(Correlation c) {
  switch (c) {
    case Correlation::correlated: return "correlated";
    case Correlation::anticorrelated: return "anticorrelated";
    case Correlation::uncorrelated: return "uncorrelated";
  }
  return "unknown";
}

/// Widths are intensity standard deviations of Lambda_+ and Lambda_- (nm).
struct WidthReport {
  double delta_lambda_plus = 0.0;
  double delta_lambda_minus = 0.0;
  double center_s = 0.0;  // nm
  double center_i = 0.0;  // nm
  double fit_residual = 0.0;  // RMS residual / peak
  WidthMethod method = WidthMethod::moments;
  Correlation classification = Correlation::uncorrelated;
  double tolerance = 0.1;

  // Filled by the Gaussian fit.
  double amplitude = 0.0;
  double background = 0.0;
  double sigma_plus = 0.0;   // 1-sigma statistical error of delta_lambda_plus
  double sigma_minus = 0.0;  // 1-sigma statistical error of delta_lambda_minus
  std::size_t iterations = 0;
  bool converged = false;
  bool warning = false;  // residual RMS above 20% of peak
};

/// Frequency-correlation type from the two widths.
inline Correlation classify(double dl_plus, double dl_minus, double relative_tolerance = 0.1) {
  if (std::abs(dl_plus - dl_minus) <= relative_tolerance * std::max(dl_plus, dl_minus)) return Correlation::uncorrelated;
  return dl_minus > dl_plus ? Correlation::anticorrelated : Correlation::correlated;
}

inline Correlation classify(const WidthReport& r, double relative_tolerance = 0.1) {
  return classify(r.delta_lambda_plus, r.delta_lambda_minus, relative_tolerance);
}

/// Second central moments of S along Lambda_+ and Lambda_-.
inline WidthReport moment_widths(const JointSpectrum& s, double classify_tolerance = 0.1) {
  double mass = 0.0, ms = 0.0, mi = 0.0;
  for (std::size_t a = 0; a < s.ns(); ++a)
    for (std::size_t b = 0; b < s.ni(); ++b) {
      const double w = s.at(a, b);
      mass += w;
      ms += w * s.lambda_s[a];
      mi += w * s.lambda_i[b];
    }
  if (!(mass >= 1e-12) || !std::isfinite(mass)) {
    throw Error(ErrorKind::DegenerateDistribution, "total mass below 1e-12");
  }
  ms /= mass;
  mi /= mass;
  double vp = 0.0, vm = 0.0;
  for (std::size_t a = 0; a < s.ns(); ++a)
    for (std::size_t b = 0; b < s.ni(); ++b) {
      const double w = s.at(a, b);
      const double u = (s.lambda_s[a] - ms) + (s.lambda_i[b] - mi);
      const double v = (s.lambda_s[a] - ms) - (s.lambda_i[b] - mi);
      vp += w * u * u;
      vm += w * v * v;
    }
  WidthReport r;
  r.delta_lambda_plus = std::sqrt(vp / mass);
  r.delta_lambda_minus = std::sqrt(vm / mass);
  r.center_s = ms;
  r.center_i = mi;
  r.method = WidthMethod::moments;
  r.tolerance = classify_tolerance;
  r.classification = classify(r, classify_tolerance);
  double peak = 0.0;
  for (double v : s.values) peak = std::max(peak, v);
  r.amplitude = peak;
  return r;
}

/// uniform: ordinary least squares, covariance scaled by the residual variance.
/// poisson_counts: weights 1/max(count, 1).
/// poisson_model: weights 1/max(model, 1e-3), refreshed until the parameters
///   settle; the fixed point is the Poisson maximum-likelihood fit.
enum class FitWeighting { uniform, poisson_counts, poisson_model };

struct FitOptions {
  FitWeighting weighting = FitWeighting::uniform;
  std::size_t max_reweights = 50;
  bool fit_background = true;    // false pins the background to 0
  std::size_t max_iterations = 200;
  double step_tolerance = 1e-10;
  double classify_tolerance = 0.1;
};

namespace detail {

// Parameters: A, c_+, c_-, sigma_+, sigma_-, background.
struct GaussModel2D {
  static constexpr int kParams = 6;
  using Vec = Eigen::Matrix<double, kParams, 1>;

  static double eval(const Vec& p, double lp, double lm, double* grad) {
    const double u = lp - p[1];
    const double v = lm - p[2];
    const double sp = p[3], sm = p[4];
    const double g = std::exp(-u * u / (2 * sp * sp) - v * v / (2 * sm * sm));
    if (grad) {
      grad[0] = g;
      grad[1] = p[0] * g * u / (sp * sp);
      grad[2] = p[0] * g * v / (sm * sm);
      grad[3] = p[0] * g * u * u / (sp * sp * sp);
      grad[4] = p[0] * g * v * v / (sm * sm * sm);
      grad[5] = 1.0;
    }
    return p[0] * g + p[5];
  }
};

}  // namespace detail

/// Levenberg-Marquardt fit of A exp(-u^2/(2 s+^2) - v^2/(2 s-^2)) + b with
/// u = Lambda_+ - c_+, v = Lambda_- - c_-, started from the moment widths.
inline WidthReport gaussian_fit_2d(const JointSpectrum& s, const FitOptions& opts = {}) {
  using Model = detail::GaussModel2D;
  using Vec = Model::Vec;
  using Mat = Eigen::Matrix<double, Model::kParams, Model::kParams>;
  if (s.ns() < 6 || s.ni() < 6) throw Error(ErrorKind::InvalidArgument, "Gaussian fit needs at least a 6x6 grid");
  double total = 0.0, peak = -std::numeric_limits<double>::infinity(), floor = std::numeric_limits<double>::infinity();
  for (double v : s.values) {
    total += v;
    peak = std::max(peak, v);
    floor = std::min(floor, v);
  }
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateDistribution, "fit input has no positive mass");

  const std::size_t npts = s.values.size();
  std::vector<double> lp(npts), lm(npts), w(npts, 1.0);
  for (std::size_t a = 0; a < s.ns(); ++a)
    for (std::size_t b = 0; b < s.ni(); ++b) {
      const std::size_t k = a * s.ni() + b;
      lp[k] = s.lambda_s[a] + s.lambda_i[b];
      lm[k] = s.lambda_s[a] - s.lambda_i[b];
      if (opts.weighting == FitWeighting::poisson_counts) w[k] = 1.0 / std::max(s.values[k], 1.0);
    }

  // Moments of the background-subtracted surface seed the iteration.
  const double b0 = opts.fit_background ? std::max(0.0, floor) : 0.0;
  JointSpectrum shifted = s;
  for (double& v : shifted.values) v = std::max(0.0, v - b0);
  const WidthReport m = moment_widths(shifted);
  const double dl = std::max(std::abs(s.lambda_s[1] - s.lambda_s[0]), std::abs(s.lambda_i[1] - s.lambda_i[0]));
  Vec p;
  p << peak - b0, m.center_s + m.center_i, m.center_s - m.center_i, std::max(m.delta_lambda_plus, 0.5 * dl),
      std::max(m.delta_lambda_minus, 0.5 * dl), b0;
  const int nfree = opts.fit_background ? Model::kParams : Model::kParams - 1;

  auto cost_of = [&](const Vec& q) {
    double c = 0.0;
    for (std::size_t k = 0; k < npts; ++k) {
      const double r = s.values[k] - Model::eval(q, lp[k], lm[k], nullptr);
      c += w[k] * r * r;
    }
    return c;
  };
  auto normal_equations = [&](const Vec& q, Mat& jtj, Vec& jtr) {
    jtj.setZero();
    jtr.setZero();
    double grad[Model::kParams];
    for (std::size_t k = 0; k < npts; ++k) {
      const double r = s.values[k] - Model::eval(q, lp[k], lm[k], grad);
      if (!opts.fit_background) grad[5] = 0.0;
      for (int i = 0; i < Model::kParams; ++i) {
        jtr[i] += w[k] * grad[i] * r;
        for (int j = 0; j <= i; ++j) jtj(i, j) += w[k] * grad[i] * grad[j];
      }
    }
    const Mat full = jtj.selfadjointView<Eigen::Lower>();
    jtj = full;
    if (!opts.fit_background) jtj(5, 5) = 1.0;
  };

  Mat jtj;
  Vec jtr;
  WidthReport r;
  std::size_t it = 0;
  auto run_lm = [&]() {
    double cost = cost_of(p);
    double lambda = 1e-3;
    normal_equations(p, jtj, jtr);
    bool converged = false;
    for (std::size_t local = 0; local < opts.max_iterations; ++local, ++it) {
      Mat a = jtj;
      for (int i = 0; i < Model::kParams; ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-300);
      const Vec step = a.ldlt().solve(jtr);
      if (!step.allFinite()) throw Error(ErrorKind::FitDiverged, "non-finite Levenberg-Marquardt step");
      Vec trial = p + step;
      if (!opts.fit_background) trial[5] = 0.0;
      const double trial_cost =
          trial[3] > 0.0 && trial[4] > 0.0 ? cost_of(trial) : std::numeric_limits<double>::infinity();
      if (trial_cost <= cost) {
        const double rel = step.norm() / std::max(p.norm(), 1e-300);
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        normal_equations(p, jtj, jtr);
        if (rel < opts.step_tolerance) {
          converged = true;
          ++it;
          break;
        }
      } else {
        lambda *= 4.0;
        if (lambda > 1e16) {
          // No downhill direction left: at the minimum to working precision.
          converged = true;
          break;
        }
      }
    }
    return std::pair{converged, cost};
  };

  auto [converged, cost] = run_lm();
  if (opts.weighting == FitWeighting::poisson_model) {
    for (std::size_t round = 0; round < opts.max_reweights; ++round) {
      for (std::size_t k = 0; k < npts; ++k) w[k] = 1.0 / std::max(Model::eval(p, lp[k], lm[k], nullptr), 1e-3);
      const Vec before = p;
      std::tie(converged, cost) = run_lm();
      if ((p - before).norm() <= opts.step_tolerance * p.norm()) break;
    }
    normal_equations(p, jtj, jtr);
  }
  r.converged = converged;
  if (!p.allFinite() || !(p[0] > 0.0) || !(p[3] > 0.0) || !(p[4] > 0.0)) {
    throw Error(ErrorKind::FitDiverged, "Gaussian fit left the physical parameter region");
  }

  // Covariance: Poisson weights make the chi-square absolute; otherwise
  // scale by the residual variance.
  Eigen::MatrixXd cov = jtj.topLeftCorner(nfree, nfree).inverse();
  if (opts.weighting == FitWeighting::uniform) {
    const double dof = static_cast<double>(npts) - nfree;
    cov *= dof > 0 ? cost / dof : 0.0;
  }

  double rss = 0.0;
  for (std::size_t k = 0; k < npts; ++k) {
    const double d = s.values[k] - Model::eval(p, lp[k], lm[k], nullptr);
    rss += d * d;
  }
  r.fit_residual = std::sqrt(rss / static_cast<double>(npts)) / std::max(peak, 1e-300);
  r.warning = r.fit_residual > 0.2;
  r.delta_lambda_plus = p[3];
  r.delta_lambda_minus = p[4];
  r.center_s = 0.5 * (p[1] + p[2]);
  r.center_i = 0.5 * (p[1] - p[2]);
  r.amplitude = p[0];
  r.background = p[5];
  r.sigma_plus = std::sqrt(std::max(cov(3, 3), 0.0));
  r.sigma_minus = std::sqrt(std::max(cov(4, 4), 0.0));
  r.iterations = it;
  r.method = WidthMethod::gaussian_fit;
  r.tolerance = opts.classify_tolerance;
  r.classification = classify(r, opts.classify_tolerance);
  return r;
}

/// Sums of S along Lambda_- = const on a grid with equal signal and idler
/// steps. Returns the Lambda_- axis (multiples of the step) and the sums.
struct Marginal {
  std::vector<double> lambda_minus;  // nm
  std::vector<double> values;
};

inline Marginal minus_marginal(const JointSpectrum& s) {
  const std::size_t ns = s.ns(), ni = s.ni();
  const double ds = s.lambda_s[1] - s.lambda_s[0];
  const double di = s.lambda_i[1] - s.lambda_i[0];
  if (std::abs(ds - di) > 1e-9 * std::abs(ds)) {
    throw Error(ErrorKind::GridMismatch, "Lambda_- marginal needs equal signal and idler steps");
  }
  Marginal m;
  m.values.assign(ns + ni - 1, 0.0);
  m.lambda_minus.resize(ns + ni - 1);
  const double offset = s.lambda_s[0] - s.lambda_i[ni - 1];
  for (std::size_t k = 0; k < m.values.size(); ++k) m.lambda_minus[k] = offset + static_cast<double>(k) * ds;
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ni; ++b) m.values[a + ni - 1 - b] += s.at(a, b);
  return m;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepCurve {
  double collection_waist;                  // Ws, m (inf for large-area)
  std::vector<double> delta_lambda_plus;    // nm
  std::vector<double> delta_lambda_minus;   // nm
  std::optional<double> crossing_waist;     // W0, m
};

struct SweepResult {
  std::vector<double> pump_waists;  // W0, m
  std::vector<SweepCurve> curves;
};

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw Error(ErrorKind::InvalidArgument, "log range needs 0 < lo < hi and n >= 2");
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

/// Closed-form widths over a W0 range for each Ws, with the first crossing
/// of Delta Lambda_+ and Delta Lambda_- located by bisection in log W0.
inline SweepResult sweep_waist(const std::vector<double>& pump_waists, const std::vector<double>& collection_waists,
                               const PumpSpectrum& pump, std::optional<double> filter_bandwidth,
                               const CrystalConfig& crystal, const SincApprox& sinc_approx = {}) {
  if (pump_waists.empty()) throw Error(ErrorKind::InvalidArgument, "empty pump-waist range");
  if (collection_waists.empty()) throw Error(ErrorKind::InvalidArgument, "empty collection-waist list");
  const LambdaScale scale(2.0 * pump.center_wavelength);
  SweepResult out;
  out.pump_waists = pump_waists;
  for (double ws : collection_waists) {
    auto widths = [&](double w0) {
      const auto b = gaussian_bandwidths({w0, ws, filter_bandwidth}, pump, crystal, sinc_approx);
      return std::pair{scale.to_lambda_nm(b.b_plus), scale.to_lambda_nm(b.b_minus)};
    };
    SweepCurve c{ws, {}, {}, std::nullopt};
    for (double w0 : pump_waists) {
      const auto [p, m] = widths(w0);
      c.delta_lambda_plus.push_back(p);
      c.delta_lambda_minus.push_back(m);
    }
    for (std::size_t i = 1; i < pump_waists.size() && !c.crossing_waist; ++i) {
      const double f0 = c.delta_lambda_plus[i - 1] - c.delta_lambda_minus[i - 1];
      const double f1 = c.delta_lambda_plus[i] - c.delta_lambda_minus[i];
      if (f0 == 0.0) {
        c.crossing_waist = pump_waists[i - 1];
      } else if (f0 * f1 < 0.0) {
        double lo = std::log(pump_waists[i - 1]), hi = std::log(pump_waists[i]);
        double flo = f0;
        double mid = 0.5 * (lo + hi);
        for (int k = 0; k < 200; ++k) {
          mid = 0.5 * (lo + hi);
          const auto [p, m] = widths(std::exp(mid));
          const double fm = p - m;
          if (std::abs(fm) < 1e-9 || hi - lo < 1e-15) break;
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        c.crossing_waist = std::exp(mid);
      }
    }
    out.curves.push_back(std::move(c));
  }
  return out;
}

/// Pump bandwidth Bp (rad/s) for which the closed-form Delta Lambda_+ at the
/// given collection waist and filter equals target_nm. Solved by bisection.
inline double pump_bandwidth_for_plus_width(double target_nm, double collection_waist,
                                            std::optional<double> filter_bandwidth, const CrystalConfig& crystal,
                                            double pump_wavelength, const SincApprox& sinc_approx = {}) {
  const LambdaScale scale(2.0 * pump_wavelength);
  auto dlp = [&](double bp) {
    return scale.to_lambda_nm(
        gaussian_bandwidths({1e-3, collection_waist, filter_bandwidth}, {pump_wavelength, bp}, crystal, sinc_approx)
            .b_plus);
  };
  double lo = 1e6, hi = 1e16;
  if (dlp(hi) < target_nm) throw Error(ErrorKind::NoSolution, "target Delta Lambda_+ exceeds the phase-matching limit");
  for (int k = 0; k < 300; ++k) {
    const double mid = std::sqrt(lo * hi);
    (dlp(mid) < target_nm ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

/// Filter bandwidth Bf (rad/s) for which the closed-form Delta Lambda_-
/// equals target_nm at the given waists. Solved by bisection.
inline double filter_bandwidth_for_minus_width(double target_nm, double pump_waist, double collection_waist,
                                               const PumpSpectrum& pump, const CrystalConfig& crystal) {
  const LambdaScale scale(2.0 * pump.center_wavelength);
  auto dlm = [&](double bf) {
    return scale.to_lambda_nm(gaussian_bandwidths({pump_waist, collection_waist, bf}, pump, crystal).b_minus);
  };
  const double unfiltered = scale.to_lambda_nm(gaussian_bandwidths({pump_waist, collection_waist, std::nullopt}, pump, crystal).b_minus);
  if (!(target_nm < unfiltered)) throw Error(ErrorKind::NoSolution, "a filter can only narrow Delta Lambda_-");
  double lo = 1e6, hi = 1e17;
  for (int k = 0; k < 300; ++k) {
    const double mid = std::sqrt(lo * hi);
    (dlm(mid) < target_nm ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace spdc
