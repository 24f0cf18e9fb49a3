#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "spdcshape/errors.hpp"
#include "spdcshape/units.hpp"

namespace spdc::fft {

// FFTW's planner is not reentrant; execution of an existing plan is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan2D {
 public:
  Plan2D(std::size_t n, int sign) : n_(n), buffer_(n * n) {
    std::lock_guard lock(planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(buffer_.data());
    plan_ = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), p, p, sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error(ErrorKind::InvalidArgument, "FFTW could not create a plan");
  }
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;
  ~Plan2D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::vector<std::complex<double>>& buffer() { return buffer_; }
  void execute() {
    auto* p = reinterpret_cast<fftw_complex*>(buffer_.data());
    fftw_execute_dft(plan_, p, p);
  }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> buffer_;
  fftw_plan plan_ = nullptr;
};

inline bool is_power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

/// Unitary 2-D transform between a cell-centered position grid,
/// x_j = (j - (n-1)/2) dx, and the centered frequency grid q_k = (k - n/2) dq
/// with dq dx = 2 pi / n:
///   F(q_k, q_l) = (1/n) sum_{j,m} f(x_j, y_m) exp(-i (q_k x_j + q_l y_m)).
/// Data are row-major with y as the slow index. sign = -1 forward, +1 inverse.
inline std::vector<std::complex<double>> centered_transform(std::span<const std::complex<double>> in, std::size_t n,
                                                            int sign) {
  if (!is_power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two >= 4");
  if (in.size() != n * n) throw Error(ErrorKind::InvalidArgument, "transform input has wrong size");
  // With x_j = (j' + 1/2) dx and q_k = k' dq (j' = j - n/2, k' = k - n/2):
  // exp(-i q x) = exp(-2 pi i k j / n) (-1)^(k + j) exp(-i pi k' / n), using n % 4 == 0.
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kp = static_cast<double>(k) - static_cast<double>(n / 2);
    const double alt = (k % 2 == 0) ? 1.0 : -1.0;
    twiddle[k] = alt * std::polar(1.0, sign * kPi * kp / static_cast<double>(n));
  }
  Plan2D plan(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto& buf = plan.buffer();
  if (sign < 0) {
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t j = 0; j < n; ++j) buf[m * n + j] = in[m * n + j] * (((m + j) % 2 == 0) ? 1.0 : -1.0);
    plan.execute();
    const double scale = 1.0 / static_cast<double>(n);
    std::vector<std::complex<double>> out(n * n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k) out[l * n + k] = buf[l * n + k] * twiddle[l] * twiddle[k] * scale;
    return out;
  }
  // Inverse: f(x_j) = (1/n) sum_k F(q_k) exp(+i q_k x_j).
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k) buf[l * n + k] = in[l * n + k] * twiddle[l] * twiddle[k];
  plan.execute();
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<std::complex<double>> out(n * n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = 0; j < n; ++j) out[m * n + j] = buf[m * n + j] * (((m + j) % 2 == 0) ? scale : -scale);
  return out;
}

}  // namespace spdc::fft
