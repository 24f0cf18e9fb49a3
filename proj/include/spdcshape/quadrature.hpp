#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spdcshape/errors.hpp"

namespace spdc {

/// Gauss-Hermite rule for  int f(x) exp(-x^2) dx  ~  sum_k w_k f(x_k).
/// Nodes are found by Newton iteration on the orthonormal Hermite recurrence
/// with the usual asymptotic starting guesses; nodes come out in decreasing
/// order and symmetric pairs are stored exactly mirrored.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(std::size_t order) : nodes_(order), weights_(order) {
    if (order < 1 || order > 200) throw Error(ErrorKind::InvalidArgument, "Gauss-Hermite order must be in [1, 200]");
    const int n = static_cast<int>(order);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i == 0) {
        z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
      } else if (i == 1) {
        z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
      } else if (i == 2) {
        z = 1.86 * z - 0.86 * nodes_[0];
      } else if (i == 3) {
        z = 1.91 * z - 0.91 * nodes_[1];
      } else {
        z = 2.0 * z - nodes_[i - 2];
      }
      double pp = 0.0;
      bool converged = false;
      for (int it = 0; it < 100; ++it) {
        double p1 = pim4;
        double p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged) throw Error(ErrorKind::QuadratureNotConverged, "Gauss-Hermite node iteration did not converge");
      nodes_[i] = z;
      nodes_[n - 1 - i] = -z;
      weights_[i] = 2.0 / (pp * pp);
      weights_[n - 1 - i] = weights_[i];
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  std::size_t order() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  auto integrate(F&& f) const {
    decltype(f(0.0)) sum{};
    for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(nodes_[k]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace spdc
