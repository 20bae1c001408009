#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace frame_align {

/// P_L(x) by the three-term recurrence.
inline double legendre_p(int L, double x) {
  if (L < 0) throw std::invalid_argument("legendre_p: negative degree");
  if (L == 0) return 1.0;
  double p_prev = 1.0, p = x;
  for (int l = 1; l < L; ++l) {
    const double p_next = ((2.0 * l + 1.0) * x * p - l * p_prev) / (l + 1.0);
    p_prev = p;
    p = p_next;
  }
  return p;
}

struct QuadratureNode {
  double node;
  double weight;
};

namespace detail {

// Returns (P_n(x), P_{n-1}(x)).
inline std::pair<double, double> legendre_pair(int n, double x) {
  double p_prev = 1.0, p = x;
  if (n == 0) return {1.0, 0.0};
  for (int l = 1; l < n; ++l) {
    const double p_next = ((2.0 * l + 1.0) * x * p - l * p_prev) / (l + 1.0);
    p_prev = p;
    p = p_next;
  }
  return {p, p_prev};
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending, weights summing to 2.
///
/// The k-th largest root has theta = acos(x) inside Bruns' interval
/// ((k - 1/2) pi / (n + 1/2), k pi / (n + 1/2)); Newton steps that leave that
/// bracket fall back to bisection. Roots are computed for the upper half and
/// mirrored, so the rule is exactly symmetric.
inline std::vector<QuadratureNode> gauss_legendre(int n, int max_iterations = 100) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  std::vector<QuadratureNode> rule(static_cast<std::size_t>(n));
  const double pi = std::numbers::pi;
  const double h = n + 0.5;

  for (int k = 1; k <= (n + 1) / 2; ++k) {
    double x;
    if (2 * k - 1 == n) {
      x = 0.0;  // middle root of odd-degree P_n
    } else {
      double lo = std::cos(k * pi / h);
      double hi = std::cos((k - 0.5) * pi / h);
      double p_lo = detail::legendre_pair(n, lo).first;
      x = std::cos((k - 0.25) * pi / h);
      bool converged = false;
      for (int it = 0; it < max_iterations; ++it) {
        const auto [p, p_prev] = detail::legendre_pair(n, x);
        if (p == 0.0) {
          converged = true;
          break;
        }
        if ((p < 0.0) == (p_lo < 0.0)) {
          lo = x;
          p_lo = p;
        } else {
          hi = x;
        }
        const double dp = n * (x * p - p_prev) / (x * x - 1.0);
        double next = x - p / dp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
          converged = true;
          break;
        }
      }
      if (!converged) throw std::runtime_error("gauss_legendre: root refinement did not converge");
    }
    const auto [p, p_prev] = detail::legendre_pair(n, x);
    const double dp = n * (x * p - p_prev) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<std::size_t>(k - 1)] = {-x, w};
    rule[static_cast<std::size_t>(n - k)] = {x, w};
  }
  return rule;
}

}  // namespace frame_align
