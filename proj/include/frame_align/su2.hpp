#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "frame_align/euler.hpp"
#include "frame_align/half_int.hpp"

namespace frame_align {

using complex = std::complex<double>;

namespace detail {

inline constexpr int log_factorial_table_size = 4096;

inline const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(log_factorial_table_size);
    t[0] = 0.0;
    for (int n = 1; n < log_factorial_table_size; ++n) t[n] = t[n - 1] + std::log(double(n));
    return t;
  }();
  return table;
}

inline double log_factorial(int n) {
  if (n < log_factorial_table_size) return log_factorial_table()[static_cast<std::size_t>(n)];
  return std::lgamma(double(n) + 1.0);
}

}  // namespace detail

/// <j1 m1 j2 m2 | J M> in the Condon-Shortley convention, all labels doubled.
/// Racah's single sum, evaluated term by term in log space.
inline double clebsch_gordan(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
  require_pair(two_j1, two_m1, "clebsch_gordan");
  require_pair(two_j2, two_m2, "clebsch_gordan");
  require_pair(two_J, two_M, "clebsch_gordan");
  if (two_m1 + two_m2 != two_M) return 0.0;
  if (two_J > two_j1 + two_j2 || two_J < std::abs(two_j1 - two_j2)) return 0.0;

  using detail::log_factorial;
  const int a = (two_j1 + two_j2 - two_J) / 2;
  const int b = (two_j1 - two_j2 + two_J) / 2;
  const int c = (-two_j1 + two_j2 + two_J) / 2;
  const int s = (two_j1 + two_j2 + two_J) / 2 + 1;
  const int j1_minus = (two_j1 - two_m1) / 2, j1_plus = (two_j1 + two_m1) / 2;
  const int j2_minus = (two_j2 - two_m2) / 2, j2_plus = (two_j2 + two_m2) / 2;
  const int J_minus = (two_J - two_M) / 2, J_plus = (two_J + two_M) / 2;

  const double log_pre =
      0.5 * (std::log(double(two_J + 1)) + log_factorial(a) + log_factorial(b) + log_factorial(c) -
             log_factorial(s) + log_factorial(J_plus) + log_factorial(J_minus) +
             log_factorial(j1_minus) + log_factorial(j1_plus) + log_factorial(j2_minus) +
             log_factorial(j2_plus));

  // (J - j2 + m1 + k)! and (J - j1 - m2 + k)!
  const int shift1 = (two_J - two_j2 + two_m1) / 2;
  const int shift2 = (two_J - two_j1 - two_m2) / 2;
  const int k_min = std::max({0, -shift1, -shift2});
  const int k_max = std::min({a, j1_minus, j2_plus});

  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial(j1_minus - k) +
                           log_factorial(j2_plus - k) + log_factorial(shift1 + k) +
                           log_factorial(shift2 + k);
    const double term = std::exp(log_pre - log_den);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

/// Real beta-rotation factor d^j_{m'm}(beta) = <j m'| exp(-i beta J_y) |j m>.
inline double wigner_small_d(int two_j, int two_mp, int two_m, double beta) {
  require_pair(two_j, two_mp, "wigner_small_d");
  require_pair(two_j, two_m, "wigner_small_d");
  using detail::log_factorial;

  const int j_plus_mp = (two_j + two_mp) / 2, j_minus_mp = (two_j - two_mp) / 2;
  const int j_plus_m = (two_j + two_m) / 2, j_minus_m = (two_j - two_m) / 2;
  const int m_minus_mp = (two_m - two_mp) / 2;
  const double cos_half = std::cos(0.5 * beta);
  const double sin_half = std::sin(0.5 * beta);
  const double log_norm = 0.5 * (log_factorial(j_plus_mp) + log_factorial(j_minus_mp) +
                                 log_factorial(j_plus_m) + log_factorial(j_minus_m));

  const int k_min = std::max(0, m_minus_mp);
  const int k_max = std::min(j_plus_m, j_minus_mp);
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(j_plus_m - k) + log_factorial(k) +
                           log_factorial(j_minus_mp - k) + log_factorial(k - m_minus_mp);
    const int cos_power = two_j + m_minus_mp - 2 * k;
    const int sin_power = 2 * k - m_minus_mp;
    const double term = std::exp(log_norm - log_den) * std::pow(cos_half, cos_power) *
                        std::pow(sin_half, sin_power);
    sum += ((k - m_minus_mp) % 2 == 0) ? term : -term;
  }
  return sum;
}

/// D^j_{m'm}(g) = <j m'| U(g) |j m> = e^{-i m' alpha} d^j_{m'm}(beta) e^{-i m gamma}.
inline complex wigner_D(int two_j, int two_mp, int two_m, const EulerAngles& g) {
  const double d = wigner_small_d(two_j, two_mp, two_m, g.beta);
  return std::polar(d, -0.5 * (two_mp * g.alpha + two_m * g.gamma));
}

/// Full (2j+1)x(2j+1) matrix; row and column indices run over m ascending from -j.
inline Eigen::MatrixXcd wigner_D_matrix(int two_j, const EulerAngles& g) {
  const int dim = two_j + 1;
  Eigen::MatrixXcd D(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const int two_mp = -two_j + 2 * r;
    for (int c = 0; c < dim; ++c) {
      D(r, c) = wigner_D(two_j, two_mp, -two_j + 2 * c, g);
    }
  }
  return D;
}

/// Character of the spin-1 representation, tr U^(1)(g); lies in [-1, 3].
inline double trace_rep1(const EulerAngles& g) {
  const double cb = std::cos(g.beta);
  return cb + (1.0 + cb) * std::cos(g.alpha + g.gamma);
}

}  // namespace frame_align
