#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace frame_align {

/// Real symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct TridiagSym {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  double at(std::size_t i, std::size_t k) const {
    if (i == k) return diag[i];
    if (i + 1 == k) return off[i];
    if (k + 1 == i) return off[k];
    return 0.0;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * v[i];
      if (i > 0) s += off[i - 1] * v[i - 1];
      if (i + 1 < n) s += off[i] * v[i + 1];
      out[i] = s;
    }
    return out;
  }

  std::vector<double> row_sums() const {
    std::vector<double> sums(diag);
    for (std::size_t i = 0; i < off.size(); ++i) {
      sums[i] += off[i];
      sums[i + 1] += off[i];
    }
    return sums;
  }

  /// v^T M v / v^T v.
  double rayleigh_quotient(const std::vector<double>& v) const {
    const auto mv = apply(v);
    const double num = std::inner_product(v.begin(), v.end(), mv.begin(), 0.0);
    const double den = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    return num / den;
  }
};

/// Number of eigenvalues strictly below x (Sturm sequence of LDL^T pivots).
inline std::size_t sturm_count_below(const TridiagSym& m, double x) {
  const std::size_t n = m.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double coupling = (i == 0) ? 0.0 : m.off[i - 1] * m.off[i - 1] / q;
    q = m.diag[i] - x - coupling;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;
};

namespace detail {

// Solves (sigma I - M) x = b by LDL^T without pivoting; sigma I - M must be
// positive definite. Returns false when a pivot is not positive.
inline bool shifted_solve(const TridiagSym& m, double sigma, std::vector<double>& x) {
  const std::size_t n = m.size();
  std::vector<double> pivot(n), lower(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double p = sigma - m.diag[i];
    if (i > 0) p -= m.off[i - 1] * m.off[i - 1] / pivot[i - 1];
    if (!(p > 0.0)) return false;
    pivot[i] = p;
    if (i + 1 < n) lower[i] = -m.off[i] / p;
  }
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= pivot[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= lower[i] * x[i + 1];
  return true;
}

inline void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
}

}  // namespace detail

/// Largest eigenvalue by Sturm bisection (to the last representable bit) and
/// its eigenvector by inverse iteration with a shift just above it. The vector
/// is unit-norm with nonnegative sum; for nonnegative off-diagonals every
/// entry comes out positive because sigma I - M is then an M-matrix.
inline EigenPair max_eigen(const TridiagSym& m, int max_shift_retries = 30) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("max_eigen: empty matrix");
  if (m.off.size() + 1 != n) throw std::invalid_argument("max_eigen: off-diagonal length");
  if (n == 1) return {m.diag[0], {1.0}};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(m.off[i - 1]);
    if (i + 1 < n) radius += std::abs(m.off[i]);
    lo = std::min(lo, m.diag[i] - radius);
    hi = std::max(hi, m.diag[i] + radius);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
  hi += 1e-15 * scale;
  lo -= 1e-15 * scale;
  // Invariant: count_below(lo) < n, count_below(hi) == n.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count_below(m, mid) == n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  EigenPair out;
  out.lambda = 0.5 * (lo + hi);

  const double tol = 1e-10 * std::max(1.0, std::abs(out.lambda));
  double delta = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (int attempt = 0; attempt < max_shift_retries; ++attempt, delta *= 4.0) {
    std::vector<double> v(n, 1.0);
    bool ok = true;
    for (int it = 0; it < 4 && ok; ++it) {
      ok = detail::shifted_solve(m, hi + delta, v);
      if (ok) detail::normalize(v);
    }
    if (!ok) continue;
    const auto mv = m.apply(v);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += (mv[i] - out.lambda * v[i]) * (mv[i] - out.lambda * v[i]);
    if (std::sqrt(residual) > tol) continue;
    if (std::accumulate(v.begin(), v.end(), 0.0) < 0.0) {
      for (double& x : v) x = -x;
    }
    out.vector = std::move(v);
    return out;
  }
  throw std::runtime_error("max_eigen: inverse iteration failed to converge");
}

}  // namespace frame_align
