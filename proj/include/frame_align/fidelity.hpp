#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "frame_align/half_int.hpp"
#include "frame_align/states.hpp"
#include "frame_align/su2.hpp"
#include "frame_align/tridiag.hpp"

namespace frame_align {

/// Time-reversed block: out_m = (-1)^(j-m) conj(in_{-m}).
inline IrrepBlock time_reverse(const IrrepBlock& b) {
  IrrepBlock out(b.two_j);
  for (int two_m = -b.two_j; two_m <= b.two_j; two_m += 2) {
    out.at_m(two_m) = sign_of_twice(b.two_j - two_m) * std::conj(b.at_m(-two_m));
  }
  return out;
}

/// M^{lj}_{n m n' m'} = sqrt(2j+1) sqrt(2l+1) * integral of
/// tr U1(g) D^j_{m'm}(g) conj(D^l_{n'n}(g)) over the group,
/// evaluated as sqrt((2j+1)/(2l+1)) sum_M <1 M j m|l n><1 M j m'|l n'>.
inline double m_tensor(int two_l, int two_j, int two_n, int two_m, int two_np, int two_mp) {
  require_pair(two_l, two_n, "m_tensor");
  require_pair(two_l, two_np, "m_tensor");
  require_pair(two_j, two_m, "m_tensor");
  require_pair(two_j, two_mp, "m_tensor");
  if ((two_l - two_j) % 2 != 0 || std::abs(two_l - two_j) > 2) return 0.0;
  const int two_M = two_n - two_m;
  if (two_np - two_mp != two_M || std::abs(two_M) > 2) return 0.0;
  const double cg = clebsch_gordan(2, two_M, two_j, two_m, two_l, two_n) *
                    clebsch_gordan(2, two_M, two_j, two_mp, two_l, two_np);
  return std::sqrt(double(two_j + 1) / double(two_l + 1)) * cg;
}

namespace detail {

// sum over A^{l*}_n A^j_m B^l_{n'} B^{j*}_{m'} M^{lj}_{nmn'm'} for one (l, j) pair.
inline complex tensor_pair_sum(const IrrepBlock& a_l, const IrrepBlock& a_j, const IrrepBlock& b_l,
                               const IrrepBlock& b_j) {
  const int two_l = a_l.two_j, two_j = a_j.two_j;
  complex sum = 0.0;
  for (int two_M = -2; two_M <= 2; two_M += 2) {
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const int two_n = two_m + two_M;
      if (std::abs(two_n) > two_l) continue;
      const complex a_part = std::conj(a_l.at_m(two_n)) * a_j.at_m(two_m);
      if (a_part == 0.0) continue;
      for (int two_mp = -two_j; two_mp <= two_j; two_mp += 2) {
        const int two_np = two_mp + two_M;
        if (std::abs(two_np) > two_l) continue;
        const complex b_part = b_l.at_m(two_np) * std::conj(b_j.at_m(two_mp));
        sum += a_part * b_part * m_tensor(two_l, two_j, two_n, two_m, two_np, two_mp);
      }
    }
  }
  return sum;
}

// Spin-1 components of P1 (x_j (x) time_reverse(x_l)), M = -1, 0, 1.
inline std::array<complex, 3> spin1_projection(const IrrepBlock& x_j, const IrrepBlock& x_l) {
  const IrrepBlock reversed = time_reverse(x_l);
  std::array<complex, 3> phi{};
  for (int two_M = -2; two_M <= 2; two_M += 2) {
    complex s = 0.0;
    for (int two_m = -x_j.two_j; two_m <= x_j.two_j; two_m += 2) {
      const int two_n = two_M - two_m;
      if (std::abs(two_n) > x_l.two_j) continue;
      s += clebsch_gordan(x_j.two_j, two_m, x_l.two_j, two_n, 2, two_M) * x_j.at_m(two_m) *
           reversed.at_m(two_n);
    }
    phi[static_cast<std::size_t>((two_M + 2) / 2)] = s;
  }
  return phi;
}

inline bool couples_to_spin1(int two_j, int two_l) {
  return (two_j - two_l) % 2 == 0 && std::abs(two_j - two_l) <= 2 && two_j + two_l >= 2;
}

}  // namespace detail

/// <t> from the component form: sum of A^{l*}_n A^j_m B^l_{n'} B^{j*}_{m'} M^{lj}_{nmn'm'}.
inline double avg_t_general(const SignalState& a, const ReferenceState& b) {
  detail::require_same_ladder(a, b.n_spins, "avg_t_general");
  detail::require_same_ladder(b, a.n_spins, "avg_t_general");
  complex total = 0.0;
  for (std::size_t il = 0; il < a.blocks.size(); ++il) {
    for (std::size_t ij = 0; ij < a.blocks.size(); ++ij) {
      if (!detail::couples_to_spin1(a.blocks[ij].two_j, a.blocks[il].two_j)) continue;
      total += detail::tensor_pair_sum(a.blocks[il], a.blocks[ij], b.blocks[il], b.blocks[ij]);
    }
  }
  return total.real();
}

/// <t> from the spin-1 projector form with time-reversed blocks:
/// sum_{lj} sqrt((2l+1)(2j+1))/3 <B^j ~B^l| P1 |A^j ~A^l>.
inline double avg_t_projector(const SignalState& a, const ReferenceState& b) {
  detail::require_same_ladder(a, b.n_spins, "avg_t_projector");
  detail::require_same_ladder(b, a.n_spins, "avg_t_projector");
  complex total = 0.0;
  for (std::size_t il = 0; il < a.blocks.size(); ++il) {
    for (std::size_t ij = 0; ij < a.blocks.size(); ++ij) {
      const int two_l = a.blocks[il].two_j, two_j = a.blocks[ij].two_j;
      if (!detail::couples_to_spin1(two_j, two_l)) continue;
      const auto phi_a = detail::spin1_projection(a.blocks[ij], a.blocks[il]);
      const auto phi_b = detail::spin1_projection(b.blocks[ij], b.blocks[il]);
      complex s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += std::conj(phi_b[k]) * phi_a[k];
      total += std::sqrt(double(two_l + 1) * double(two_j + 1)) / 3.0 * s;
    }
  }
  return total.real();
}

/// One entry of M_B through the projector: sqrt((2j+1)(2j'+1))/3 ||P1 |B^j ~B^j'>||^2.
inline double m_b_entry(const ReferenceState& b, std::size_t i, std::size_t k) {
  const int two_j = b.blocks[i].two_j, two_jp = b.blocks[k].two_j;
  if (!detail::couples_to_spin1(two_j, two_jp)) return 0.0;
  const auto phi = detail::spin1_projection(b.blocks[i], b.blocks[k]);
  double s = 0.0;
  for (const auto& x : phi) s += std::norm(x);
  return std::sqrt(double(two_j + 1) * double(two_jp + 1)) / 3.0 * s;
}

/// Same entry through the Clebsch-Gordan tensor (independent route).
inline double m_b_entry_tensor(const ReferenceState& b, std::size_t i, std::size_t k) {
  const auto& bl = b.blocks[i];
  const auto& bj = b.blocks[k];
  if (!detail::couples_to_spin1(bj.two_j, bl.two_j)) return 0.0;
  return detail::tensor_pair_sum(bl, bj, bl, bj).real();
}

/// Reduced fidelity matrix of a reference state (tridiagonal in j).
inline TridiagSym build_M_B(const ReferenceState& b) {
  detail::require_same_ladder(b, b.n_spins, "build_M_B");
  const std::size_t n = b.blocks.size();
  TridiagSym m;
  m.diag.resize(n);
  m.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    m.diag[i] = m_b_entry(b, i, i);
    if (i + 1 < n) m.off[i] = m_b_entry(b, i, i + 1);
  }
  return m;
}

inline TridiagSym build_M_B_tensor(const ReferenceState& b) {
  detail::require_same_ladder(b, b.n_spins, "build_M_B_tensor");
  const std::size_t n = b.blocks.size();
  TridiagSym m;
  m.diag.resize(n);
  m.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    m.diag[i] = m_b_entry_tensor(b, i, i);
    if (i + 1 < n) m.off[i] = m_b_entry_tensor(b, i, i + 1);
  }
  return m;
}

/// sum_{jj'} conj(C^j) M^{jj'} C^{j'}.
inline double avg_t_reduced(const ReducedWeights& c, const TridiagSym& m) {
  if (c.c.size() != m.size()) throw std::invalid_argument("avg_t_reduced: dimension mismatch");
  complex s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += std::norm(c.c[i]) * m.diag[i];
    if (i + 1 < m.size()) s += 2.0 * (std::conj(c.c[i]) * c.c[i + 1]).real() * m.off[i];
  }
  return s.real();
}

/// Closed-form M_op on the ladder of n_spins: diag j/(j+1), off sqrt((2j+1)/(2j+3)).
inline TridiagSym build_M_op(int n_spins) {
  const auto spins = ladder(n_spins);
  TridiagSym m;
  for (int two_j : spins) {
    const double j = 0.5 * two_j;
    m.diag.push_back(j / (j + 1.0));
  }
  for (std::size_t i = 0; i + 1 < spins.size(); ++i) {
    const double two_j = spins[i];
    m.off.push_back(std::sqrt((two_j + 1.0) / (two_j + 3.0)));
  }
  return m;
}

struct ProtocolSolution {
  int n_spins = 0;
  double lambda_op = 0.0;
  ReducedWeights weights;  // real, positive
  double avg_h = 6.0;
};

inline ProtocolSolution optimal_protocol(int n_spins) {
  if (n_spins < 0) throw std::invalid_argument("optimal_protocol: negative number of spins");
  const auto eig = max_eigen(build_M_op(n_spins));
  ProtocolSolution sol;
  sol.n_spins = n_spins;
  sol.lambda_op = eig.lambda;
  sol.weights.c.assign(eig.vector.begin(), eig.vector.end());
  sol.avg_h = 6.0 - 2.0 * eig.lambda;
  return sol;
}

/// A^j_m = C^j delta_{m,j}: all weight on the highest-m state of each irrep.
inline SignalState optimal_signal_state(const ProtocolSolution& sol) {
  return assemble_signal(sol.weights, optimal_reference(sol.n_spins));
}

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  double best_p = 0.0;  // exponent p of the best trial vector
};

namespace detail {

// Normalisation-free trial vector sqrt(2j-1) (N/2 - j) j^p, built in log space.
inline std::vector<double> trial_vector(int n_spins, double p) {
  const auto spins = ladder(n_spins);
  std::vector<double> logs(spins.size(), -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const double j = 0.5 * spins[i];
    const double gap = 0.5 * n_spins - j;
    if (j < 1.0 || gap <= 0.0) continue;
    logs[i] = 0.5 * std::log(2.0 * j - 1.0) + std::log(gap) + p * std::log(j);
    max_log = std::max(max_log, logs[i]);
  }
  std::vector<double> v(spins.size(), 0.0);
  if (!std::isfinite(max_log)) return v;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (std::isfinite(logs[i])) v[i] = std::exp(logs[i] - max_log);
  }
  return v;
}

}  // namespace detail

/// upper: max row sum of M_op. lower: best Rayleigh quotient of the trial
/// family over p by golden section on [p*/4, 4 p*], p* = (3N/4)^(1/3).
inline Bounds bounds(int n_spins) {
  if (n_spins < 2) throw std::invalid_argument("bounds: need at least 2 spins");
  const TridiagSym m = build_M_op(n_spins);
  Bounds out;
  const auto sums = m.row_sums();
  out.upper = *std::max_element(sums.begin(), sums.end());

  const auto quotient = [&](double p) {
    const auto v = detail::trial_vector(n_spins, p);
    for (double x : v) {
      if (x != 0.0) return m.rayleigh_quotient(v);
    }
    return -std::numeric_limits<double>::infinity();
  };

  const double p_star = std::cbrt(0.75 * n_spins);
  double a = 0.25 * p_star, b = 4.0 * p_star;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = quotient(x1), f2 = quotient(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * p_star; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = quotient(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = quotient(x1);
    }
  }
  const double best = std::max(f1, f2);
  out.best_p = f1 >= f2 ? x1 : x2;
  // The top irrep alone is also a trial vector; it wins for small N, where the
  // family is empty (N = 2, 3) or a single entry.
  out.lower = std::max(best, m.diag.back());
  return out;
}

struct FitPoint {
  int n_spins;
  double lambda_op;
  double residual;  // (3 - lambda) minus the fitted model
  double tail;      // 3 - lambda - 4/N
};

struct AsymptoticFit {
  double a = 0.0;  // coefficient of 1/N
  double b = 0.0;  // coefficient of N^(-4/3)
  std::vector<FitPoint> points;
};

/// Least squares of 3 - lambda_op(N) against a/N + b/N^(4/3).
inline AsymptoticFit asymptotic_fit(const std::vector<int>& n_list) {
  if (n_list.size() < 4) throw std::invalid_argument("asymptotic_fit: need at least 4 points");
  int n_min = n_list.front();
  for (int n : n_list) {
    if (n < 100) throw std::invalid_argument("asymptotic_fit: every N must be >= 100");
    n_min = std::min(n_min, n);
  }
  // Columns rescaled to O(1) at the smallest N before forming normal equations.
  const double s1 = n_min, s2 = std::pow(double(n_min), 4.0 / 3.0);
  std::vector<double> y, u1, u2, lambdas;
  for (int n : n_list) {
    const double lambda = max_eigen(build_M_op(n)).lambda;
    lambdas.push_back(lambda);
    y.push_back(3.0 - lambda);
    u1.push_back(s1 / n);
    u2.push_back(s2 * std::pow(double(n), -4.0 / 3.0));
  }
  double g11 = 0, g12 = 0, g22 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    g11 += u1[i] * u1[i];
    g12 += u1[i] * u2[i];
    g22 += u2[i] * u2[i];
    r1 += u1[i] * y[i];
    r2 += u2[i] * y[i];
  }
  const double det = g11 * g22 - g12 * g12;
  if (!(std::abs(det) > 1e-14 * g11 * g22)) {
    throw std::runtime_error("asymptotic_fit: singular normal equations");
  }
  AsymptoticFit fit;
  fit.a = (g22 * r1 - g12 * r2) / det * s1;
  fit.b = (g11 * r2 - g12 * r1) / det * s2;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double n = n_list[i];
    const double model = fit.a / n + fit.b * std::pow(n, -4.0 / 3.0);
    fit.points.push_back({n_list[i], lambdas[i], y[i] - model, y[i] - 4.0 / n});
  }
  return fit;
}

}  // namespace frame_align
