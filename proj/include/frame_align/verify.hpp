#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frame_align/channel.hpp"
#include "frame_align/fidelity.hpp"
#include "frame_align/povm.hpp"
#include "frame_align/quadrature.hpp"
#include "frame_align/su2.hpp"

// Invariant checks shared by the `verify` subcommand and the test suites.
// Each check reports the worst deviation it saw next to its tolerance.

namespace frame_align::verify {

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
};

/// Fault injection used to prove that the checks can fail.
struct Faults {
  bool corrupt_cg_sign = false;
  bool undersize_grid = false;
};

using CgFunction = std::function<double(int, int, int, int, int, int)>;

inline CgFunction cg_under_test(const Faults& faults) {
  if (!faults.corrupt_cg_sign) return clebsch_gordan;
  // Flips one component of the stretched multiplet only, which breaks
  // orthogonality against the lower multiplets with the same M.
  return [](int j1, int m1, int j2, int m2, int J, int M) {
    const double v = clebsch_gordan(j1, m1, j2, m2, J, M);
    return (J == j1 + j2 && m1 == j1 && m2 < j2) ? -v : v;
  };
}

inline CheckResult make_result(std::string group, std::string name, double worst, double tol) {
  return {std::move(group), std::move(name), worst <= tol, worst, tol};
}

// ---- representation kernel ------------------------------------------------

inline CheckResult convention_lock(int samples = 1000, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const EulerAngles g = haar_sample(rng);
    const complex trace = wigner_D_matrix(2, g).trace();
    worst = std::max({worst, std::abs(trace.real() - trace_rep1(g)), std::abs(trace.imag())});
  }
  return make_result("su2_math", "convention lock: sum_m D^1_mm = tr U1", worst, 1e-12);
}

/// D(compose(g1, g2)) = D(g1) D(g2); half-integer spins up to the double-cover sign.
inline CheckResult homomorphism(int pairs = 100, int two_j_max = 5, std::uint64_t seed = 2) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < pairs; ++s) {
    const EulerAngles g1 = haar_sample(rng), g2 = haar_sample(rng);
    const EulerAngles g12 = compose(g1, g2);
    for (int two_j = 0; two_j <= two_j_max; ++two_j) {
      const Eigen::MatrixXcd lhs = wigner_D_matrix(two_j, g12);
      const Eigen::MatrixXcd rhs = wigner_D_matrix(two_j, g1) * wigner_D_matrix(two_j, g2);
      double err = (lhs - rhs).cwiseAbs().maxCoeff();
      if (two_j % 2 == 1) err = std::min(err, (lhs + rhs).cwiseAbs().maxCoeff());
      worst = std::max(worst, err);
    }
  }
  return make_result("su2_math", "homomorphism: D(g1 g2) = D(g1) D(g2), j <= 5/2", worst, 1e-11);
}

inline CheckResult unitarity(int samples = 100, int two_j_max = 6, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const EulerAngles g = haar_sample(rng);
    for (int two_j = 0; two_j <= two_j_max; ++two_j) {
      const Eigen::MatrixXcd d = wigner_D_matrix(two_j, g);
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1);
      worst = std::max(worst, (d * d.adjoint() - id).cwiseAbs().maxCoeff());
    }
  }
  return make_result("su2_math", "unitarity: D D^dagger = I", worst, 1e-12);
}

/// sum_{m1 m2} <j1 m1 j2 m2|J M><j1 m1 j2 m2|J' M'> = delta, all j1, j2 <= 3.
inline CheckResult cg_orthogonality(const Faults& faults = {}, int two_j_max = 6) {
  const CgFunction cg = cg_under_test(faults);
  double worst = 0.0;
  for (int j1 = 0; j1 <= two_j_max; ++j1) {
    for (int j2 = 0; j2 <= two_j_max; ++j2) {
      for (int J = std::abs(j1 - j2); J <= j1 + j2; J += 2) {
        for (int Jp = std::abs(j1 - j2); Jp <= j1 + j2; Jp += 2) {
          for (int M = -J; M <= J; M += 2) {
            for (int Mp = -Jp; Mp <= Jp; Mp += 2) {
              double s = 0.0;
              for (int m1 = -j1; m1 <= j1; m1 += 2) {
                for (int m2 = -j2; m2 <= j2; m2 += 2) {
                  if (m1 + m2 != M || m1 + m2 != Mp) continue;
                  s += cg(j1, m1, j2, m2, J, M) * cg(j1, m1, j2, m2, Jp, Mp);
                }
              }
              const double expected = (J == Jp && M == Mp) ? 1.0 : 0.0;
              worst = std::max(worst, std::abs(s - expected));
            }
          }
        }
      }
    }
  }
  return make_result("su2_math", "CG orthogonality, j1, j2 <= 3", worst, 1e-12);
}

/// su2_quadrature_grid(j_max) reproduces the continuous orthogonality relations.
inline CheckResult quadrature_exactness(const Faults& faults = {}, int two_j_max_limit = 4) {
  double worst = 0.0;
  for (int two_j_max = 1; two_j_max <= two_j_max_limit; ++two_j_max) {
    const GroupGrid grid = faults.undersize_grid
                               ? tensor_grid(two_j_max, std::max(1, two_j_max / 2))
                               : su2_quadrature_grid(two_j_max);
    worst = std::max(worst, check_discrete_orthogonality(grid.nodes, two_j_max));
    worst = std::max(worst, std::abs(grid.total_weight() - 1.0));
  }
  return make_result("su2_math", "quadrature grid exact up to j_max", worst, 1e-12);
}

inline std::vector<CheckResult> su2_group(const Faults& faults = {}) {
  return {convention_lock(), homomorphism(), unitarity(), cg_orthogonality(faults),
          quadrature_exactness(faults)};
}

// ---- fidelity core ----------------------------------------------------------

inline CheckResult entry_domination(const std::vector<int>& n_values, int states_per_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -1.0;
  for (int n : n_values) {
    const TridiagSym op = build_M_op(n);
    for (int s = 0; s < states_per_n; ++s) {
      const TridiagSym mb = build_M_B(random_reference_state(n, rng));
      for (std::size_t i = 0; i < op.size(); ++i) {
        worst = std::max(worst, std::abs(mb.diag[i]) - op.diag[i]);
        if (i + 1 < op.size()) worst = std::max(worst, std::abs(mb.off[i]) - op.off[i]);
      }
    }
  }
  return make_result("fidelity_core", "entry domination |M_B| <= M_op", worst, 1e-10);
}

inline CheckResult eigen_domination(const std::vector<int>& n_values, int states_per_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -1.0;
  for (int n : n_values) {
    const double lambda_op = max_eigen(build_M_op(n)).lambda;
    for (int s = 0; s < states_per_n; ++s) {
      const double lambda_b = max_eigen(build_M_B(random_reference_state(n, rng))).lambda;
      worst = std::max(worst, lambda_b - lambda_op);
    }
  }
  return make_result("fidelity_core", "eigenvalue domination lambda(M_B) <= lambda_op", worst, 1e-10);
}

inline CheckResult oracle_equivalence(const std::vector<int>& n_values, int pairs_per_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int n : n_values) {
    for (int s = 0; s < pairs_per_n; ++s) {
      const SignalState a = random_signal_state(n, rng);
      const ReferenceState b = random_reference_state(n, rng);
      worst = std::max(worst, std::abs(avg_t_general(a, b) - avg_t_quadrature(a, b)));
    }
  }
  return make_result("fidelity_core", "component form = group quadrature of <t>", worst, 1e-10);
}

inline CheckResult form_equivalence(const std::vector<int>& n_values, int states_per_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int n : n_values) {
    for (int s = 0; s < states_per_n; ++s) {
      const ReferenceState b = random_reference_state(n, rng);
      const TridiagSym p1 = build_M_B(b), cg = build_M_B_tensor(b);
      for (std::size_t i = 0; i < p1.size(); ++i) {
        worst = std::max(worst, std::abs(p1.diag[i] - cg.diag[i]));
        if (i + 1 < p1.size()) worst = std::max(worst, std::abs(p1.off[i] - cg.off[i]));
      }
      const SignalState a = random_signal_state(n, rng);
      worst = std::max(worst, std::abs(avg_t_projector(a, b) - avg_t_general(a, b)));
    }
  }
  return make_result("fidelity_core", "P1/time-reversal form = CG-sum form", worst, 1e-11);
}

inline CheckResult protocol_monotone(int n_max = 60) {
  // worst = largest violation of lambda(N) >= lambda(N-1), lambda < 3, 0 < h <= 6
  double worst = 0.0, previous = -1.0;
  for (int n = 1; n <= n_max; ++n) {
    const ProtocolSolution sol = optimal_protocol(n);
    worst = std::max(worst, previous - sol.lambda_op);
    if (!(sol.lambda_op < 3.0) || !(sol.avg_h > 0.0 && sol.avg_h <= 6.0)) worst = std::max(worst, 1.0);
    previous = sol.lambda_op;
  }
  return make_result("fidelity_core", "lambda_op nondecreasing in N = 1..60, < 3", worst, 0.0);
}

inline CheckResult perron_positive(int n_max = 200) {
  // worst = -(smallest weight); passes when every weight is strictly positive
  double smallest = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    for (const auto& c : optimal_protocol(n).weights.c) smallest = std::min(smallest, c.real());
  }
  CheckResult r = make_result("fidelity_core", "Perron weights strictly positive, N <= 200", -smallest, 0.0);
  r.passed = smallest > 0.0;
  return r;
}

inline std::vector<CheckResult> fidelity_group() {
  return {entry_domination({2, 3, 4, 6}, 50, 11), eigen_domination({2, 3, 4, 6}, 50, 12),
          oracle_equivalence({1, 2, 3, 4}, 10, 13), form_equivalence({1, 2, 3, 4, 5}, 10, 14),
          protocol_monotone(), perron_positive()};
}

// ---- measurements -----------------------------------------------------------

inline CheckResult povm_completeness(int n_max = 8, std::uint64_t seed = 21) {
  std::mt19937_64 rng(seed);
  double worst = check_completeness(minimal_povm_n2()).residual_norm;
  for (int n = 0; n <= n_max; ++n) {
    worst = std::max(worst, check_completeness(build_finite_povm(n, optimal_reference(n))).residual_norm);
    worst = std::max(worst, check_completeness(build_finite_povm(n, random_reference_state(n, rng))).residual_norm);
  }
  return make_result("povm_builder", "completeness of every constructed POVM", worst, 1e-10);
}

inline CheckResult povm_weights(int n_max = 8) {
  double worst = 0.0;
  auto scan = [&](const std::vector<PovmOutcome>& set) {
    double s = 0.0;
    for (const auto& o : set) {
      s += o.weight;
      if (!(o.weight > 0.0)) worst = std::max(worst, 1.0);
    }
    worst = std::max(worst, std::abs(s - 1.0));
  };
  scan(minimal_povm_n2().outcomes);
  for (int n = 0; n <= n_max; ++n) scan(build_isotropic_set(n));
  return make_result("povm_builder", "weights positive and summing to 1", worst, 1e-13);
}

/// The isotropic set for N is exact up to N/2 and visibly not exact at N/2 + 1.
inline CheckResult isotropic_sharpness(int n_max = 6) {
  double worst_inside = 0.0, weakest_outside = 1e300;
  for (int n = 1; n <= n_max; ++n) {
    const auto set = build_isotropic_set(n);
    worst_inside = std::max(worst_inside, check_discrete_orthogonality(set, n));
    weakest_outside = std::min(weakest_outside, check_discrete_orthogonality(set, n + 2));
  }
  CheckResult r = make_result("povm_builder", "isotropic set exact to N/2, violated at N/2 + 1", worst_inside, 1e-12);
  r.passed = worst_inside <= 1e-12 && weakest_outside > 1e-6;
  return r;
}

inline CheckResult minimal_projective() {
  const CompletenessReport rep = check_completeness(minimal_povm_n2());
  CheckResult r = make_result("povm_builder", "minimal N=2 POVM is projective", rep.pairwise_residual, 1e-12);
  r.passed = r.passed && rep.is_projective;
  return r;
}

inline std::vector<CheckResult> povm_group() {
  return {povm_completeness(), povm_weights(), isotropic_sharpness(), minimal_projective()};
}

// ---- channel simulation -----------------------------------------------------

inline CheckResult probability_vectors(int samples = 200, std::uint64_t seed = 31) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::vector<FinitePovm> povms{minimal_povm_n2()};
  for (int n : {1, 2, 3, 4}) povms.push_back(build_finite_povm(n, random_reference_state(n, rng)));
  for (const auto& p : povms) {
    for (int s = 0; s < samples; ++s) {
      const SignalState a = random_signal_state(p.n_spins, rng);
      const auto probs = outcome_probs(p, a, haar_sample(rng));
      double total = 0.0;
      for (double q : probs) {
        total += q;
        if (q < -1e-14) worst = std::max(worst, 1.0);
      }
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  return make_result("channel_sim", "outcome probabilities >= 0 and sum to 1", worst, 1e-10);
}

inline CheckResult simulation_determinism() {
  const FinitePovm p = minimal_povm_n2();
  const SignalState a = optimal_signal_state(optimal_protocol(2));
  SimOptions one, many;
  one.workers = 1;
  many.workers = 4;
  one.block_size = many.block_size = 1000;
  const SimResult r1 = simulate(p, a, 20000, 7, one);
  const SimResult r2 = simulate(p, a, 20000, 7, many);
  const SimResult r3 = simulate(p, a, 20000, 7, many);
  const bool same = r1.t_mean == r2.t_mean && r2.t_mean == r3.t_mean && r1.std_err == r2.std_err &&
                    r2.std_err == r3.std_err;
  CheckResult r = make_result("channel_sim", "bit-identical results for a fixed seed, any worker count",
                              std::abs(r1.t_mean - r2.t_mean), 0.0);
  r.passed = same;
  return r;
}

/// Also checks every sampled t (hence h = 6 - 2t) stays in range.
inline CheckResult estimator_consistency(int seeds = 100, long long shots = 10000) {
  const FinitePovm p = minimal_povm_n2();
  const ProtocolSolution sol = optimal_protocol(2);
  const SignalState a = optimal_signal_state(sol);
  const double expected = avg_t_quadrature(a, p.reference);
  int inside = 0;
  double t_lo = 3.0, t_hi = -1.0;
  for (int s = 0; s < seeds; ++s) {
    const SimResult r = simulate(p, a, shots, 1000 + static_cast<std::uint64_t>(s));
    if (std::abs(r.t_mean - expected) <= 4.0 * r.std_err) ++inside;
    t_lo = std::min(t_lo, r.t_min);
    t_hi = std::max(t_hi, r.t_max);
  }
  const double fraction = double(inside) / seeds;
  CheckResult r = make_result("channel_sim", "t_mean within 4 std_err of <t> in >= 95% of seeds; h in [0, 8]",
                              1.0 - fraction, 0.05);
  r.passed = fraction >= 0.95 && t_lo >= -1.0 - 1e-12 && t_hi <= 3.0 + 1e-12;
  return r;
}

inline std::vector<CheckResult> channel_group() {
  return {probability_vectors(), simulation_determinism(), estimator_consistency()};
}

inline std::vector<CheckResult> run_all(const Faults& faults = {}) {
  std::vector<CheckResult> all;
  for (auto&& group : {su2_group(faults), fidelity_group(), povm_group(), channel_group()}) {
    all.insert(all.end(), group.begin(), group.end());
  }
  return all;
}

}  // namespace frame_align::verify
