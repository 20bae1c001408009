#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frame_align/quadrature.hpp"
#include "frame_align/states.hpp"
#include "frame_align/su2.hpp"

namespace frame_align {

using PovmOutcome = GridNode;

/// Covariant measurement with elements c_r U(g_r)|B><B|U(g_r)^dagger, sum c_r = 1.
struct FinitePovm {
  int n_spins = 0;
  ReferenceState reference;
  std::vector<PovmOutcome> outcomes;
};

struct CompletenessReport {
  int dimension = 0;
  double residual_norm = 0.0;      // max |(sum_r c_r b_r b_r^dagger - I)_{ik}|
  bool is_projective = false;
  double pairwise_residual = 0.0;  // max over r, s of max-abs(O_r O_s - delta_rs O_r)
};

/// Group elements isotropically distributed up to spin N/2: N+1 equidistant
/// alpha and gamma, floor(N/2)+1 Gauss-Legendre nodes in cos(beta).
inline std::vector<PovmOutcome> build_isotropic_set(int n_spins) {
  if (n_spins < 0) throw std::invalid_argument("build_isotropic_set: negative number of spins");
  return tensor_grid(n_spins + 1, n_spins / 2 + 1).nodes;
}

/// A (2j, 2n) column of the D-matrices whose orthogonality is checked.
struct DColumn {
  int two_j;
  int two_n;
};

/// Max deviation of sum_r c_r D^j_{mn}(g_r) conj(D^j'_{m'n'}(g_r)) from
/// delta/(2j+1), over rows m, m' and the given columns (n, n').
inline double check_discrete_orthogonality(const std::vector<PovmOutcome>& set,
                                           const std::vector<DColumn>& columns) {
  // One D matrix per (outcome, spin) keeps this at O(R * sum dim^2).
  std::vector<int> spins;
  for (const auto& c : columns) {
    if (std::find(spins.begin(), spins.end(), c.two_j) == spins.end()) spins.push_back(c.two_j);
  }
  std::vector<std::vector<Eigen::MatrixXcd>> d(spins.size());
  for (std::size_t s = 0; s < spins.size(); ++s) {
    for (const auto& o : set) d[s].push_back(wigner_D_matrix(spins[s], o.g));
  }
  const auto spin_slot = [&](int two_j) {
    return static_cast<std::size_t>(std::find(spins.begin(), spins.end(), two_j) - spins.begin());
  };

  double worst = 0.0;
  for (const auto& c1 : columns) {
    for (const auto& c2 : columns) {
      if ((c1.two_j - c2.two_j) % 2 != 0) continue;
      const std::size_t s1 = spin_slot(c1.two_j), s2 = spin_slot(c2.two_j);
      const auto n1 = static_cast<Eigen::Index>(m_index(c1.two_j, c1.two_n));
      const auto n2 = static_cast<Eigen::Index>(m_index(c2.two_j, c2.two_n));
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(c1.two_j + 1, c2.two_j + 1);
      for (std::size_t r = 0; r < set.size(); ++r) {
        acc += set[r].weight * d[s1][r].col(n1) * d[s2][r].col(n2).adjoint();
      }
      if (c1.two_j == c2.two_j && c1.two_n == c2.two_n) {
        acc -= Eigen::MatrixXcd::Identity(c1.two_j + 1, c1.two_j + 1) / double(c1.two_j + 1);
      }
      worst = std::max(worst, acc.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// Every column of every spin up to j_max.
inline double check_discrete_orthogonality(const std::vector<PovmOutcome>& set, int two_j_max) {
  std::vector<DColumn> columns;
  for (int two_j = 0; two_j <= two_j_max; ++two_j) {
    for (int two_n = -two_j; two_n <= two_j; two_n += 2) columns.push_back({two_j, two_n});
  }
  return check_discrete_orthogonality(set, columns);
}

inline FinitePovm build_finite_povm(int n_spins, const ReferenceState& reference) {
  detail::require_same_ladder(reference, n_spins, "build_finite_povm");
  return {n_spins, reference, build_isotropic_set(n_spins)};
}

/// b(g) = sum_j sqrt(2j+1) D^j(g) B^j on the multiplicity-free space, blocks
/// stacked in ladder order.
inline Eigen::VectorXcd rotated_reference(const ReferenceState& b, const EulerAngles& g) {
  Eigen::VectorXcd out(ladder_dimension(b.n_spins));
  Eigen::Index offset = 0;
  for (const auto& block : b.blocks) {
    const Eigen::Index dim = block.two_j + 1;
    const Eigen::Map<const Eigen::VectorXcd> amps(block.amps.data(), dim);
    out.segment(offset, dim) = std::sqrt(double(dim)) * (wigner_D_matrix(block.two_j, g) * amps);
    offset += dim;
  }
  return out;
}

inline CompletenessReport check_completeness(const FinitePovm& p) {
  CompletenessReport report;
  report.dimension = ladder_dimension(p.n_spins);
  const Eigen::Index dim = report.dimension;

  std::vector<Eigen::VectorXcd> b;
  b.reserve(p.outcomes.size());
  for (const auto& o : p.outcomes) b.push_back(rotated_reference(p.reference, o.g));

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t r = 0; r < b.size(); ++r) sum += p.outcomes[r].weight * b[r] * b[r].adjoint();
  sum -= Eigen::MatrixXcd::Identity(dim, dim);
  report.residual_norm = sum.cwiseAbs().maxCoeff();

  // O_r O_s = c_r c_s <b_r|b_s> b_r b_s^dagger, so each product has a closed-form max entry.
  std::vector<double> peak(b.size()), norm2(b.size());
  for (std::size_t r = 0; r < b.size(); ++r) {
    peak[r] = b[r].cwiseAbs2().maxCoeff();
    norm2[r] = b[r].squaredNorm();
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < b.size(); ++r) {
    const double cr = p.outcomes[r].weight;
    worst = std::max(worst, std::abs(cr * norm2[r] - 1.0) * cr * peak[r]);
    for (std::size_t s = r + 1; s < b.size(); ++s) {
      const double cs = p.outcomes[s].weight;
      worst = std::max(worst, cr * cs * std::abs(b[r].dot(b[s])) * std::sqrt(peak[r] * peak[s]));
    }
  }
  report.pairwise_residual = worst;
  report.is_projective = worst <= 1e-10;
  return report;
}

/// Four-outcome von Neumann measurement for two spins. Reference B_op
/// (|1,1> and |0,0> blocks, i.e. the unit vector (sqrt3/2)|1,1> + (1/2)|0,0>
/// after the sqrt(2j+1) weights and the factor 1/2), three frames with
/// alpha_r = 2 pi (r-1)/3, gamma_r = pi - alpha_r, cos(beta_r) = -1/3 plus the
/// identity. The four z-axes are the vertices of a regular tetrahedron.
inline FinitePovm minimal_povm_n2() {
  FinitePovm p;
  p.n_spins = 2;
  p.reference = optimal_reference(2);
  const double beta = std::acos(-1.0 / 3.0);
  for (int r = 1; r <= 3; ++r) {
    const double alpha = (r - 1) * two_pi / 3.0;
    p.outcomes.push_back({canonicalize({alpha, beta, std::numbers::pi - alpha}), 0.25});
  }
  p.outcomes.push_back({identity_rotation, 0.25});
  return p;
}

}  // namespace frame_align
