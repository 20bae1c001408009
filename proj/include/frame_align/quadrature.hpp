#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "frame_align/euler.hpp"
#include "frame_align/legendre.hpp"

namespace frame_align {

struct GridNode {
  EulerAngles g;
  double weight;
};

/// Weighted group elements; weights sum to 1 (unit Haar mass).
struct GroupGrid {
  std::vector<GridNode> nodes;

  double total_weight() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.weight;
    return s;
  }
};

/// Tensor rule: n_angle equidistant alpha and gamma, Gauss-Legendre in cos(beta).
inline GroupGrid tensor_grid(int n_angle, int n_beta) {
  if (n_angle < 1 || n_beta < 1) throw std::invalid_argument("tensor_grid: sizes must be >= 1");
  const auto rule = gauss_legendre(n_beta);
  GroupGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(n_angle) * n_angle * n_beta);
  const double angle_step = two_pi / n_angle;
  const double angle_mass = 1.0 / (double(n_angle) * n_angle);
  for (int a = 0; a < n_angle; ++a) {
    for (const auto& q : rule) {
      const double beta = std::acos(q.node);
      for (int c = 0; c < n_angle; ++c) {
        grid.nodes.push_back({{a * angle_step, beta, c * angle_step}, 0.5 * q.weight * angle_mass});
      }
    }
  }
  return grid;
}

/// Integrates D^j_{Mm} conj(D^j'_{M'm'}) exactly for all j, j' <= j_max of
/// equal parity: 2 j_max + 1 angles per Euler azimuth, floor(j_max) + 1
/// Gauss-Legendre nodes in cos(beta).
inline GroupGrid su2_quadrature_grid(int two_j_max) {
  if (two_j_max < 0) throw std::invalid_argument("su2_quadrature_grid: negative spin");
  return tensor_grid(two_j_max + 1, two_j_max / 2 + 1);
}

/// Uniform double in [0, 1) from the top 53 bits, independent of the
/// standard library's distribution implementations.
template <class Rng>
double uniform01(Rng& rng) {
  static_assert(sizeof(typename Rng::result_type) >= 8, "needs a 64-bit generator");
  return static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) * 0x1.0p-53;
}

/// Haar-distributed rotation: alpha, gamma uniform, cos(beta) uniform.
template <class Rng>
EulerAngles haar_sample(Rng& rng) {
  EulerAngles g;
  g.alpha = two_pi * uniform01(rng);
  const double cos_beta = 1.0 - 2.0 * uniform01(rng);
  g.beta = std::acos(cos_beta);
  g.gamma = two_pi * uniform01(rng);
  return g;
}

}  // namespace frame_align
