#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "frame_align/half_int.hpp"
#include "frame_align/quadrature.hpp"

namespace frame_align {

using complex = std::complex<double>;

/// Spins on the N-spin ladder, ascending: 0 or 1/2 up to N/2 (doubled).
inline std::vector<int> ladder(int n_spins) {
  if (n_spins < 0) throw std::invalid_argument("ladder: negative number of spins");
  std::vector<int> out;
  for (int two_j = n_spins % 2; two_j <= n_spins; two_j += 2) out.push_back(two_j);
  return out;
}

/// Dimension of the multiplicity-free space, sum over the ladder of 2j + 1.
inline int ladder_dimension(int n_spins) {
  int d = 0;
  for (int two_j : ladder(n_spins)) d += two_j + 1;
  return d;
}

/// Amplitudes of one irrep, indexed by m ascending from -j.
struct IrrepBlock {
  int two_j = 0;
  std::vector<complex> amps;

  IrrepBlock() = default;
  explicit IrrepBlock(int two_j_) : two_j(two_j_), amps(static_cast<std::size_t>(two_j_ + 1)) {}

  complex& at_m(int two_m) { return amps[m_index(two_j, two_m)]; }
  complex at_m(int two_m) const { return amps[m_index(two_j, two_m)]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
  }
};

/// Bob's |B>, one block per irrep, each block of unit norm. The sqrt(2j+1)
/// factors of the physical state are applied by the operations.
struct ReferenceState {
  int n_spins = 0;
  std::vector<IrrepBlock> blocks;
};

/// Alice's |A>, unit norm over all blocks together.
struct SignalState {
  int n_spins = 0;
  std::vector<IrrepBlock> blocks;
};

/// C^j over the ladder, sum |C^j|^2 = 1.
struct ReducedWeights {
  std::vector<complex> c;
};

namespace detail {

inline std::vector<IrrepBlock> empty_blocks(int n_spins) {
  std::vector<IrrepBlock> blocks;
  for (int two_j : ladder(n_spins)) blocks.emplace_back(two_j);
  return blocks;
}

template <class State>
void require_same_ladder(const State& s, int n_spins, const char* where) {
  const auto spins = ladder(n_spins);
  bool ok = s.n_spins == n_spins && s.blocks.size() == spins.size();
  for (std::size_t i = 0; ok && i < spins.size(); ++i) {
    ok = s.blocks[i].two_j == spins[i] && s.blocks[i].amps.size() == std::size_t(spins[i] + 1);
  }
  if (!ok) throw std::invalid_argument(std::string(where) + ": ladder mismatch");
}

template <class Rng>
complex gaussian_amplitude(Rng& rng) {
  // Box-Muller on our own uniforms keeps the stream reproducible across standard libraries.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace detail

inline double total_norm_squared(const std::vector<IrrepBlock>& blocks) {
  double s = 0.0;
  for (const auto& b : blocks) s += b.norm_squared();
  return s;
}

/// B_op: every block is |j, j>.
inline ReferenceState optimal_reference(int n_spins) {
  ReferenceState b{n_spins, detail::empty_blocks(n_spins)};
  for (auto& block : b.blocks) block.at_m(block.two_j) = 1.0;
  return b;
}

/// A^j_m = C^j B^j_m.
inline SignalState assemble_signal(const ReducedWeights& c, const ReferenceState& b) {
  if (c.c.size() != b.blocks.size()) throw std::invalid_argument("assemble_signal: size mismatch");
  SignalState a{b.n_spins, b.blocks};
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    for (auto& amp : a.blocks[i].amps) amp *= c.c[i];
  }
  return a;
}

template <class Rng>
ReferenceState random_reference_state(int n_spins, Rng& rng) {
  ReferenceState b{n_spins, detail::empty_blocks(n_spins)};
  for (auto& block : b.blocks) {
    for (auto& amp : block.amps) amp = detail::gaussian_amplitude(rng);
    const double n = std::sqrt(block.norm_squared());
    for (auto& amp : block.amps) amp /= n;
  }
  return b;
}

template <class Rng>
SignalState random_signal_state(int n_spins, Rng& rng) {
  SignalState a{n_spins, detail::empty_blocks(n_spins)};
  for (auto& block : a.blocks) {
    for (auto& amp : block.amps) amp = detail::gaussian_amplitude(rng);
  }
  const double n = std::sqrt(total_norm_squared(a.blocks));
  for (auto& block : a.blocks) {
    for (auto& amp : block.amps) amp /= n;
  }
  return a;
}

template <class Rng>
ReducedWeights random_weights(std::size_t size, Rng& rng) {
  ReducedWeights w{std::vector<complex>(size)};
  double s = 0.0;
  for (auto& c : w.c) {
    c = detail::gaussian_amplitude(rng);
    s += std::norm(c);
  }
  for (auto& c : w.c) c /= std::sqrt(s);
  return w;
}

}  // namespace frame_align
