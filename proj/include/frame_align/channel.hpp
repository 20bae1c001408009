#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "frame_align/povm.hpp"
#include "frame_align/quadrature.hpp"
#include "frame_align/states.hpp"
#include "frame_align/su2.hpp"

namespace frame_align {

/// <B| U(g) |A> = sum_j sqrt(2j+1) sum_{m m'} conj(B^j_m) D^j_{m m'}(g) A^j_{m'}.
inline complex overlap(const ReferenceState& b, const SignalState& a, const EulerAngles& g) {
  detail::require_same_ladder(a, b.n_spins, "overlap");
  detail::require_same_ladder(b, a.n_spins, "overlap");
  complex total = 0.0;
  for (std::size_t i = 0; i < b.blocks.size(); ++i) {
    const int dim = b.blocks[i].two_j + 1;
    const Eigen::Map<const Eigen::VectorXcd> bj(b.blocks[i].amps.data(), dim);
    const Eigen::Map<const Eigen::VectorXcd> aj(a.blocks[i].amps.data(), dim);
    total += std::sqrt(double(dim)) * bj.dot(wigner_D_matrix(b.blocks[i].two_j, g) * aj);
  }
  return total;
}

/// Frame error sum_a |n_a(g) - n_a(g')|^2 = 6 - 2 tr U1(g'^-1 g).
inline double error_h(const EulerAngles& g, const EulerAngles& gp) {
  return 6.0 - 2.0 * trace_rep1(compose(inverse(gp), g));
}

/// Integral of |<B|U(g)|A>|^2 tr U1(g) over the group on a tensor grid that
/// is exact for this integrand (two D's up to spin N/2 and one D^1).
inline double avg_t_quadrature(const SignalState& a, const ReferenceState& b) {
  const GroupGrid grid = su2_quadrature_grid(b.n_spins + 2);
  double total = 0.0;
  for (const auto& node : grid.nodes) {
    total += node.weight * std::norm(overlap(b, a, node.g)) * trace_rep1(node.g);
  }
  return total;
}

class IncompletePovmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Eigen::VectorXcd rotated_signal(const SignalState& a, const EulerAngles& g) {
  Eigen::VectorXcd out(ladder_dimension(a.n_spins));
  Eigen::Index offset = 0;
  for (const auto& block : a.blocks) {
    const Eigen::Index dim = block.two_j + 1;
    const Eigen::Map<const Eigen::VectorXcd> amps(block.amps.data(), dim);
    out.segment(offset, dim) = wigner_D_matrix(block.two_j, g) * amps;
    offset += dim;
  }
  return out;
}

// Outcome vectors b_r, computed once per measurement.
struct PreparedPovm {
  std::vector<Eigen::VectorXcd> b;
  std::vector<double> weight;
  std::vector<EulerAngles> inverse_guess;

  explicit PreparedPovm(const FinitePovm& p) {
    for (const auto& o : p.outcomes) {
      b.push_back(rotated_reference(p.reference, o.g));
      weight.push_back(o.weight);
      inverse_guess.push_back(inverse(o.g));
    }
  }

  void probabilities(const Eigen::VectorXcd& rotated_a, std::vector<double>& out) const {
    out.resize(b.size());
    for (std::size_t r = 0; r < b.size(); ++r) {
      out[r] = std::max(0.0, weight[r] * std::norm(b[r].dot(rotated_a)));
    }
  }
};

}  // namespace detail

/// p_r = c_r |<B| U(g_r)^dagger U(g) |A>|^2.
inline std::vector<double> outcome_probs(const FinitePovm& p, const SignalState& a, const EulerAngles& g) {
  detail::require_same_ladder(a, p.n_spins, "outcome_probs");
  const detail::PreparedPovm prepared(p);
  std::vector<double> probs;
  prepared.probabilities(detail::rotated_signal(a, g), probs);
  return probs;
}

struct SimResult {
  long long shots = 0;
  double t_mean = 0.0;
  double h_mean = 6.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  double t_min = 0.0;
  double t_max = 0.0;
};

struct SimOptions {
  /// Replace Bob's guess by this element regardless of the outcome (control run).
  std::optional<EulerAngles> fixed_guess;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Block b draws from a generator seeded with seed + b; the result depends
  /// only on (seed, shots, block_size), never on the worker count.
  long long block_size = 1 << 15;
};

namespace detail {

struct BlockStats {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double t_min = 3.0;
  double t_max = -1.0;
};

inline BlockStats merge(const BlockStats& x, const BlockStats& y) {
  if (x.count == 0) return y;
  if (y.count == 0) return x;
  BlockStats out;
  out.count = x.count + y.count;
  const double delta = y.mean - x.mean;
  out.mean = x.mean + delta * double(y.count) / double(out.count);
  out.m2 = x.m2 + y.m2 + delta * delta * double(x.count) * double(y.count) / double(out.count);
  out.t_min = std::min(x.t_min, y.t_min);
  out.t_max = std::max(x.t_max, y.t_max);
  return out;
}

}  // namespace detail

/// Monte-Carlo run of the protocol: Alice's frame g is Haar-random, Bob gets
/// outcome r with probability p_r(g) and guesses g_r; t = tr U1(g_r^-1 g).
inline SimResult simulate(const FinitePovm& p, const SignalState& a, long long shots, std::uint64_t seed,
                          const SimOptions& options = {}) {
  if (shots < 1) throw std::invalid_argument("simulate: shots must be >= 1");
  if (options.block_size < 1) throw std::invalid_argument("simulate: block_size must be >= 1");
  detail::require_same_ladder(a, p.n_spins, "simulate");
  const detail::PreparedPovm prepared(p);
  const std::optional<EulerAngles> fixed_inverse =
      options.fixed_guess ? std::optional<EulerAngles>(inverse(*options.fixed_guess)) : std::nullopt;

  const long long n_blocks = (shots + options.block_size - 1) / options.block_size;
  std::vector<detail::BlockStats> stats(static_cast<std::size_t>(n_blocks));

  const auto run_block = [&](long long block) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(block));
    const long long begin = block * options.block_size;
    const long long end = std::min(shots, begin + options.block_size);
    detail::BlockStats s;
    std::vector<double> probs;
    for (long long shot = begin; shot < end; ++shot) {
      const EulerAngles g = haar_sample(rng);
      prepared.probabilities(detail::rotated_signal(a, g), probs);
      double total = 0.0;
      for (double q : probs) total += q;
      if (std::abs(total - 1.0) > 1e-6) {
        throw IncompletePovmError("simulate: outcome probabilities sum to " + std::to_string(total) +
                                  "; the measurement is not complete");
      }
      const double u = uniform01(rng) * total;
      std::size_t r = 0;
      double cumulative = probs[0];
      while (cumulative <= u && r + 1 < probs.size()) cumulative += probs[++r];
      const EulerAngles& guess_inverse = fixed_inverse ? *fixed_inverse : prepared.inverse_guess[r];
      const double t = trace_rep1(compose(guess_inverse, g));
      ++s.count;
      const double delta = t - s.mean;
      s.mean += delta / double(s.count);
      s.m2 += delta * (t - s.mean);
      s.t_min = std::min(s.t_min, t);
      s.t_max = std::max(s.t_max, t);
    }
    stats[static_cast<std::size_t>(block)] = s;
  };

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long long>(workers, n_blocks));
  if (workers <= 1) {
    for (long long block = 0; block < n_blocks; ++block) run_block(block);
  } else {
    std::atomic<long long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (long long block = next++; block < n_blocks; block = next++) run_block(block);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n_blocks;
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  detail::BlockStats all;
  for (const auto& s : stats) all = detail::merge(all, s);
  SimResult out;
  out.shots = shots;
  out.seed = seed;
  out.t_mean = all.mean;
  out.h_mean = 6.0 - 2.0 * all.mean;
  out.std_err = shots > 1 ? std::sqrt(all.m2 / double(shots - 1) / double(shots)) : 0.0;
  out.t_min = all.t_min;
  out.t_max = all.t_max;
  return out;
}

}  // namespace frame_align
