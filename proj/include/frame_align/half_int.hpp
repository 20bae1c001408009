#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace frame_align {

// Angular-momentum labels are carried as doubled integers throughout
// (two_j = 2j, two_m = 2m), the same convention as GSL's coupling functions.
struct HalfInt {
  int twice = 0;

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }

  friend constexpr bool operator==(HalfInt, HalfInt) = default;
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

constexpr bool is_valid_spin(int two_j) { return two_j >= 0; }

constexpr bool is_valid_pair(int two_j, int two_m) {
  return two_j >= 0 && (two_m <= two_j) && (-two_m <= two_j) &&
         ((two_j - two_m) % 2 == 0);
}

inline void require_pair(int two_j, int two_m, const char* where) {
  if (!is_valid_pair(two_j, two_m)) {
    throw std::invalid_argument(std::string(where) + ": invalid label pair (2j=" +
                                std::to_string(two_j) +
                                ", 2m=" + std::to_string(two_m) + ")");
  }
}

// (-1)^k for an integer k given as a doubled value 2k.
constexpr double sign_of_twice(int two_k) { return ((two_k / 2) % 2 == 0) ? 1.0 : -1.0; }

// Index of magnetic label m inside a block stored with m ascending from -j.
constexpr std::size_t m_index(int two_j, int two_m) {
  return static_cast<std::size_t>((two_m + two_j) / 2);
}

constexpr int m_from_index(int two_j, std::size_t i) {
  return -two_j + 2 * static_cast<int>(i);
}

}  // namespace frame_align
