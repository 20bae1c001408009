#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace frame_align {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Rotation in z-y-z Euler angles: R = Rz(alpha) Ry(beta) Rz(gamma).
/// Canonical ranges are alpha, gamma in [0, 2pi) and beta in [0, pi].
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

inline constexpr EulerAngles identity_rotation{0.0, 0.0, 0.0};

/// Unit 4-vector (a, b, c, d) for the SU(2) matrix a*1 - i(b sx + c sy + d sz).
/// Multiplication is the Hamilton product, so it composes like the matrices.
struct UnitQuaternion {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;

  friend UnitQuaternion operator*(const UnitQuaternion& p, const UnitQuaternion& q) {
    return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
  }

  UnitQuaternion conjugate() const { return {a, -b, -c, -d}; }
};

namespace detail {

inline double wrap_two_pi(double x) {
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

// sin(beta/2) below this is treated as beta == 0 (and likewise cos for beta == pi).
inline constexpr double gimbal_eps = 1e-14;

}  // namespace detail

inline UnitQuaternion to_quaternion(const EulerAngles& g) {
  const double ca = std::cos(0.5 * g.alpha), sa = std::sin(0.5 * g.alpha);
  const double cb = std::cos(0.5 * g.beta), sb = std::sin(0.5 * g.beta);
  const double cg = std::cos(0.5 * g.gamma), sg = std::sin(0.5 * g.gamma);
  const UnitQuaternion qa{ca, 0.0, 0.0, sa};
  const UnitQuaternion qb{cb, 0.0, sb, 0.0};
  const UnitQuaternion qg{cg, 0.0, 0.0, sg};
  return qa * qb * qg;
}

/// Recovers canonical Euler angles. At beta = 0 or pi the rotation is folded
/// into alpha and gamma is set to 0.
inline EulerAngles from_quaternion(const UnitQuaternion& q) {
  // U11 = a - i d = e^{-i(alpha+gamma)/2} cos(beta/2)
  // U21 = c - i b = e^{+i(alpha-gamma)/2} sin(beta/2)
  const std::complex<double> u11(q.a, -q.d);
  const std::complex<double> u21(q.c, -q.b);
  const double cos_half = std::abs(u11);
  const double sin_half = std::abs(u21);
  EulerAngles g;
  g.beta = 2.0 * std::atan2(sin_half, cos_half);
  if (sin_half < detail::gimbal_eps) {
    g.beta = 0.0;
    g.alpha = detail::wrap_two_pi(-2.0 * std::arg(u11));
    g.gamma = 0.0;
  } else if (cos_half < detail::gimbal_eps) {
    g.beta = std::numbers::pi;
    g.alpha = detail::wrap_two_pi(2.0 * std::arg(u21));
    g.gamma = 0.0;
  } else {
    const double sum = -2.0 * std::arg(u11);
    const double diff = 2.0 * std::arg(u21);
    g.alpha = detail::wrap_two_pi(0.5 * (sum + diff));
    g.gamma = detail::wrap_two_pi(0.5 * (sum - diff));
  }
  return g;
}

/// Maps an arbitrary real triple onto the canonical ranges.
inline EulerAngles canonicalize(const EulerAngles& g) { return from_quaternion(to_quaternion(g)); }

/// compose(g1, g2) is "apply g2, then g1": R(compose) = R(g1) R(g2).
inline EulerAngles compose(const EulerAngles& g1, const EulerAngles& g2) {
  return from_quaternion(to_quaternion(g1) * to_quaternion(g2));
}

inline EulerAngles inverse(const EulerAngles& g) {
  return from_quaternion(to_quaternion(g).conjugate());
}

/// Same rotation, i.e. double-cover vectors equal up to global sign.
inline double rotation_distance(const EulerAngles& g1, const EulerAngles& g2) {
  const UnitQuaternion p = to_quaternion(g1), q = to_quaternion(g2);
  const double minus = std::hypot(std::hypot(p.a - q.a, p.b - q.b), std::hypot(p.c - q.c, p.d - q.d));
  const double plus = std::hypot(std::hypot(p.a + q.a, p.b + q.b), std::hypot(p.c + q.c, p.d + q.d));
  return std::min(minus, plus);
}

inline bool same_rotation(const EulerAngles& g1, const EulerAngles& g2, double tol = 1e-12) {
  return rotation_distance(g1, g2) <= tol;
}

}  // namespace frame_align
