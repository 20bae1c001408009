#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "frame_align/euler.hpp"
#include "frame_align/quadrature.hpp"
#include "oracles.hpp"

namespace fa = frame_align;
using std::numbers::pi;

namespace {

Eigen::Matrix3d matrix_of(const fa::EulerAngles& g) { return oracle::rotation_matrix(g.alpha, g.beta, g.gamma); }

void expect_canonical(const fa::EulerAngles& g) {
  EXPECT_GE(g.alpha, 0.0);
  EXPECT_LT(g.alpha, fa::two_pi);
  EXPECT_GE(g.gamma, 0.0);
  EXPECT_LT(g.gamma, fa::two_pi);
  EXPECT_GE(g.beta, 0.0);
  EXPECT_LE(g.beta, pi);
}

}  // namespace

TEST(Euler, ComposeMatchesRotationMatrices) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto g1 = fa::haar_sample(rng), g2 = fa::haar_sample(rng);
    const auto g = fa::compose(g1, g2);
    expect_canonical(g);
    EXPECT_LT((matrix_of(g) - matrix_of(g1) * matrix_of(g2)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Euler, InverseUndoesRotation) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto g = fa::haar_sample(rng);
    EXPECT_TRUE(fa::same_rotation(fa::compose(g, fa::inverse(g)), fa::identity_rotation));
    EXPECT_LT((matrix_of(fa::inverse(g)) - matrix_of(g).transpose()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Euler, CanonicalizeArbitraryTriples) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const fa::EulerAngles raw{u(rng), u(rng), u(rng)};
    const auto g = fa::canonicalize(raw);
    expect_canonical(g);
    EXPECT_LT((matrix_of(g) - matrix_of(raw)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Euler, InteriorAnglesRoundTrip) {
  const fa::EulerAngles g{1.2, 0.8, 5.9};
  const auto back = fa::from_quaternion(fa::to_quaternion(g));
  EXPECT_NEAR(back.alpha, g.alpha, 1e-14);
  EXPECT_NEAR(back.beta, g.beta, 1e-14);
  EXPECT_NEAR(back.gamma, g.gamma, 1e-14);
}

TEST(Euler, GimbalLockFoldsIntoAlpha) {
  const auto north = fa::canonicalize({1.0, 0.0, 2.0});
  EXPECT_NEAR(north.alpha, 3.0, 1e-14);
  EXPECT_EQ(north.beta, 0.0);
  EXPECT_EQ(north.gamma, 0.0);

  const auto south = fa::canonicalize({1.0, pi, 0.5});
  EXPECT_NEAR(south.alpha, 0.5, 1e-14);
  EXPECT_EQ(south.beta, pi);
  EXPECT_EQ(south.gamma, 0.0);
}

TEST(Euler, DistanceIgnoresDoubleCoverSign) {
  const fa::EulerAngles g{0.4, 1.1, 2.3};
  const fa::EulerAngles turned{0.4 + fa::two_pi, 1.1, 2.3};
  EXPECT_LT(fa::rotation_distance(g, turned), 1e-15);
  const double d = fa::rotation_distance(g, {0.4 + 1e-10, 1.1, 2.3});
  EXPECT_NEAR(d, 0.5e-10, 1e-15);
  EXPECT_FALSE(fa::same_rotation(g, {0.4, 1.1 + 1e-9, 2.3}));
}

TEST(Haar, UniformAndCosBetaMoments) {
  std::mt19937_64 rng(1);
  const int n = 200000;
  double mean_cos = 0.0, mean_cos2 = 0.0, mean_trace = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = fa::uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto g = fa::haar_sample(rng);
    mean_cos += std::cos(g.beta) / n;
    mean_cos2 += std::cos(g.beta) * std::cos(g.beta) / n;
    mean_trace += matrix_of(g).trace() / n;
  }
  EXPECT_NEAR(mean_cos, 0.0, 0.01);
  EXPECT_NEAR(mean_cos2, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(mean_trace, 0.0, 0.02);
}
