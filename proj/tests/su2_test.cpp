#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "frame_align/half_int.hpp"
#include "frame_align/quadrature.hpp"
#include "frame_align/su2.hpp"
#include "oracles.hpp"

namespace fa = frame_align;
using std::numbers::pi;

TEST(ClebschGordan, MatchesCouplingByLoweringOperators) {
  for (int two_j1 = 0; two_j1 <= 4; ++two_j1) {
    for (int two_j2 = 0; two_j2 <= 4; ++two_j2) {
      const oracle::Coupling coupling(two_j1, two_j2);
      for (int two_J = std::abs(two_j1 - two_j2); two_J <= two_j1 + two_j2; two_J += 2) {
        for (int two_m1 = -two_j1; two_m1 <= two_j1; two_m1 += 2) {
          for (int two_m2 = -two_j2; two_m2 <= two_j2; two_m2 += 2) {
            const int two_M = two_m1 + two_m2;
            if (std::abs(two_M) > two_J) continue;
            EXPECT_NEAR(fa::clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_J, two_M),
                        coupling(two_m1, two_m2, two_J, two_M), 1e-12)
                << two_j1 << " " << two_m1 << " " << two_j2 << " " << two_m2 << " " << two_J;
          }
        }
      }
    }
  }
}

TEST(ClebschGordan, KnownValues) {
  EXPECT_NEAR(fa::clebsch_gordan(1, 1, 1, 1, 2, 2), 1.0, 1e-15);
  EXPECT_NEAR(fa::clebsch_gordan(2, 2, 2, -2, 2, 0), 1.0 / std::sqrt(2.0), 1e-15);
  for (int two_j = 0; two_j <= 6; ++two_j) {
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      EXPECT_NEAR(fa::clebsch_gordan(two_j, two_m, 0, 0, two_j, two_m), 1.0, 1e-14);
    }
  }
}

TEST(ClebschGordan, CondonShortleyPhase) {
  for (int two_j1 = 0; two_j1 <= 6; ++two_j1) {
    for (int two_j2 = 0; two_j2 <= 6; ++two_j2) {
      for (int two_J = std::abs(two_j1 - two_j2); two_J <= two_j1 + two_j2; two_J += 2) {
        EXPECT_GT(fa::clebsch_gordan(two_j1, two_j1, two_j2, two_J - two_j1, two_J, two_J), 0.0);
      }
    }
  }
}

TEST(ClebschGordan, SelectionRulesGiveZero) {
  EXPECT_EQ(fa::clebsch_gordan(2, 2, 2, 0, 2, 0), 0.0);  // M mismatch
  EXPECT_EQ(fa::clebsch_gordan(2, 0, 2, 0, 6, 0), 0.0);  // triangle
  EXPECT_EQ(fa::clebsch_gordan(2, 0, 2, 0, 2, 0), 0.0);  // parity zero of <1 0; 1 0|1 0>
}

TEST(ClebschGordan, LargeSpinsStayFinite) {
  const double v = fa::clebsch_gordan(4000, 4000, 2, -2, 4000, 3998);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v * v, 1.0 / 2001.0, 1e-14);
}

TEST(ClebschGordan, RejectsInvalidLabels) {
  EXPECT_THROW(fa::clebsch_gordan(1, 0, 1, 1, 2, 1), std::invalid_argument);
  EXPECT_THROW(fa::clebsch_gordan(-2, 0, 0, 0, 0, 0), std::invalid_argument);
}

TEST(WignerSmallD, KnownValues) {
  EXPECT_NEAR(fa::wigner_small_d(2, 2, 2, pi / 2), 0.5, 1e-15);
  EXPECT_NEAR(fa::wigner_small_d(2, 2, 0, pi / 2), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(fa::wigner_small_d(1, 1, -1, 0.7), -std::sin(0.35), 1e-15);
  for (int two_j = 0; two_j <= 8; ++two_j) {
    for (int a = -two_j; a <= two_j; a += 2) {
      for (int b = -two_j; b <= two_j; b += 2) {
        EXPECT_EQ(fa::wigner_small_d(two_j, a, b, 0.0), a == b ? 1.0 : 0.0);
      }
    }
  }
}

TEST(WignerD, MatchesExponentialOfSpinMatrices) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const fa::EulerAngles g = fa::haar_sample(rng);
    for (int two_j = 0; two_j <= 7; ++two_j) {
      const Eigen::MatrixXcd expected = oracle::rotation_operator(two_j, g.alpha, g.beta, g.gamma);
      const Eigen::MatrixXcd got = fa::wigner_D_matrix(two_j, g);
      EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-12) << "two_j=" << two_j;
      for (int a = -two_j; a <= two_j; a += 2) {
        for (int b = -two_j; b <= two_j; b += 2) {
          EXPECT_LT(std::abs(fa::wigner_D(two_j, a, b, g) - got(fa::m_index(two_j, a), fa::m_index(two_j, b))),
                    1e-15);
        }
      }
    }
  }
}

TEST(WignerD, SpinHalfRotationByPiAboutY) {
  // Quaternion (0, 0, 1, 0): U = -i sigma_y; rows and columns ordered m = -1/2, +1/2.
  const Eigen::MatrixXcd d = fa::wigner_D_matrix(1, {0.0, pi, 0.0});
  EXPECT_NEAR(std::abs(d(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(d(0, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(d(1, 0).real(), -1.0, 1e-15);
}

TEST(WignerD, FullTurnIsMinusOneForHalfIntegerSpin) {
  const fa::EulerAngles g{2 * pi, 0.0, 0.0};
  for (int two_j = 0; two_j <= 5; ++two_j) {
    const Eigen::MatrixXcd d = fa::wigner_D_matrix(two_j, g);
    const double sign = two_j % 2 ? -1.0 : 1.0;
    EXPECT_LT((d - sign * Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(TraceRep1, MatchesTraceOfSpinOneMatrixAndRotationMatrix) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const fa::EulerAngles g = fa::haar_sample(rng);
    EXPECT_NEAR(fa::trace_rep1(g), fa::wigner_D_matrix(2, g).trace().real(), 1e-14);
    EXPECT_NEAR(fa::trace_rep1(g), oracle::rotation_matrix(g.alpha, g.beta, g.gamma).trace(), 1e-14);
  }
  EXPECT_DOUBLE_EQ(fa::trace_rep1(fa::identity_rotation), 3.0);
  EXPECT_NEAR(fa::trace_rep1({pi, 0.0, 0.0}), -1.0, 1e-15);
}

TEST(HalfInt, LabelHelpers) {
  EXPECT_TRUE(fa::is_valid_pair(3, -1));
  EXPECT_FALSE(fa::is_valid_pair(3, 0));
  EXPECT_FALSE(fa::is_valid_pair(2, 4));
  EXPECT_EQ(fa::m_index(4, -4), 0u);
  EXPECT_EQ(fa::m_index(4, 4), 4u);
  EXPECT_EQ(fa::sign_of_twice(2), -1);
  EXPECT_EQ(fa::sign_of_twice(4), 1);
  EXPECT_EQ(fa::sign_of_twice(-2), -1);
}
