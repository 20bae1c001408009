#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "frame_align/verify.hpp"

namespace fv = frame_align::verify;

namespace {

bool all_passed(const std::vector<fv::CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const fv::CheckResult& r) { return r.passed; });
}

}  // namespace

TEST(Verify, Su2GroupPasses) { EXPECT_TRUE(all_passed(fv::su2_group())); }
TEST(Verify, FidelityGroupPasses) { EXPECT_TRUE(all_passed(fv::fidelity_group())); }
TEST(Verify, PovmGroupPasses) { EXPECT_TRUE(all_passed(fv::povm_group())); }
TEST(Verify, ChannelGroupPasses) { EXPECT_TRUE(all_passed(fv::channel_group())); }

TEST(Verify, CorruptedClebschGordanSignIsCaught) {
  fv::Faults faults;
  faults.corrupt_cg_sign = true;
  const auto r = fv::cg_orthogonality(faults);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.worst, 0.1);
  EXPECT_TRUE(fv::quadrature_exactness(faults).passed);
}

TEST(Verify, UndersizedGridIsCaught) {
  fv::Faults faults;
  faults.undersize_grid = true;
  EXPECT_FALSE(fv::quadrature_exactness(faults).passed);
  EXPECT_TRUE(fv::cg_orthogonality(faults).passed);
}

TEST(Verify, ResultsCarryGroupAndTolerance) {
  for (const auto& r : fv::su2_group()) {
    EXPECT_EQ(r.group, "su2_math");
    EXPECT_FALSE(r.name.empty());
    EXPECT_GE(r.tolerance, 0.0);
  }
}
