#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#include "frame_align/povm_io.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FRAME_ALIGN_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, OptimalPrintsEigenvalueAndClosedForm) {
  const auto r = run("optimal --n 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.879152869605895"), std::string::npos);
  EXPECT_NE(r.out.find("(3+sqrt(57))/12"), std::string::npos);

  const auto j = run("optimal --n 3 --format json");
  ASSERT_EQ(j.code, 0);
  const auto parsed = nlohmann::json::parse(j.out);
  EXPECT_NEAR(parsed["lambda_op"].get<double>(), 1.1862344381640968, 1e-14);
  EXPECT_EQ(parsed["weights"].size(), 2u);
}

TEST(Cli, TableShowsBothLadderReadings) {
  const auto r = run("table --n-list 10 --format json");
  ASSERT_EQ(r.code, 0);
  const auto rows = nlohmann::json::parse(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0]["lambda_top_half_n"].get<double>(), 2.244263322593746, 1e-13);
  EXPECT_NEAR(rows[0]["lambda_top_n"].get<double>(), 2.6201823164264746, 1e-13);
  EXPECT_DOUBLE_EQ(rows[0]["reference_value"].get<double>(), 2.6202);
}

TEST(Cli, FitReportsCoefficientsAndResiduals) {
  const auto r = run("fit --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["a"].get<double>(), 3.87522737, 1e-7);
  EXPECT_NEAR(j["b"].get<double>(), 11.64360148, 1e-7);
  EXPECT_EQ(j["points"].size(), 5u);
  EXPECT_EQ(run("fit --n-min 50").code, 2);
}

TEST(Cli, PovmJsonRoundTrip) {
  const std::string path = testing::TempDir() + "minimal_povm.json";
  ASSERT_EQ(run("povm --n 2 --minimal --out " + path).code, 0);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["outcomes"].size(), 4u);
  EXPECT_TRUE(j["completeness"]["is_projective"].get<bool>());
  const auto p = frame_align::povm_from_json(j);
  EXPECT_LT(frame_align::check_completeness(p).residual_norm, 1e-14);
  std::remove(path.c_str());
}

TEST(Cli, SimulateIsDeterministic) {
  const auto a = run("simulate --n 2 --minimal --shots 20000 --seed 4");
  const auto b = run("simulate --n 2 --minimal --shots 20000 --seed 4");
  const auto c = run("simulate --n 2 --minimal --shots 20000 --seed 5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, SingleShotHasNoErrorBar) {
  const auto r = run("simulate --n 2 --shots 1 --seed 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",NA,"), std::string::npos);
  const auto j = nlohmann::json::parse(run("simulate --n 2 --shots 1 --format json").out);
  EXPECT_TRUE(j["std_err"].is_null());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("optimal --n -1").code, 2);
  EXPECT_EQ(run("optimal").code, 2);
  EXPECT_EQ(run("optimal --n 2 --format xml").code, 2);
  EXPECT_EQ(run("povm --n 4 --minimal").code, 2);
  EXPECT_EQ(run("simulate --n 2 --shots 0").code, 2);
  EXPECT_EQ(run("table --n-list 2,x").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("verify --inject-fault nothing").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, VerifyPassesAndCatchesInjectedFaults) {
  const auto ok = run("verify");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("group su2_math: PASS"), std::string::npos);
  const auto cg = run("verify --inject-fault cg-sign");
  EXPECT_EQ(cg.code, 1);
  EXPECT_NE(cg.out.find("group su2_math: FAIL"), std::string::npos);
  EXPECT_EQ(run("verify --inject-fault grid-undersized").code, 1);
}
