#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "phm/cli_report.hpp"

using namespace phm;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "phm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(args.size()), argv.data());
}

const Certificate& default_certificate() {
  static const Certificate c = verify();
  return c;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("phm_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Verify, DefaultRunPasses) {
  const Certificate& c = default_certificate();
  EXPECT_TRUE(c.pass);
  EXPECT_FALSE(c.failed_check);
  EXPECT_EQ(c.lambda1, 4);
  EXPECT_EQ(c.lambda2, 6);
  EXPECT_FALSE(c.lambda2_assumed);
  EXPECT_EQ(c.seeds.at("topdeg"), 42u);
  EXPECT_FALSE(c.assumptions.empty());
}

TEST(Verify, EveryCheckAppearsOnceInOrder) {
  const Certificate& c = default_certificate();
  ASSERT_EQ(c.checks.size(), check_ids().size());
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    EXPECT_EQ(c.checks[i].id, check_ids()[i]);
    EXPECT_EQ(c.checks[i].status, CheckStatus::Pass) << c.checks[i].id;
    EXPECT_FALSE(c.checks[i].anchor.empty()) << c.checks[i].id;
  }
  std::set<std::string> ids(check_ids().begin(), check_ids().end());
  EXPECT_EQ(ids.size(), check_ids().size());
}

TEST(Verify, PayloadsCarryTheHeadlineValues) {
  const Certificate& c = default_certificate();
  const nlohmann::json m = c.find("pullback_matrix")->payload;
  EXPECT_NE(m.dump().find("[[3,4,2,2,2],[4,3,2,2,2],[-2,-2,-2,-1,-1],[-2,-2,-1,-2,-1],[-2,-2,-1,-1,-2]]"),
            std::string::npos)
      << m.dump();
  EXPECT_NE(c.find("spectral_radius"), nullptr);
  EXPECT_EQ(c.find("no_such_check"), nullptr);
}

TEST(Verify, CertificateIsReproducible) {
  const Certificate again = verify();
  EXPECT_EQ(again.dump(false), default_certificate().dump(false));
  EXPECT_EQ(nlohmann::json::parse(again.dump(false)).count("timing_seconds"), 0u);
  EXPECT_EQ(nlohmann::json::parse(again.dump(true)).count("timing_seconds"), 1u);
}

TEST(Verify, PerturbedMatrixFailsAtPullbackCheck) {
  VerifyOptions o;
  o.perturb_matrix = MatrixPerturbation{1, 2, 1};
  const Certificate c = verify(o);
  EXPECT_FALSE(c.pass);
  ASSERT_TRUE(c.failed_check);
  EXPECT_EQ(*c.failed_check, "pullback_matrix");
  const CheckRecord* r = c.find("pullback_matrix");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->status, CheckStatus::Fail);
  EXPECT_FALSE(r->failure.empty());
  // Pipeline aborts: nothing after the failing check ran.
  EXPECT_EQ(c.find("char_poly"), nullptr);
}

TEST(Verify, SkippingTopdegMarksLambda2Assumed) {
  VerifyOptions o;
  o.skip = {"topdeg"};
  const Certificate c = verify(o);
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(c.lambda2_assumed);
  EXPECT_EQ(c.lambda2, 6);
  EXPECT_EQ(c.find("topdeg")->status, CheckStatus::Assumed);
}

TEST(Verify, UnknownSkipIsRejected) {
  VerifyOptions o;
  o.skip = {"nonsense"};
  EXPECT_THROW(verify(o), std::invalid_argument);
}

TEST(Cli, ExitCodes) {
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int none = run({});
  const int bad_flag = run({"compose", "--n", "9"});
  const int bad_skip = run({"verify", "--skip", "nonsense", "--quiet"});
  testing::internal::GetCapturedStdout();
  testing::internal::GetCapturedStderr();
  EXPECT_EQ(none, 2);
  EXPECT_EQ(bad_flag, 2);
  EXPECT_EQ(bad_skip, 2);
}

TEST(Cli, ComposeTable) {
  testing::internal::CaptureStdout();
  const int rc = run({"compose", "--n", "3"});
  const std::string out = testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  for (const char* s : {"(3,4)", "(13,12)", "(51,52)"}) EXPECT_NE(out.find(s), std::string::npos) << out;
}

TEST(Cli, VerifyWritesCertificate) {
  const auto path = temp_path("cert.json");
  testing::internal::CaptureStdout();
  const int rc = run({"verify", "--out", path.string(), "--quiet"});
  testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("lambda1"), 4);
  EXPECT_EQ(j.at("lambda2"), 6);
  EXPECT_EQ(j.at("overall"), "pass");
  std::filesystem::remove(path);
}

TEST(Cli, PerturbedVerifyExitsOne) {
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int rc = run({"verify", "--perturb-matrix", "2", "3", "1", "--quiet"});
  testing::internal::GetCapturedStdout();
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_EQ(rc, 1);
  EXPECT_NE(err.find("pullback_matrix"), std::string::npos) << err;
}

TEST(Cli, RenderAndPolygon) {
  const auto path = temp_path("basin.ppm");
  testing::internal::CaptureStdout();
  const int rc = run({"render", "--size", "16x8", "--threads", "2", "--out", path.string()});
  const int poly = run({"polygon", "--random-convex", "4", "--seed", "3"});
  testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  EXPECT_EQ(poly, 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str().rfind("P6\n16 8\n255\n", 0), 0u);
  EXPECT_EQ(ss.str().size(), std::string("P6\n16 8\n255\n").size() + 16 * 8 * 3);
  std::filesystem::remove(path);
}
