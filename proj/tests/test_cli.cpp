#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "minsub/cli.hpp"

using namespace minsub;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "minsub");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("minsub_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VerifyPasses) {
  const Result r = run({"verify", "--space", "slr-so:3", "--a", "1+1i,0.5,-1i", "--points", "50", "--seed", "7"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("fitted_lambda").get<double>(), 20.0 / 3.0, 1e-7);
  EXPECT_EQ(j.at("config").at("points"), 50);
  EXPECT_EQ(j.at("config").at("step_size"), 0.05);
  EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(Cli, VerifySustarReportsResolvedCandidate) {
  const Result r = run({"verify", "--space", "sustar-sp:2", "--a", "1,0,0,0", "--b", "0,1,0,0"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("lambda_candidates").size(), 2u);
  EXPECT_EQ(j.at("resolved_lambda"), 5.0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"verify", "--space", "slr-so:3"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--space", "nope:3", "--a", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--space", "slr-so:3", "--a", "1,2"}).code, cli::kExitUsage);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"curvature", "--space", "slr-so:3", "--a", "1,i,0", "--h", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"curvature", "--space", "slr-so:3", "--a", "1,i,0", "--h", "-1e-3"}).code, cli::kExitUsage);
}

TEST(Cli, ConditionViolationNamesCondition) {
  const Result r = run({"fiber", "--space", "sostar-u:2", "--a", "1,0,i,0", "--b", "0,1,0,i"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("(b,b) != 0"), std::string::npos) << r.err;
}

TEST(Cli, FiberWritesSamples) {
  const auto csv = temp_path("fiber.csv");
  const Result r = run({"fiber", "--space", "slr-so:3", "--a", "1,i,0", "--steps", "100", "--out", csv.string()});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out).at("regular_count"), 100);
  std::istringstream lines(slurp(csv));
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  EXPECT_EQ(count, 101);
  EXPECT_FALSE(std::filesystem::exists(csv.string() + ".tmp"));

  const auto jsonl = temp_path("zero.jsonl");
  ASSERT_EQ(run({"fiber", "--space", "spr-u:2", "--a", "1,i,0,0", "--steps", "0", "--out", jsonl.string()}).code,
            cli::kExitPass);
  std::istringstream jl(slurp(jsonl));
  count = 0;
  for (std::string line; std::getline(jl, line);) ++count;
  EXPECT_EQ(count, 1);
  std::filesystem::remove(csv);
  std::filesystem::remove(jsonl);
}

TEST(Cli, CurvatureTable) {
  const Result r = run({"curvature", "--space", "slr-so:3", "--a", "1,i,0", "--h", "1e-2", "--points", "5"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("h").size(), 3u);
  EXPECT_EQ(j.at("rows").size(), 5u);
  EXPECT_TRUE(j.at("decreasing").get<bool>());

  const Result neg =
      run({"curvature", "--space", "slr-so:3", "--a", "1,i,0", "--points", "3", "--level", "0.5"});
  EXPECT_EQ(neg.code, cli::kExitFail);
  EXPECT_GT(nlohmann::json::parse(neg.out).at("max_norm").at(0).get<double>(), 5e-2);
}

TEST(Cli, DualityCommand) {
  const Result r = run({"duality", "--space", "sostar-u:2", "--a", "1,0,i,0", "--b", "0,1,0,0"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("dual_space"), "so2n-u:2");
  EXPECT_NEAR(j.at("dual_lambda").get<double>(), -2.0, 1e-7);
}

TEST(Cli, ListSpaces) {
  const Result r = run({"list-spaces"});
  EXPECT_EQ(r.code, cli::kExitPass);
  EXPECT_NE(r.out.find("sustar-sp"), std::string::npos);
  EXPECT_NE(r.out.find("so2n-u"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = temp_path("config.json");
  {
    std::ofstream f(cfg);
    f << R"({"space": "slr-so", "n": 3, "a": "1,i,0", "points": 10, "seed": 3})";
  }
  const Result from_file = run({"verify", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, cli::kExitPass) << from_file.err;
  EXPECT_EQ(nlohmann::json::parse(from_file.out).at("points"), 10);

  const Result overridden = run({"verify", "--config", cfg.string(), "--points", "12"});
  ASSERT_EQ(overridden.code, cli::kExitPass);
  const auto j = nlohmann::json::parse(overridden.out);
  EXPECT_EQ(j.at("points"), 12);
  EXPECT_EQ(j.at("seed"), 3);
  EXPECT_EQ(run({"verify", "--config", (cfg.string() + ".missing")}).code, cli::kExitUsage);
  std::filesystem::remove(cfg);
}

TEST(Cli, ByteIdenticalReports) {
  const auto a = temp_path("r1.json");
  const auto b = temp_path("r2.json");
  const std::vector<std::string> base{"verify", "--space", "spr-u:2", "--a", "1,i,0,0", "--seed", "11"};
  auto with_out = [&](const std::filesystem::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with_out(a)).code, cli::kExitPass);
  ASSERT_EQ(run(with_out(b)).code, cli::kExitPass);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
