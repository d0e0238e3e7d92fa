#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "randcompare_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCellPhone = RANDCOMPARE_DATA_DIR "/cellphone.csv";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "randcompare");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = randcompare::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("randcompare_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  fs::path path_;
};

const json* find_report(const json& j, const std::string& test) {
  for (const auto& r : j["reports"]) {
    if (r["test"] == test) return &r;
  }
  return nullptr;
}

TEST(CliTest, CellPhoneRandomizationTests) {
  const auto r = run({"test", "--data", kCellPhone, "--tests", "fisher-rand,neyman-rand",
                      "--mc", "200000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["reports"].size(), 2u);
  const auto* fisher = find_report(j, "fisher-randomization");
  const auto* neyman = find_report(j, "neyman-randomization");
  ASSERT_TRUE(fisher && neyman);
  EXPECT_NEAR((*fisher)["p_value"].get<double>(), 0.0074, 0.001);
  EXPECT_EQ((*fisher)["p_value_kind"], "monte_carlo");
  EXPECT_NEAR((*neyman)["statistic"].get<double>(), 2.67, 0.005);
  EXPECT_NEAR((*neyman)["p_value"].get<double>(), 0.0075, 0.0003);
}

TEST(CliTest, RerunIsByteIdentical) {
  const std::vector<std::string> args = {"test", "--data", kCellPhone, "--mc", "5000",
                                         "--seed", "3"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, SeedFromEnvironment) {
  const std::vector<std::string> args = {"test", "--data", kCellPhone, "--tests", "perm",
                                         "--mc", "5000"};
  ::setenv("RANDCOMPARE_SEED", "99", 1);
  const auto env = run(args);
  ::unsetenv("RANDCOMPARE_SEED");
  auto flagged = args;
  flagged.insert(flagged.end(), {"--seed", "99"});
  EXPECT_EQ(env.out, run(flagged).out);
  EXPECT_NE(env.out, run(args).out);
}

TEST(CliTest, AllTestsOnToyData) {
  TempDir dir;
  const auto csv = dir.write("toy.csv", "unit_id,treatment,response\na,1,3\nb,1,5\nc,2,1\nd,2,2\n");
  const auto r = run({"test", "--data", csv, "--tests", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  std::vector<std::string> names;
  for (const auto& rep : j["reports"]) names.push_back(rep["test"]);
  const std::vector<std::string> expected = {"permutation", "wilcoxon", "welch-t", "pooled-t",
                                             "fisher-randomization", "neyman-randomization",
                                             "neyman-selection"};
  EXPECT_EQ(names, expected);
  ASSERT_EQ(j["notices"].size(), 2u);
  EXPECT_NE(j["notices"][1].get<std::string>().find("NoncomputableDistribution"),
            std::string::npos);
  // Six assignments: the exact permutation p is a multiple of 1/6.
  EXPECT_EQ((*find_report(j, "permutation"))["p_value_kind"], "exact");
  EXPECT_NEAR((*find_report(j, "permutation"))["p_value"].get<double>(), 1.0 / 3.0, 1e-12);
}

TEST(CliTest, FisherSelectionRequestedExplicitly) {
  const auto r = run({"test", "--data", kCellPhone, "--tests", "fisher-sel"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("neyman_selection_test"), std::string::npos);
}

TEST(CliTest, TableAndCsvFormats) {
  const auto table = run({"test", "--data", kCellPhone, "--tests", "welch,neyman-rand",
                          "--format", "table"});
  ASSERT_EQ(table.code, 0) << table.err;
  EXPECT_NE(table.out.find("Z3 = 2.6728"), std::string::npos) << table.out;
  const auto csv = run({"test", "--data", kCellPhone, "--tests", "welch", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("test,hypothesis,statistic", 0), 0u);
}

TEST(CliTest, DataErrorsExitTwo) {
  TempDir dir;
  const auto dup = dir.write("dup.csv", "unit_id,treatment,response\na,1,3\na,2,1\n");
  auto r = run({"validate", "--data", dup});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("duplicate unit_id 'a'"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;

  const auto empty = dir.write("empty.csv", "unit_id,treatment,response\na,1,3\nb,1,1\n");
  r = run({"validate", "--data", empty});
  EXPECT_EQ(r.code, 2);
  r = run({"test", "--data", empty});
  EXPECT_EQ(r.code, 2);
  r = run({"test", "--data", dir.write("nope.csv", "")});
  EXPECT_EQ(r.code, 2);
}

TEST(CliTest, ValidateSummarizesArms) {
  const auto r = run({"validate", "--data", kCellPhone});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("32"), std::string::npos);
}

TEST(CliTest, ExplicitDesignWithNeymanIsUnsupported) {
  TempDir dir;
  const auto csv = dir.write("toy.csv", "unit_id,treatment,response\na,1,3\nb,2,1\n");
  const auto design = dir.write("design.json", R"({"support": [[1,2],[2,1]], "probs": [0.5, 0.5]})");
  auto r = run({"test", "--data", csv, "--design", design, "--tests", "neyman-rand"});
  EXPECT_EQ(r.code, 3) << r.err;
  r = run({"test", "--data", csv, "--design", design, "--tests", "fisher-rand"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out)["reports"][0]["p_value"].get<double>(), 1.0);
  const auto bad = dir.write("bad.json", R"({"support": [[1,2],[2,1]], "probs": [0.5, 0.6]})");
  r = run({"test", "--data", csv, "--design", bad, "--tests", "fisher-rand"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(CliTest, ExactEnumerationTooLarge) {
  const auto r = run({"test", "--data", kCellPhone, "--tests", "perm", "--engine", "exact"});
  EXPECT_EQ(r.code, 4);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({"test"}).code, 1);
  EXPECT_EQ(run({"test", "--data", kCellPhone, "--tests", "bogus"}).code, 1);
  EXPECT_EQ(run({"test", "--data", kCellPhone, "--mc", "10"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
}

TEST(CliSimulate, UnknownScenarioListsIds) {
  const auto r = run({"simulate", "t9.sc9", "--replicates", "100"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("t3.sc1"), std::string::npos) << r.err;
}

TEST(CliSimulate, JsonOutput) {
  const auto r = run({"simulate", "t3.sc6", "--replicates", "100", "--mc", "1000", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["replicates"], 100);
  EXPECT_EQ(j["seed"], 11);
  const auto& est = j["runs"][0]["estimates"];
  EXPECT_EQ(est.size(), 12u);
  for (const auto& e : est) {
    if (e["test"] == "Wilcoxon") {
      EXPECT_FALSE(e["applicable"].get<bool>());
      EXPECT_TRUE(e["rejection_rate"].is_null());
    }
  }
  EXPECT_EQ(run({"simulate", "t3.sc6", "--replicates", "100", "--mc", "1000"}).out, r.out);
}

TEST(CliSimulate, ReplicatesBelowFloor) {
  EXPECT_EQ(run({"simulate", "t3.sc1", "--replicates", "50"}).code, 1);
}

TEST(CliSimulate, ScenarioConfigFile) {
  TempDir dir;
  const auto cfg = dir.write("sc.json", R"({"id": "mine", "n1": 5, "n2": 5,
    "law": {"kind": "normal", "mu": 0, "sigma": 1}, "effect": {"shift": 0}})");
  const auto r = run({"simulate", "--config", cfg, "--replicates", "100", "--mc", "1000",
                      "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mine,Permutation,Randomization"), std::string::npos) << r.out;
}

}  // namespace
