#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI; stdout is captured, stderr is folded in when `merge` is set.
Result cli(const std::string& args, bool merge = false, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + CYBERSIM_CLI + "\" " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, HelpListsSubcommands) {
  const auto r = cli("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"run", "compare", "price", "quote-qs", "quote-xl", "optimal-rho", "fit", "naic", "config"})
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("run").code, 1);
  EXPECT_EQ(cli("run --scenario nope").code, 1);
  EXPECT_EQ(cli("price --limit 1mn --mean abc --sd 1 --claim-probability 0.1").code, 1);
}

TEST(Cli, InvalidConfigExitsOneWithPaths) {
  const auto dir = temp_dir("cybersim_cli_cfg");
  const auto path = dir / "bad.json";
  std::ofstream(path) << R"({"scenario": "panel", "insurers": [{"name": "A", "counts": {"500k": -1}}]})";
  const auto r = cli("run --no-files --config " + path.string(), true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("$.insurers[0].counts.500k"), std::string::npos) << r.out;
  fs::remove_all(dir);
}

TEST(Cli, RunWritesFilesAndJson) {
  const auto dir = temp_dir("cybersim_cli_run");
  const auto r = cli("--json run --scenario benchmark --runs 2000 --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["scenario"], "benchmark");
  EXPECT_EQ(j["runs"], 2000);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "table_1.csv"));
  EXPECT_TRUE(fs::exists(dir / "table_2.csv"));
  EXPECT_TRUE(fs::exists(dir / "plot_loss_histogram.csv"));
  fs::remove_all(dir);
}

TEST(Cli, SeedFlagBeatsEnvironment) {
  const auto a = cli("--json run --scenario benchmark --runs 1000 --no-files --seed 5");
  const auto b = cli("--json run --scenario benchmark --runs 1000 --no-files", false, "CYBERSIM_SEED=5");
  const auto c = cli("--json run --scenario benchmark --runs 1000 --no-files --seed 6", false, "CYBERSIM_SEED=5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(nlohmann::json::parse(a.out)["seed"], 5);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(c.out)["seed"], 6);
  EXPECT_EQ(cli("run --scenario benchmark --no-files", false, "CYBERSIM_SEED=x").code, 1);
}

TEST(Cli, ThreadsDoNotChangeOutput) {
  const auto a = cli("--json --threads 1 run --scenario panel --runs 3000 --no-files");
  const auto b = cli("--json --threads 3 run --scenario panel --runs 3000 --no-files");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CompareAgainstPerturbedGoldensExitsTwo) {
  const auto dir = temp_dir("cybersim_cli_golden");
  std::ofstream(dir / "table_7.csv") << "row,column,expected,mode,tolerance,quantum\n"
                                        "Echo,charged_rate,0.30,round,,0.001\n"
                                        "Alpha,charged_rate,0.08,round,,0.001\n";
  const auto diff = dir / "diff.csv";
  const auto r = cli("compare --scenario panel --runs 1000 --golden " + dir.string() + " --diff-out " + diff.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("fail  table 7 [Echo, charged_rate]"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(diff));
  fs::remove_all(dir);
}

TEST(Cli, CompareWithBundledGoldensPasses) {
  EXPECT_EQ(cli("compare --scenario naic_report").code, 0);
}

TEST(Cli, Price) {
  const auto r = cli("--json price --limit 10mn --mean 4mn --sd 4mn --claim-probability 0.3 --count 10 --loss-ratio 0.5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["technical_premium"].get<double>(), 12e6, 1e-6);
  EXPECT_NEAR(j["charged_rate"].get<double>(), 0.24, 1e-12);
}

TEST(Cli, QuoteQs) {
  const auto r = cli("--json quote-qs --mean 30mn --sd 30mn --loss-ratio 0.5 --precision 0.01 --avg-rate 0.24");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), 0.10788752863557846, 1e-10);
  EXPECT_NEAR(j["quoted_rate"].get<double>(), 0.11, 1e-12);
  EXPECT_NEAR(j["ceding_commission"].get<double>(), 0.13, 1e-12);
}

TEST(Cli, QuoteXl) {
  const auto r = cli("--json quote-xl --attachment 40mn --layer 10mn --mu 16.9 --sigma 0.27");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), 0.012594835401642154, 1e-12);
}

TEST(Cli, OptimalRho) {
  const auto r = cli("--json optimal-rho --stress 53.1mn --premium 24mn --capital 10.8mn --exposure 100mn --cc 0.10");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rho"].get<double>(), 0.47, 0.005);
  EXPECT_EQ(j["status"], "feasible");
}

TEST(Cli, FitFromMomentsAndSamples) {
  const auto m = cli("--json fit --mean 500k --sd 250k");
  ASSERT_EQ(m.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(m.out)["sigma_log"].get<double>(), 0.22314355131420976, 1e-15);
  const auto dir = temp_dir("cybersim_cli_fit");
  std::ofstream(dir / "s.txt") << "1\n100\n";
  const auto s = cli("--json fit --input " + (dir / "s.txt").string());
  ASSERT_EQ(s.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(s.out)["mu_log"].get<double>(), std::log(100.0) / 2.0, 1e-12);
  fs::remove_all(dir);
}

TEST(Cli, NaicAndConfig) {
  const auto n = cli("--json naic");
  ASSERT_EQ(n.code, 0);
  EXPECT_EQ(nlohmann::json::parse(n.out)["scenario"], "naic_report");
  const auto c = cli("config --scenario panel");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(nlohmann::json::parse(c.out)["scenario"], "panel");
}
