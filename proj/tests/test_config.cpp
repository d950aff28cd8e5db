#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cybersim/config.hpp"

using namespace cybersim;
using nlohmann::json;

namespace {

std::vector<std::string> issues_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<std::string>& issues, const std::string& prefix) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST(Config, DefaultsRoundTripThroughJson) {
  for (const auto& id : scenario_ids()) {
    const auto cfg = default_config(id);
    EXPECT_TRUE(validate(cfg).empty()) << id;
    const json j = to_json(cfg);
    EXPECT_EQ(j["scenario"], id);
    EXPECT_EQ(to_json(config_from_json(j)), j) << id;
  }
}

TEST(Config, ShippedConfigsEqualDefaults) {
  for (const auto& id : scenario_ids()) {
    const auto path = std::filesystem::path(CYBERSIM_DATA_DIR) / "configs" / (id + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(to_json(load_config(path)), to_json(default_config(id))) << id;
  }
}

TEST(Config, AbsentKeysKeepDefaults) {
  const auto cfg = config_from_json({{"scenario", "benchmark"}, {"run", {{"seed", 7}}}});
  const auto& b = std::get<BenchmarkConfig>(cfg);
  EXPECT_EQ(b.run.seed, 7u);
  EXPECT_EQ(b.run.runs, 100000u);
  EXPECT_EQ(b.reinsurance.fitted, (LogNormalParams{16.9, 0.27}));
  EXPECT_EQ(b.run.output_dir, "out/benchmark");
}

TEST(Config, ScenarioIsRequired) {
  EXPECT_TRUE(has_issue(issues_of(json::object()), "$.scenario"));
  EXPECT_TRUE(has_issue(issues_of(json::array()), "$"));
  EXPECT_TRUE(has_issue(issues_of({{"scenario", "nope"}}), "$.scenario"));
}

TEST(Config, UnknownKeysAndTypeErrorsAreCollected) {
  const json j = {{"scenario", "panel"},
                  {"bogus", 1},
                  {"run", {{"runs", "many"}, {"convention", "other"}}},
                  {"insurers", {{{"name", "X"}, {"counts", {{"500k", 1.5}}}}}}};
  const auto issues = issues_of(j);
  EXPECT_TRUE(has_issue(issues, "$.bogus: unknown key"));
  EXPECT_TRUE(has_issue(issues, "$.run.runs: expected an integer"));
  EXPECT_TRUE(has_issue(issues, "$.run.convention: expected one of"));
  EXPECT_TRUE(has_issue(issues, "$.insurers[0].counts.500k: expected an integer"));
}

TEST(Config, SemanticValidationPaths) {
  const json j = {{"scenario", "panel"},
                  {"run", {{"runs", 0}}},
                  {"insurers",
                   {{{"name", "A"}, {"counts", {{"500k", 1}}}},
                    {{"name", "B"}, {"counts", {{"500k", 1}}}},
                    {{"name", "C"}, {"counts", {{"500k", -3}, {"7mn", 1}}}, {"target_loss_ratio", 1.5}}}},
                  {"stress_levels", {0.95, 1.0}}};
  const auto issues = issues_of(j);
  EXPECT_TRUE(has_issue(issues, "$.run.runs: must be >= 1"));
  EXPECT_TRUE(has_issue(issues, "$.insurers[2].counts.500k: must be non-negative"));
  EXPECT_TRUE(has_issue(issues, "$.insurers[2].counts.7mn: unknown contract"));
  EXPECT_TRUE(has_issue(issues, "$.insurers[2].target_loss_ratio"));
  EXPECT_TRUE(has_issue(issues, "$.stress_levels[1]"));
}

TEST(Config, BuyerTierShapeChecks) {
  const json j = {{"scenario", "buyer_tiers"},
                  {"tiers", {{{"name", "t"}, {"frequencies", {1, 2}}, {"premium_ceilings", {0.1, 0.1, 0.1, 0.1, 0.1}},
                              {"reinsurer_distribution", {{"mean", 1e7}, {"sd", 1e7}}}, {"reinsurer_loss_ratio", 0.5}}}}};
  EXPECT_TRUE(has_issue(issues_of(j), "$.tiers[0].frequencies: need one value per contract"));
}

TEST(Config, LoadConfigReportsParseErrors) {
  const auto path = std::filesystem::temp_directory_path() / "cybersim_bad_config.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config(path), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}
