#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>

#include "cybersim/golden.hpp"
#include "cybersim/scenarios.hpp"

using namespace cybersim;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(CYBERSIM_DATA_DIR) / "golden";

// Published tables each scenario reproduces.
const std::map<std::string, std::set<std::string>> kPublished{
    {"benchmark", {"1", "2"}},
    {"panel", {"3", "4", "5", "6", "7", "9", "10", "11"}},
    {"buyer_tiers", {"12", "13", "14", "15", "16", "17"}},
    {"naic_report", {"naic_records"}},
};

ScenarioConfig quick(const std::string& id, std::size_t runs = 2000) {
  auto cfg = default_config(id);
  run_settings(cfg).runs = runs;
  return cfg;
}

GoldenDiff full_diff(const std::string& id) {
  return compare_to_golden(run_scenario(default_config(id)), load_golden_dir(kGolden / id));
}

}  // namespace

TEST(Scenarios, EveryPublishedTableHasAGoldenFileAndViceVersa) {
  for (const auto& [id, tables] : kPublished) {
    std::set<std::string> shipped;
    for (const auto& g : load_golden_dir(kGolden / id)) shipped.insert(g.table_id);
    EXPECT_EQ(shipped, tables) << id;
    const Report rep = run_scenario(quick(id, 500));
    for (const auto& t : tables) EXPECT_NE(rep.find_table(t), nullptr) << id << " table " << t;
  }
  std::set<std::string> dirs;
  for (const auto& e : fs::directory_iterator(kGolden)) dirs.insert(e.path().filename().string());
  EXPECT_EQ(dirs.size(), kPublished.size());
}

TEST(Scenarios, GoldenCellsAllHaveAMatchingReportCell) {
  for (const auto& [id, tables] : kPublished) {
    const Report rep = run_scenario(quick(id, 500));
    const auto diff = compare_to_golden(rep, load_golden_dir(kGolden / id));
    EXPECT_EQ(diff.count(CellStatus::missing), 0u) << id;
  }
}

TEST(Scenarios, PanelMatchesGoldens) {
  const auto d = full_diff("panel");
  EXPECT_TRUE(d.passed()) << render_text(d);
}

TEST(Scenarios, BuyerTiersMatchesGoldens) {
  const auto d = full_diff("buyer_tiers");
  EXPECT_TRUE(d.passed()) << render_text(d);
  EXPECT_EQ(d.count(CellStatus::info), 15u);  // the ceded fractions, reported with deltas
}

TEST(Scenarios, NaicMatchesGoldens) {
  const auto d = full_diff("naic_report");
  EXPECT_TRUE(d.passed()) << render_text(d);
}

TEST(Scenarios, BenchmarkFlagsPublishedPremiumInconsistency) {
  const auto d = full_diff("benchmark");
  bool flagged = false;
  for (const auto& c : d.cells)
    if (c.table_id == "2" && c.golden.row == "20mn xs 30mn" && c.golden.column == "technical_premium") {
      flagged = c.status == CellStatus::flagged;
      EXPECT_NEAR(c.actual, 2.5e6, 0.1e6);
    }
  EXPECT_TRUE(flagged);
}

TEST(Scenarios, ReportIsDeterministicForASeed) {
  for (const auto& id : {"benchmark", "panel"}) {
    const auto a = to_json(run_scenario(quick(id)));
    const auto b = to_json(run_scenario(quick(id)));
    EXPECT_EQ(a, b) << id;
  }
}

TEST(Scenarios, SeedChangesSimulatedCells) {
  auto cfg = quick("benchmark");
  const auto a = run_scenario(cfg);
  run_settings(cfg).seed = 43;
  const auto b = run_scenario(cfg);
  EXPECT_NE(a.table("1").at("10%", "simulated_loss"), b.table("1").at("10%", "simulated_loss"));
  EXPECT_EQ(a.table("1").at("10%", "expected_loss"), b.table("1").at("10%", "expected_loss"));
}

TEST(Scenarios, ThreadCountDoesNotChangeReport) {
  auto one = quick("panel");
  run_settings(one).threads = 1;
  auto four = quick("panel");
  run_settings(four).threads = 4;
  EXPECT_EQ(to_json(run_scenario(one)), to_json(run_scenario(four)));
}

TEST(Scenarios, BenchmarkStructure) {
  const auto rep = run_scenario(quick("benchmark"));
  EXPECT_EQ(rep.scenario, "benchmark");
  EXPECT_EQ(rep.table("1").at("10%", "expected_loss"), 5e6);
  EXPECT_EQ(rep.table("1").at("50%", "expected_loss"), 25e6);
  const auto& t2 = rep.table("2");
  ASSERT_EQ(t2.rows().size(), 4u);
  for (const auto& r : t2.rows()) EXPECT_NEAR(t2.at(r.label, "technical_premium"), t2.at(r.label, "rate") * t2.at(r.label, "layer"), 0.01);
  const auto& b = rep.table("buyer_optimum");
  for (const auto& r : b.rows()) EXPECT_NEAR(b.at(r.label, "optimal_coverage"), b.at(r.label, "closed_form_coverage"), 1000.0);
}

TEST(Scenarios, PanelInvariants) {
  const auto rep = run_scenario(quick("panel"));
  const auto& t10 = rep.table("10");
  const auto& t9 = rep.table("9");
  const auto& t7 = rep.table("7");
  for (const auto& r : t10.rows()) {
    for (const char* col : {"rho_95", "rho_97.5"}) {
      const double rho = t10.at(r.label, col);
      EXPECT_GE(rho, 0.0);
      EXPECT_LE(rho, 1.0);
    }
    EXPECT_NEAR(t9.at(r.label, "reserves"), t9.at(r.label, "premium_income") + t9.at(r.label, "capital"), 0.011);
    EXPECT_NEAR(t7.at(r.label, "charged_rate"), t7.at(r.label, "technical_rate") + t7.at(r.label, "loading"), 1e-12);
  }
  // Rate times loss ratio is constant along each distribution row.
  const auto& t4 = rep.table("4");
  for (const auto& r : t4.rows())
    for (std::size_t i = 1; i < r.values.size(); ++i)
      EXPECT_NEAR(r.values[i] * std::stod(t4.columns()[i].name), r.values[0] * 0.1, 1e-12);
}

TEST(Scenarios, BuyerTiersEmitsPublishedFractionsWithDeltas) {
  const auto rep = run_scenario(quick("buyer_tiers"));
  const auto& t = rep.table("17");
  for (const auto& r : t.rows())
    for (const char* tier : {"low", "medium", "high"}) {
      const std::string s(tier);
      EXPECT_NEAR(t.at(r.label, s + "_delta"), t.at(r.label, s) - t.at(r.label, s + "_published"), 1e-12);
    }
}

TEST(Scenarios, NaicHeadlineNote) {
  const auto rep = run_scenario(default_config("naic_report"));
  ASSERT_FALSE(rep.notes.empty());
  EXPECT_NE(rep.notes.back().find("2021"), std::string::npos);
  EXPECT_NEAR(rep.table("naic_summary").at("2021", "trend_slope"), 0.71184244274254522212, 1e-12);
}

TEST(Scenarios, NaicMissingDataIsAConfigError) {
  NaicConfig cfg;
  cfg.data = "does_not_exist.csv";
  EXPECT_THROW(run_naic_report(cfg), ConfigError);
}

TEST(Scenarios, Labels) {
  EXPECT_EQ(percent_label(0.975), "97.5%");
  EXPECT_EQ(percent_label(0.1), "10%");
  EXPECT_EQ(level_label(0.95), "95");
  EXPECT_EQ(money_label(25e6), "25mn");
  EXPECT_EQ(money_label(500e3), "500k");
  EXPECT_DOUBLE_EQ(quote_rate(0.1438, 0.01), 0.14);
  EXPECT_DOUBLE_EQ(quote_rate(0.1438, 0.0), 0.1438);
  EXPECT_NE(campaign_seed(42, "a").value, campaign_seed(42, "b").value);
  EXPECT_EQ(campaign_seed(42, "a").value, campaign_seed(42, "a").value);
}
