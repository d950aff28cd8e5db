#include <gtest/gtest.h>

#include "cybersim/config.hpp"
#include "cybersim/scenarios.hpp"
#include "cybersim/underwriting.hpp"

using namespace cybersim;

namespace {

Portfolio panel_insurer(const std::string& name) {
  const PanelConfig cfg;
  for (const auto& ins : cfg.insurers)
    if (ins.name == name) return build_portfolio(cfg, ins);
  throw std::logic_error("no insurer " + name);
}

}  // namespace

TEST(Underwriting, PanelTechnicalPremiaAndExposure) {
  const std::map<std::string, double> tp{
      {"Alpha", 4.0e6}, {"Beta", 5.0e6}, {"Charlie", 7.1e6}, {"Delta", 9.9e6}, {"Echo", 12.0e6}};
  for (const auto& [name, expected] : tp) {
    const auto p = panel_insurer(name);
    EXPECT_NEAR(technical_premium(p), expected, 1e-6) << name;
    EXPECT_NEAR(exposure(p), 100e6, 1e-6) << name;
  }
}

TEST(Underwriting, LoadingDoublesRateAtHalfLossRatio) {
  const auto p = panel_insurer("Charlie");
  const double tp = technical_premium(p);
  const double l = loading(tp, 0.5, exposure(p));
  EXPECT_NEAR(l, 0.071, 1e-12);
  EXPECT_NEAR(weighted_average_rate(p, l), 0.142, 1e-12);
  EXPECT_THROW(loading(tp, 0.0, 1.0), DomainError);
  EXPECT_THROW(loading(tp, 0.5, 0.0), DomainError);
}

TEST(Underwriting, LoadingIsZeroAtFullLossRatio) { EXPECT_EQ(loading(4e6, 1.0, 100e6), 0.0); }

TEST(Underwriting, ModelExpectedLossBelowCashUnderDefaultConvention) {
  const auto p = panel_insurer("Alpha");
  EXPECT_LT(model_expected_loss(p, MomentConvention::paper), technical_premium(p));
  EXPECT_NEAR(model_expected_loss(p, MomentConvention::textbook), technical_premium(p), 1e-6);
}

TEST(Underwriting, StressLossComposesQuantiles) {
  const auto p = panel_insurer("Charlie");
  const auto s = stress_loss(p, 0.95, 0.95);
  EXPECT_NEAR(s.total_loss, 27965984.673313957, 1e-3);
  ASSERT_EQ(s.per_contract_breakdown.size(), p.holdings.size());
  EXPECT_THROW(stress_loss(p, 1.0, 0.5), DomainError);
}

TEST(Underwriting, StressLossIsMonotoneInLevel) {
  const auto p = panel_insurer("Delta");
  EXPECT_LT(stress_loss(p, 0.95, 0.95).total_loss, stress_loss(p, 0.975, 0.975).total_loss);
}

TEST(Underwriting, ValidateRejectsBadPortfolios) {
  Portfolio p{"x", {{{"c", 1e6, {1e5, 1e5}, ClaimProbability{1.5}, 0.0}, 1}}, 0.0, 0.5};
  EXPECT_THROW(validate(p), DomainError);
  p.holdings[0].contract.frequency = ClaimProbability{0.5};
  p.holdings[0].count = -1;
  EXPECT_THROW(validate(p), DomainError);
  p.holdings[0].count = 1;
  p.target_loss_ratio = 0.0;
  EXPECT_THROW(validate(p), DomainError);
}

TEST(Underwriting, GroupFrequencyHolding) {
  const Portfolio p{"g", {{{"c", 1e6, {2e5, 1e5}, GroupFrequency{4.0}, 0.0}, 10}}, 0.0, 1.0};
  EXPECT_NEAR(technical_premium(p), 8e5, 1e-9);
}

TEST(Simulation, MeanAndSdAgainstCompoundPoisson) {
  // Compound Poisson: mean = lambda E[X], var = lambda E[X^2].
  const Portfolio p{"b", {{{"c", 1e6, {5e5, 2.5e5}, ClaimProbability{0.5}, 0.0}, 100}}, 0.0, 1.0};
  const auto s = simulate_portfolio_losses(p, 100000, RngSeed{42});
  const auto ln = lognormal_from_moments({5e5, 2.5e5});
  const double ex = lognormal_mean(ln);
  const double ex2 = std::exp(2.0 * ln.mu_log + 2.0 * ln.sigma_log * ln.sigma_log);
  EXPECT_NEAR(s.mean / (50.0 * ex), 1.0, 0.005);
  EXPECT_NEAR(s.sd / std::sqrt(50.0 * ex2), 1.0, 0.02);
  EXPECT_EQ(s.per_run_totals.size(), 100000u);
}

TEST(Simulation, ConventionMattersForBenchmark) {
  const Portfolio p{"b", {{{"c", 1e6, {5e5, 2.5e5}, ClaimProbability{0.5}, 0.0}, 100}}, 0.0, 1.0};
  SimulationOptions tb;
  tb.convention = MomentConvention::textbook;
  const auto log_var = simulate_portfolio_losses(p, 20000, RngSeed{1});
  const auto text = simulate_portfolio_losses(p, 20000, RngSeed{1}, tb);
  EXPECT_NEAR(log_var.mean / 22.9e6, 1.0, 0.02);
  EXPECT_NEAR(text.mean / 25e6, 1.0, 0.02);
}

TEST(Simulation, SeverityCapAndBernoulliModes) {
  const Portfolio p{"b", {{{"c", 1e6, {8e5, 8e5}, ClaimProbability{0.2}, 0.0}, 50}}, 0.0, 1.0};
  SimulationOptions capped;
  capped.cap_severity_at_limit = true;
  const auto a = simulate_portfolio_losses(p, 5000, RngSeed{9});
  const auto b = simulate_portfolio_losses(p, 5000, RngSeed{9}, capped);
  EXPECT_LT(b.mean, a.mean);
  SimulationOptions bern;
  bern.frequency = FrequencyModel::per_policy_bernoulli;
  const auto c = simulate_portfolio_losses(p, 20000, RngSeed{9}, bern);
  EXPECT_NEAR(c.mean / (10.0 * lognormal_mean(lognormal_from_moments({8e5, 8e5}))), 1.0, 0.03);
}

TEST(Simulation, RejectsZeroRuns) {
  const Portfolio p{"b", {}, 0.0, 1.0};
  EXPECT_THROW(simulate_portfolio_losses(p, 0, RngSeed{1}), DomainError);
}

TEST(Simulation, EmptyPortfolioLosesNothing) {
  const Portfolio p{"b", {}, 0.0, 1.0};
  const auto s = simulate_portfolio_losses(p, 10, RngSeed{1});
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_EQ(s.sd, 0.0);
}
