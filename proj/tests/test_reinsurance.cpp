#include <gtest/gtest.h>

#include <cmath>

#include "cybersim/reinsurance.hpp"

using namespace cybersim;

TEST(ReinsuranceRate, DistributionCAtHalfLossRatio) {
  const ReinsurerView v{lognormal_from_moments({30e6, 30e6}), 0.5, 500e6};
  EXPECT_NEAR(reinsurance_rate(v), 0.10788752863557846, 1e-10);
}

TEST(ReinsuranceRate, RejectsBadViews) {
  const auto ln = lognormal_from_moments({30e6, 30e6});
  EXPECT_THROW(reinsurance_rate({ln, 0.0, 500e6}), DomainError);
  EXPECT_THROW(reinsurance_rate({ln, 0.5, 0.0}), DomainError);
  EXPECT_THROW(reinsurance_rate({LogNormalParams{17.0, 0.0}, 0.5, 500e6}), DomainError);
}

TEST(XL, IndemnityClampsToLayer) {
  const XLTerms t{25e6, 25e6};
  EXPECT_EQ(xl_indemnity(10e6, t), 0.0);
  EXPECT_EQ(xl_indemnity(30e6, t), 5e6);
  EXPECT_EQ(xl_indemnity(80e6, t), 25e6);
}

TEST(XL, ExceedancePricing) {
  const auto t = price_xl_by_exceedance({16.9, 0.27}, {40e6, 10e6});
  EXPECT_NEAR(t.rate, 0.012594835401642154, 1e-13);
  EXPECT_NEAR(t.technical_premium, t.rate * 10e6, 1e-6);
  EXPECT_THROW(xl_rate_by_exceedance({16.9, 0.27}, {0.0, 1.0}), DomainError);
}

TEST(XL, SampleQuote) {
  const auto s = LossSample::from_totals({1.0, 5.0, 12.0, 30.0}, RngSeed{});
  const auto q = xl_technical_premium_from_sample(s, {4.0, 10.0});
  EXPECT_DOUBLE_EQ(q.probability, 0.5);  // 5 and 12
  EXPECT_DOUBLE_EQ(q.technical_premium, 5.0);
  EXPECT_DOUBLE_EQ(q.expected_indemnity, (1.0 + 8.0 + 10.0) / 4.0);
  EXPECT_THROW(xl_technical_premium_from_sample(LossSample{}, {4.0, 10.0}), DomainError);
}

TEST(QuotaShare, ProfitAndRetention) {
  const QuotaShareTerms qs{0.5, 0.1, 0.0};
  EXPECT_DOUBLE_EQ(retained_loss(10.0, 0.5, 0.0), 5.0);
  EXPECT_DOUBLE_EQ(retained_loss(10.0, 0.5, 4.0), 7.0);
  EXPECT_DOUBLE_EQ(retained_loss(3.0, 0.5, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(insurer_profit(10.0, 20.0, 100.0, qs), 10.0 + 5.0 - 5.0);
  EXPECT_THROW(insurer_profit(-1.0, 20.0, 100.0, qs), DomainError);
}

TEST(QuotaShare, CedingCommissionMayBeNegative) {
  EXPECT_NEAR(ceding_commission(0.08, 0.14), -0.06, 1e-15);
  EXPECT_NEAR(ceding_commission(0.24, 0.14), 0.10, 1e-15);
}

TEST(OptimalRho, EchoAtNinetyFive) {
  const auto s = optimal_rho(53069686.74, 24e6, 10798250.21, 100e6, 0.10);
  EXPECT_EQ(s.status, RhoStatus::feasible);
  EXPECT_NEAR(s.rho, 0.47, 0.005);
  const QuotaShareTerms qs{s.rho, 0.10, 0.0};
  EXPECT_NEAR(insurer_profit(53069686.74, 24e6, 100e6, qs), -10798250.21, 1e-6);
}

TEST(OptimalRho, Statuses) {
  EXPECT_EQ(optimal_rho(10.0, 8.0, 4.0, 100.0, 0.0).status, RhoStatus::not_needed);
  EXPECT_EQ(optimal_rho(10.0, 8.0, 4.0, 100.0, 0.0).rho, 0.0);
  // Commission so negative that ceding costs more than it relieves.
  const auto none = optimal_rho(20.0, 8.0, 1.0, 100.0, -0.5);
  EXPECT_EQ(none.status, RhoStatus::no_feasible_cession);
  EXPECT_TRUE(std::isnan(none.unclamped));
  const auto over = optimal_rho(100.0, 8.0, 1.0, 100.0, -0.8);
  EXPECT_EQ(over.status, RhoStatus::insolvent_at_full_cession);
  EXPECT_EQ(over.rho, 1.0);
  EXPECT_GT(over.unclamped, 1.0);
  EXPECT_THROW(optimal_rho(1.0, 1.0, 1.0, 0.0, 0.0), DomainError);
}

TEST(CappedSample, ZeroRunAndSubtractModes) {
  const auto s = LossSample::from_totals({10.0, 30.0, 60.0}, RngSeed{});
  const auto z = capped_loss_sample(s, 25.0);
  EXPECT_DOUBLE_EQ(z.mean, 10.0 / 3.0);
  const auto sub = capped_loss_sample(s, 25.0, CapMode::subtract_indemnity, 25.0);
  EXPECT_DOUBLE_EQ(sub.mean, (10.0 + 25.0 + 35.0) / 3.0);
  EXPECT_THROW(capped_loss_sample(s, 0.0), DomainError);
}
