#include <gtest/gtest.h>

#include <cmath>

#include "cybersim/buyer.hpp"
#include "cybersim/scenarios.hpp"

using namespace cybersim;

namespace {
BuyerProfile benchmark_buyer(double p) { return {2e6, 3e-6, p, 1e6, 0.0, 1e6}; }
}  // namespace

TEST(Buyer, CaraUtility) {
  EXPECT_NEAR(cara_utility(0.0, 1e-6), 0.0, 1e-12);
  EXPECT_NEAR(cara_utility(1e6, 1e-6), (1.0 - std::exp(-1.0)) / 1e-6, 1e-6);
  EXPECT_THROW(cara_utility(1.0, 0.0), DomainError);
  EXPECT_EQ(risk_neutral_utility(3.5), 3.5);
}

TEST(Buyer, FullCoverageAtFairPremium) {
  const auto b = benchmark_buyer(0.1);
  EXPECT_NEAR(optimal_coverage(b, 0.1, 1000.0), 1e6, 1e-9);
}

TEST(Buyer, NoCoverageWhenPremiumAboveLossProbabilityByFar) {
  const auto b = benchmark_buyer(0.1);
  EXPECT_EQ(optimal_coverage(b, 0.9, 1000.0), 0.0);
}

TEST(Buyer, GridOptimumNearClosedForm) {
  const auto b = benchmark_buyer(0.1);
  for (double rate : {0.11, 0.13, 0.15}) {
    const double grid = optimal_coverage(b, rate, 1000.0);
    EXPECT_NEAR(grid, closed_form_coverage(b, rate), 1000.0) << rate;
  }
}

TEST(Buyer, MultiStateUtility) {
  const std::vector<LossState> states{{0.1, 100.0, 50.0, 0.0}, {0.2, 40.0, 40.0, 0.0}};
  const double eu = expected_utility(1000.0, 1e-3, 5.0, states);
  const double manual = 0.1 * cara_utility(945.0, 1e-3) + 0.2 * cara_utility(995.0, 1e-3) + 0.7 * cara_utility(995.0, 1e-3);
  EXPECT_NEAR(eu, manual, 1e-9);
  const std::vector<LossState> bad{{0.7, 1.0, 0.0, 0.0}, {0.7, 1.0, 0.0, 0.0}};
  EXPECT_THROW(expected_utility(1.0, 1.0, 0.0, bad), DomainError);
}

TEST(Buyer, Validation) {
  auto b = benchmark_buyer(0.1);
  b.risk_aversion = 0.0;
  EXPECT_THROW(validate(b), DomainError);
  b = benchmark_buyer(1.2);
  EXPECT_THROW(validate(b), DomainError);
  b = benchmark_buyer(0.1);
  EXPECT_THROW(expected_utility(b, 0.1, 2e6), DomainError);
  EXPECT_THROW(optimal_coverage(b, 0.1, 0.0), DomainError);
}
