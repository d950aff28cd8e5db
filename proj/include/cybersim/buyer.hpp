#pragma once

// Expected-utility demand for cover under CARA preferences.

#include <algorithm>
#include <cmath>
#include <span>

#include "cybersim/error.hpp"

namespace cybersim {

struct BuyerProfile {
  double wealth = 0.0;
  double risk_aversion = 0.0;  // alpha, per currency unit
  double loss_probability = 0.0;
  double loss_size = 0.0;
  double deductible = 0.0;
  double limit = 0.0;  // largest coverage the insurer will write
};

/// One loss state of the multi-state buyer problem.
struct LossState {
  double probability = 0.0;
  double loss = 0.0;
  double coverage = 0.0;
  double deductible = 0.0;
};

inline void validate(const BuyerProfile& b) {
  if (!(b.loss_probability >= 0.0 && b.loss_probability <= 1.0))
    throw DomainError("buyer: loss probability must lie in [0, 1]");
  if (!(b.risk_aversion > 0.0)) throw DomainError("buyer: risk aversion must be positive");
  if (!(b.deductible >= 0.0)) throw DomainError("buyer: deductible must be non-negative");
  if (!(b.limit > 0.0)) throw DomainError("buyer: limit must be positive");
}

/// u(w) = (1 - exp(-alpha w)) / alpha.
inline double cara_utility(double w, double alpha) {
  if (alpha == 0.0) throw DomainError("cara_utility: alpha = 0, use risk_neutral_utility");
  return -std::expm1(-alpha * w) / alpha;
}

/// alpha -> 0 limit of cara_utility.
inline double risk_neutral_utility(double w) { return w; }

/// Weighted sum over loss states plus the residual no-loss state, with a
/// total cash premium already fixed.
inline double expected_utility(double initial_wealth, double alpha, double premium,
                               std::span<const LossState> states) {
  double no_loss = 1.0;
  double eu = 0.0;
  for (const auto& s : states) {
    if (!(s.probability >= 0.0)) throw DomainError("expected_utility: state probability must be non-negative");
    no_loss -= s.probability;
    eu += s.probability * cara_utility(initial_wealth - premium - s.loss + s.coverage - s.deductible, alpha);
  }
  if (no_loss < -1e-12) throw DomainError("expected_utility: state probabilities exceed 1");
  return eu + std::max(no_loss, 0.0) * cara_utility(initial_wealth - premium, alpha);
}

/// Two-state expected utility at premium P(C) = rate * C.
inline double expected_utility(const BuyerProfile& b, double premium_rate, double coverage) {
  validate(b);
  if (!(coverage >= 0.0 && coverage <= b.limit)) throw DomainError("expected_utility: coverage outside [0, limit]");
  const LossState loss{b.loss_probability, b.loss_size, coverage, b.deductible};
  return expected_utility(b.wealth, b.risk_aversion, premium_rate * coverage, std::span(&loss, 1));
}

/// Grid search over [0, limit] in steps of grid_step (the limit itself is
/// always evaluated). Ties go to the smaller coverage.
inline double optimal_coverage(const BuyerProfile& b, double premium_rate, double grid_step) {
  validate(b);
  if (!(grid_step > 0.0)) throw DomainError("optimal_coverage: grid_step must be positive");
  double best_c = 0.0;
  double best_u = expected_utility(b, premium_rate, 0.0);
  auto consider = [&](double c) {
    const double u = expected_utility(b, premium_rate, c);
    if (u > best_u) {
      best_u = u;
      best_c = c;
    }
  };
  const auto steps = static_cast<long long>(std::floor(b.limit / grid_step));
  for (long long i = 1; i <= steps; ++i) consider(std::min(b.limit, static_cast<double>(i) * grid_step));
  if (static_cast<double>(steps) * grid_step < b.limit) consider(b.limit);
  return best_c;
}

}  // namespace cybersim
