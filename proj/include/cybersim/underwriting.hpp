#pragma once

// Insurer side: portfolios of contract groups, technical premium and
// loading, Monte Carlo loss campaigns and quantile stress tests.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "cybersim/error.hpp"
#include "cybersim/parallel.hpp"
#include "cybersim/stochastic.hpp"

namespace cybersim {

/// Per-policy probability of a claim in the period.
struct ClaimProbability {
  double value = 0.0;
};

/// Expected claim count for a whole contract group.
struct GroupFrequency {
  double lambda = 0.0;
};

struct ContractSpec {
  std::string id;
  double limit = 0.0;
  CashMoments severity;
  std::variant<ClaimProbability, GroupFrequency> frequency = ClaimProbability{};
  double premium_rate = 0.0;
};

struct Holding {
  ContractSpec contract;
  long long count = 0;
};

struct Portfolio {
  std::string name;
  std::vector<Holding> holdings;
  double capital = 0.0;
  double target_loss_ratio = 1.0;
};

/// Result of one Monte Carlo campaign.
struct LossSample {
  std::vector<double> per_run_totals;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  RngSeed seed;

  static LossSample from_totals(std::vector<double> totals, RngSeed seed) {
    LossSample s;
    s.per_run_totals = std::move(totals);
    s.seed = seed;
    const auto n = s.per_run_totals.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double x : s.per_run_totals) sum += x;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
      double ss = 0.0;
      for (double x : s.per_run_totals) ss += (x - s.mean) * (x - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
  }
};

struct StressPoint {
  double frequency_quantile = 0.0;
  double severity_quantile = 0.0;
  double total_loss = 0.0;
  std::vector<double> per_contract_breakdown;  // aligned with Portfolio::holdings
};

enum class FrequencyModel {
  per_type_poisson,  // one Poisson(pi_L * count) per contract group
  per_policy_bernoulli,
};

struct SimulationOptions {
  MomentConvention convention = MomentConvention::paper;
  FrequencyModel frequency = FrequencyModel::per_type_poisson;
  bool cap_severity_at_limit = false;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline void validate(const Portfolio& p) {
  if (!(p.target_loss_ratio > 0.0 && p.target_loss_ratio <= 1.0))
    throw DomainError("portfolio '" + p.name + "': target loss ratio must lie in (0, 1]");
  for (const auto& h : p.holdings) {
    if (h.count < 0) throw DomainError("portfolio '" + p.name + "': negative count for " + h.contract.id);
    if (const auto* cp = std::get_if<ClaimProbability>(&h.contract.frequency)) {
      if (!(cp->value >= 0.0 && cp->value <= 1.0))
        throw DomainError("contract " + h.contract.id + ": claim probability must lie in [0, 1]");
    } else if (!(std::get<GroupFrequency>(h.contract.frequency).lambda >= 0.0)) {
      throw DomainError("contract " + h.contract.id + ": frequency must be non-negative");
    }
  }
}

/// Expected claim count of a contract group.
inline double group_lambda(const Holding& h) {
  if (const auto* cp = std::get_if<ClaimProbability>(&h.contract.frequency))
    return cp->value * static_cast<double>(h.count);
  return std::get<GroupFrequency>(h.contract.frequency).lambda;
}

inline double exposure(const Portfolio& p) {
  double total = 0.0;
  for (const auto& h : p.holdings) total += static_cast<double>(h.count) * h.contract.limit;
  return total;
}

/// Break-even premium: expected claim count times cash mean severity.
inline double technical_premium(const Portfolio& p) {
  double total = 0.0;
  for (const auto& h : p.holdings) total += group_lambda(h) * h.contract.severity.mean;
  return total;
}

/// Expected loss implied by the fitted log-normal severities. Differs from
/// technical_premium() under the paper convention, where the log-normal
/// mean sits below the cash mean.
inline double model_expected_loss(const Portfolio& p, MomentConvention convention) {
  double total = 0.0;
  for (const auto& h : p.holdings) {
    const double lam = group_lambda(h);
    if (lam == 0.0) continue;
    total += lam * lognormal_mean(lognormal_from_moments(h.contract.severity, convention));
  }
  return total;
}

/// Rate surcharge, as a fraction of exposure, that brings the expected loss
/// ratio down to target_lr.
inline double loading(double technical_premium, double target_lr, double exposure) {
  if (!(target_lr > 0.0 && target_lr <= 1.0)) throw DomainError("loading: target loss ratio must lie in (0, 1]");
  if (!(exposure > 0.0)) throw DomainError("loading: exposure must be positive");
  return (technical_premium / target_lr - technical_premium) / exposure;
}

inline double weighted_average_rate(const Portfolio& p, double loading_rate) {
  const double ex = exposure(p);
  if (!(ex > 0.0)) throw DomainError("weighted_average_rate: portfolio has no exposure");
  return technical_premium(p) / ex + loading_rate;
}

inline double reserves(const Portfolio& p, double premium_income) { return premium_income + p.capital; }

/// Runs `runs` independent periods. Run r draws from substream (seed, r)
/// only, so the result is identical for any thread count.
inline LossSample simulate_portfolio_losses(const Portfolio& p, std::size_t runs, RngSeed seed,
                                            const SimulationOptions& options = {}) {
  if (runs < 1) throw DomainError("simulate_portfolio_losses: runs must be >= 1");
  validate(p);

  struct Group {
    LogNormalParams severity;
    double lambda;
    double claim_probability;
    long long count;
    double limit;
  };
  std::vector<Group> groups;
  for (const auto& h : p.holdings) {
    const double lam = group_lambda(h);
    if (lam == 0.0) continue;
    const auto* cp = std::get_if<ClaimProbability>(&h.contract.frequency);
    groups.push_back({lognormal_from_moments(h.contract.severity, options.convention), lam,
                      cp ? cp->value : 0.0, h.count, h.contract.limit});
  }

  std::vector<double> totals(runs, 0.0);
  parallel_for(runs, options.threads, [&](std::size_t run) {
    SubstreamRng rng(seed, run);
    double total = 0.0;
    for (const auto& g : groups) {
      long long claims = 0;
      if (options.frequency == FrequencyModel::per_policy_bernoulli && g.count > 0 && g.claim_probability > 0.0) {
        for (long long i = 0; i < g.count; ++i)
          if (rng.uniform() < g.claim_probability) ++claims;
      } else {
        claims = sample_frequency(PoissonParams{g.lambda}, rng);
      }
      for (long long c = 0; c < claims; ++c) {
        double severity = sample_severity(g.severity, rng);
        if (options.cap_severity_at_limit && severity > g.limit) severity = g.limit;
        total += severity;
      }
    }
    totals[run] = total;
  });
  return LossSample::from_totals(std::move(totals), seed);
}

/// Deterministic stress loss: for every contract group, the freq_q claim
/// count quantile times the sev_q severity quantile, summed over groups.
inline StressPoint stress_loss(const Portfolio& p, double freq_q, double sev_q,
                               MomentConvention convention = MomentConvention::paper) {
  if (!(freq_q > 0.0 && freq_q < 1.0) || !(sev_q > 0.0 && sev_q < 1.0))
    throw DomainError("stress_loss: quantiles must lie in (0, 1)");
  StressPoint s;
  s.frequency_quantile = freq_q;
  s.severity_quantile = sev_q;
  s.per_contract_breakdown.reserve(p.holdings.size());
  for (const auto& h : p.holdings) {
    const double lam = group_lambda(h);
    double part = 0.0;
    if (lam > 0.0) {
      const auto claims = poisson_quantile(PoissonParams{lam}, freq_q);
      if (claims > 0)
        part = static_cast<double>(claims) *
               lognormal_quantile(lognormal_from_moments(h.contract.severity, convention), sev_q);
    }
    s.per_contract_breakdown.push_back(part);
  }
  s.total_loss = std::accumulate(s.per_contract_breakdown.begin(), s.per_contract_breakdown.end(), 0.0);
  return s;
}

}  // namespace cybersim
