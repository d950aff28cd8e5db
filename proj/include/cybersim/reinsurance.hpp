#pragma once

// Reinsurer pricing (loss-ratio rate, excess-of-loss layers) and the
// cedent's quota-share decision.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cybersim/error.hpp"
#include "cybersim/stochastic.hpp"
#include "cybersim/underwriting.hpp"

namespace cybersim {

/// The reinsurer's belief about pooled cedent losses.
struct ReinsurerView {
  LogNormalParams loss_distribution;
  double target_loss_ratio = 1.0;
  double max_cover = 0.0;
};

struct QuotaShareTerms {
  double rho = 0.0;                // fraction ceded
  double ceding_commission = 0.0;  // fraction of exposure, may be negative
  double reinsurance_rate = 0.0;
};

/// "layer xs attachment". rate and technical_premium are filled in by the
/// pricing functions.
struct XLTerms {
  double attachment = 0.0;
  double layer = 0.0;
  double rate = 0.0;
  double technical_premium = 0.0;
};

/// Single rate r such that expected indemnity over [0, max_cover] equals
/// target_loss_ratio * r * max_cover.
inline double reinsurance_rate(const ReinsurerView& view) {
  check(view.loss_distribution);
  if (view.loss_distribution.sigma_log == 0.0)
    throw DomainError("reinsurance_rate: degenerate loss distribution (sigma_log = 0)");
  if (!(view.target_loss_ratio > 0.0 && view.target_loss_ratio <= 1.0))
    throw DomainError("reinsurance_rate: target loss ratio must lie in (0, 1]");
  if (!(view.max_cover > 0.0)) throw DomainError("reinsurance_rate: max cover must be positive");
  return truncated_expectation(view.loss_distribution, view.max_cover) /
         (view.target_loss_ratio * view.max_cover);
}

/// Layer payout (L - B)+ - (L - B - A)+.
inline double xl_indemnity(double loss, const XLTerms& terms) {
  return std::clamp(loss - terms.attachment, 0.0, terms.layer);
}

/// Benchmark pricing rule: the rate is the probability that the loss
/// reaches the attachment.
inline double xl_rate_by_exceedance(const LogNormalParams& dist, const XLTerms& terms) {
  if (!(terms.attachment > 0.0)) throw DomainError("xl_rate_by_exceedance: attachment must be positive");
  return 1.0 - lognormal_cdf(dist, terms.attachment);
}

inline XLTerms price_xl_by_exceedance(const LogNormalParams& dist, XLTerms terms) {
  terms.rate = xl_rate_by_exceedance(dist, terms);
  terms.technical_premium = terms.rate * terms.layer;
  return terms;
}

struct XLSampleQuote {
  double probability = 0.0;         // share of runs with B < loss <= B + A
  double technical_premium = 0.0;   // probability * layer
  double expected_indemnity = 0.0;  // mean layer payout over all runs
};

/// Prices a layer against a cedent's own simulated losses.
inline XLSampleQuote xl_technical_premium_from_sample(const LossSample& sample, const XLTerms& terms) {
  if (sample.per_run_totals.empty()) throw DomainError("xl_technical_premium_from_sample: empty sample");
  std::size_t hits = 0;
  double indemnity = 0.0;
  for (double loss : sample.per_run_totals) {
    if (loss > terms.attachment && loss <= terms.attachment + terms.layer) ++hits;
    indemnity += xl_indemnity(loss, terms);
  }
  const double n = static_cast<double>(sample.per_run_totals.size());
  XLSampleQuote q;
  q.probability = static_cast<double>(hits) / n;
  q.technical_premium = q.probability * terms.layer;
  q.expected_indemnity = indemnity / n;
  return q;
}

/// Loss the cedent keeps after the quota share and any deductible.
inline double retained_loss(double loss, double rho, double deductible) {
  if (deductible <= 0.0) return loss * (1.0 - rho);
  if (loss <= deductible) return loss;
  return deductible + (1.0 - rho) * (loss - deductible);
}

inline double insurer_profit(double loss, double premium_written, double exposure, const QuotaShareTerms& qs,
                             double deductible = 0.0) {
  if (loss < 0.0 || premium_written < 0.0 || exposure < 0.0 || deductible < 0.0)
    throw DomainError("insurer_profit: inputs must be non-negative");
  return premium_written * (1.0 - qs.rho) + exposure * qs.rho * qs.ceding_commission -
         retained_loss(loss, qs.rho, deductible);
}

/// Average charged rate less the reinsurer's rate. Negative values are kept.
inline double ceding_commission(double avg_premium_rate, double reinsurance_rate) {
  return avg_premium_rate - reinsurance_rate;
}

enum class RhoStatus {
  not_needed,          // reserves already cover the stress loss
  feasible,
  insolvent_at_full_cession,  // required fraction exceeds 1, clamped
  no_feasible_cession,        // denominator <= 0: ceding more never helps
};

inline const char* to_string(RhoStatus s) {
  switch (s) {
    case RhoStatus::not_needed: return "not_needed";
    case RhoStatus::feasible: return "feasible";
    case RhoStatus::insolvent_at_full_cession: return "insolvent_even_with_full_cession";
    case RhoStatus::no_feasible_cession: return "no_feasible_cession";
  }
  return "unknown";
}

struct RhoSolution {
  double rho = 0.0;        // clamped to [0, 1]
  double unclamped = 0.0;  // raw root, NaN when there is none
  RhoStatus status = RhoStatus::not_needed;
};

/// Ceded fraction at which profit at the stress loss equals -capital.
inline RhoSolution optimal_rho(double stress_loss, double premium_written, double capital, double exposure,
                               double cc) {
  if (!(exposure > 0.0)) throw DomainError("optimal_rho: exposure must be positive");
  RhoSolution s;
  const double numerator = stress_loss - premium_written - capital;
  if (numerator <= 0.0) return s;
  const double denominator = stress_loss - premium_written + exposure * cc;
  if (denominator <= 0.0) {
    s.unclamped = std::numeric_limits<double>::quiet_NaN();
    s.rho = 1.0;
    s.status = RhoStatus::no_feasible_cession;
    return s;
  }
  s.unclamped = numerator / denominator;
  s.rho = std::clamp(s.unclamped, 0.0, 1.0);
  s.status = s.unclamped > 1.0 ? RhoStatus::insolvent_at_full_cession : RhoStatus::feasible;
  return s;
}

enum class CapMode {
  zero_run,           // runs above the attachment contribute nothing
  subtract_indemnity, // runs keep the loss net of the layer payout
};

/// Re-states a campaign as if the layer attaching at `attachment` were in
/// force. zero_run drops every run whose loss exceeds the attachment.
inline LossSample capped_loss_sample(const LossSample& sample, double attachment, CapMode mode = CapMode::zero_run,
                                     double layer = std::numeric_limits<double>::infinity()) {
  if (!(attachment > 0.0)) throw DomainError("capped_loss_sample: attachment must be positive");
  std::vector<double> totals;
  totals.reserve(sample.per_run_totals.size());
  const XLTerms terms{attachment, layer};
  for (double loss : sample.per_run_totals) {
    if (mode == CapMode::zero_run)
      totals.push_back(loss > attachment ? 0.0 : loss);
    else
      totals.push_back(loss - xl_indemnity(loss, terms));
  }
  return LossSample::from_totals(std::move(totals), sample.seed);
}

}  // namespace cybersim
