#pragma once

// Frequency/severity distributions: log-normal severities parameterised
// from cash moments, Poisson claim counts, seeded substream sampling.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>

#include "cybersim/error.hpp"

namespace cybersim {

/// Mean and standard deviation of a loss variable, in currency units.
struct CashMoments {
  double mean = 0.0;
  double sd = 0.0;
};

/// Parameters of ln(X) ~ N(mu_log, sigma_log).
struct LogNormalParams {
  double mu_log = 0.0;
  double sigma_log = 0.0;

  friend bool operator==(const LogNormalParams&, const LogNormalParams&) = default;
};

struct PoissonParams {
  double lambda = 0.0;
};

struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// How cash moments map onto the log-scale sigma.
///
/// `paper` uses ln(1 + sd^2/mean^2) directly as sigma, which is the
/// convention every published simulation figure is consistent with.
/// `textbook` is exact moment matching: sigma = sqrt(ln(1 + sd^2/mean^2)).
/// Both share mu_log = ln(mean^2 / sqrt(mean^2 + sd^2)).
enum class MomentConvention { paper, textbook };

inline const char* to_string(MomentConvention c) {
  return c == MomentConvention::paper ? "paper" : "textbook";
}

inline LogNormalParams lognormal_from_moments(const CashMoments& m,
                                              MomentConvention convention = MomentConvention::paper) {
  if (!(m.mean > 0.0)) throw DomainError("lognormal_from_moments: mean must be positive");
  if (!(m.sd >= 0.0)) throw DomainError("lognormal_from_moments: sd must be non-negative");
  const double mean2 = m.mean * m.mean;
  const double log_var_term = std::log1p((m.sd * m.sd) / mean2);
  LogNormalParams p;
  p.mu_log = std::log(mean2 / std::sqrt(mean2 + m.sd * m.sd));
  p.sigma_log = convention == MomentConvention::paper ? log_var_term : std::sqrt(log_var_term);
  return p;
}

inline void check(const LogNormalParams& p) {
  if (!std::isfinite(p.mu_log) || !(p.sigma_log >= 0.0) || !std::isfinite(p.sigma_log))
    throw DomainError("log-normal parameters must be finite with sigma_log >= 0");
}

// Standard normal helpers.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("normal_quantile: q must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

/// E[X] of a log-normal.
inline double lognormal_mean(const LogNormalParams& p) {
  return std::exp(p.mu_log + 0.5 * p.sigma_log * p.sigma_log);
}

inline double lognormal_pdf(const LogNormalParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("lognormal_pdf: x must be positive");
  if (p.sigma_log == 0.0) return std::log(x) == p.mu_log ? std::numeric_limits<double>::infinity() : 0.0;
  const double z = (std::log(x) - p.mu_log) / p.sigma_log;
  return std::exp(-0.5 * z * z) / (x * p.sigma_log * std::sqrt(2.0 * std::numbers::pi));
}

inline double lognormal_cdf(const LogNormalParams& p, double x) {
  check(p);
  if (!(x > 0.0)) throw DomainError("lognormal_cdf: x must be positive");
  if (p.sigma_log == 0.0) return std::log(x) >= p.mu_log ? 1.0 : 0.0;
  return normal_cdf((std::log(x) - p.mu_log) / p.sigma_log);
}

inline double lognormal_quantile(const LogNormalParams& p, double q) {
  check(p);
  if (!(q > 0.0 && q < 1.0)) throw DomainError("lognormal_quantile: q must lie in (0, 1)");
  return std::exp(p.mu_log + p.sigma_log * normal_quantile(q));
}

inline double poisson_pmf(const PoissonParams& p, long long k) {
  if (k < 0) throw DomainError("poisson_pmf: k must be non-negative");
  if (!(p.lambda >= 0.0)) throw DomainError("poisson_pmf: lambda must be non-negative");
  if (p.lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(p.lambda) - p.lambda - boost::math::lgamma(kd + 1.0));
}

inline double poisson_cdf(const PoissonParams& p, long long k) {
  if (k < 0) throw DomainError("poisson_cdf: k must be non-negative");
  if (!(p.lambda >= 0.0)) throw DomainError("poisson_cdf: lambda must be non-negative");
  if (p.lambda == 0.0) return 1.0;
  // P(N <= k) = Q(k + 1, lambda), the regularised upper incomplete gamma.
  return boost::math::gamma_q(static_cast<double>(k) + 1.0, p.lambda);
}

/// Smallest k with poisson_cdf(k) >= q.
inline long long poisson_quantile(const PoissonParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("poisson_quantile: q must lie in (0, 1)");
  if (!(p.lambda >= 0.0)) throw DomainError("poisson_quantile: lambda must be non-negative");
  long long k = 0;
  while (poisson_cdf(p, k) < q) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Sampling

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform stream for one Monte Carlo run. The engine state depends only
/// on (master seed, stream index), so runs can be executed in any order
/// or on any thread and still reproduce the sequential result.
class SubstreamRng {
 public:
  SubstreamRng(RngSeed master, std::uint64_t stream)
      : engine_(splitmix64(splitmix64(master.value) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Poisson draw. Inversion by sequential search for lambda < 30, otherwise
/// Hormann's transformed rejection (PTRS).
template <class Rng>
long long sample_frequency(const PoissonParams& p, Rng& rng) {
  const double lam = p.lambda;
  if (lam <= 0.0) return 0;
  if (lam < 30.0) {
    const double u = rng.uniform();
    long long k = 0;
    double pk = std::exp(-lam);
    double cdf = pk;
    while (u > cdf) {
      ++k;
      pk *= lam / static_cast<double>(k);
      const double next = cdf + pk;
      if (next == cdf) break;  // tail exhausted in double precision
      cdf = next;
    }
    return k;
  }
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const auto k = static_cast<long long>(std::floor((2.0 * a / us + b) * u + lam + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double kd = static_cast<double>(k);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lam + kd * loglam - boost::math::lgamma(kd + 1.0))
      return k;
  }
}

/// Log-normal draw by inversion of a single uniform.
template <class Rng>
double sample_severity(const LogNormalParams& p, Rng& rng) {
  return std::exp(p.mu_log + p.sigma_log * normal_quantile(rng.uniform()));
}

// ---------------------------------------------------------------------------
// Partial expectations

/// Closed form of E[X; X <= upper] for a log-normal.
inline double partial_expectation(const LogNormalParams& p, double upper) {
  check(p);
  if (!(upper > 0.0)) throw DomainError("partial_expectation: upper must be positive");
  if (std::isinf(upper)) return lognormal_mean(p);
  if (p.sigma_log == 0.0) return std::exp(p.mu_log) <= upper ? std::exp(p.mu_log) : 0.0;
  const double s = p.sigma_log;
  return lognormal_mean(p) * normal_cdf((std::log(upper) - p.mu_log - s * s) / s);
}

/// Integral of x f(x) over [0, upper] by adaptive 15-point Gauss-Kronrod.
///
/// The integration runs in units of the median, which keeps the integrand
/// O(1) whatever the currency scale. Throws NumericError if the error
/// estimate exceeds 1e-6 of the result.
inline double truncated_expectation(const LogNormalParams& p, double upper) {
  check(p);
  if (!(upper > 0.0)) throw DomainError("truncated_expectation: upper must be positive");
  if (p.sigma_log == 0.0) return partial_expectation(p, upper);

  const double scale = std::exp(p.mu_log);
  const double s = p.sigma_log;
  const double norm = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
  // y = x / scale: x f(x) dx = scale * g(y) dy with ln(y) ~ N(0, s).
  auto integrand = [s, norm](double y) {
    if (y <= 0.0) return 0.0;
    const double z = std::log(y) / s;
    return norm * std::exp(-0.5 * z * z);
  };

  const double upper_scaled = upper / scale;
  constexpr double kRelTol = 1e-8;
  constexpr unsigned kMaxDepth = 30;
  double error = 0.0;
  double result = 0.0;
  if (std::isinf(upper_scaled)) {
    result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), kMaxDepth, kRelTol, &error);
  } else {
    // The integrand peaks at y = 1; split there so the peak is a panel edge.
    const double split = std::min(upper_scaled, 1.0);
    double e1 = 0.0;
    double e2 = 0.0;
    result = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, split, kMaxDepth, kRelTol, &e1);
    if (upper_scaled > split)
      result += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          integrand, split, upper_scaled, kMaxDepth, kRelTol, &e2);
    error = e1 + e2;
  }
  result *= scale;
  error *= scale;
  if (!std::isfinite(result) || error > 1e-6 * std::fabs(result) + std::numeric_limits<double>::min())
    throw NumericError("truncated_expectation: quadrature did not converge", result, error);
  return result;
}

/// Maximum-likelihood log-normal fit: mean and (population) sd of the logs.
inline LogNormalParams fit_lognormal(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("fit_lognormal: need at least 2 samples");
  double sum = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw DomainError("fit_lognormal: samples must be positive");
    sum += std::log(x);
  }
  const double n = static_cast<double>(samples.size());
  const double mu = sum / n;
  double ss = 0.0;
  for (double x : samples) {
    const double d = std::log(x) - mu;
    ss += d * d;
  }
  return {mu, std::sqrt(ss / n)};
}

}  // namespace cybersim
