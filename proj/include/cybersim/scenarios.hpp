#pragma once

// Scenario runners. Each turns a validated config into a Report; every
// number in the report is a function of (config, seed) only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cybersim/buyer.hpp"
#include "cybersim/config.hpp"
#include "cybersim/naic.hpp"
#include "cybersim/reinsurance.hpp"
#include "cybersim/report.hpp"
#include "cybersim/stochastic.hpp"
#include "cybersim/underwriting.hpp"

#ifndef CYBERSIM_DATA_DIR
#define CYBERSIM_DATA_DIR "data"
#endif

namespace cybersim {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Seed of a named campaign, derived from the master seed. Campaigns in a
/// scenario never share a substream.
inline RngSeed campaign_seed(std::uint64_t master, std::string_view campaign) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : campaign) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return RngSeed{splitmix64(master ^ splitmix64(h))};
}

/// "10%", "97.5%": percentages without float noise.
inline std::string percent_label(double p) {
  return format_number(std::round(p * 1e8) / 1e6) + "%";
}

/// Bare level for column names: 0.975 -> "97.5".
inline std::string level_label(double p) { return format_number(std::round(p * 1e8) / 1e6); }

inline std::string money_label(double v) {
  if (v >= 1e6) return format_number(std::round(v / 1e4) / 100) + "mn";
  if (v >= 1e3) return format_number(std::round(v / 10) / 100) + "k";
  return format_number(v);
}

/// Rounds a rate to the reinsurer's quoting precision (0: no rounding).
inline double quote_rate(double rate, double precision) {
  if (!(precision > 0.0)) return rate;
  return std::round(rate / precision) * precision;
}

inline Plot histogram_plot(std::string id, std::string title, const std::vector<std::pair<std::string, const LossSample*>>& samples,
                           double bin) {
  Plot p{std::move(id), std::move(title), "loss (USD, bin left edge)", "runs", {}};
  for (const auto& [name, s] : samples) {
    std::map<long long, double> counts;
    for (double x : s->per_run_totals) counts[static_cast<long long>(std::floor(x / bin))] += 1.0;
    PlotSeries series{name, {}};
    for (const auto& [b, n] : counts) series.points.emplace_back(static_cast<double>(b) * bin, n);
    p.series.push_back(std::move(series));
  }
  return p;
}

// ---------------------------------------------------------------------------
// benchmark

/// Interior optimum of the two-state CARA problem with a linear premium.
inline double closed_form_coverage(const BuyerProfile& b, double rate) {
  if (b.loss_probability <= 0.0 || rate >= 1.0) return 0.0;
  if (rate <= 0.0 || b.loss_probability >= 1.0) return b.limit;
  const double c = b.loss_size + b.deductible +
                   std::log(b.loss_probability * (1.0 - rate) / (rate * (1.0 - b.loss_probability))) / b.risk_aversion;
  return std::clamp(c, 0.0, b.limit);
}

inline Report run_benchmark(const BenchmarkConfig& cfg) {
  Report rep;
  rep.scenario = "benchmark";
  rep.seed = cfg.run.seed;
  rep.runs = cfg.run.runs;
  rep.convention = to_string(cfg.run.convention);
  const auto sim = cfg.run.simulation();
  const LogNormalParams sev = lognormal_from_moments(cfg.severity, cfg.run.convention);

  Table t1("1", "Expected versus simulated benchmark losses",
           {{"expected_loss", Unit::currency}, {"simulated_loss", Unit::currency}, {"simulated_sd", Unit::currency},
            {"model_expected_loss", Unit::currency}, {"technical_rate", Unit::rate}});
  Table fit("fitted_distribution", "Log-normal fit to simulated total losses",
            {{"mu_log", Unit::parameter}, {"sigma_log", Unit::parameter}, {"zero_runs_excluded", Unit::count}});

  std::vector<LossSample> samples;
  std::vector<std::string> labels;
  const LossSample* reinsured = nullptr;
  for (double p : cfg.claim_probabilities) {
    Portfolio port{"benchmark", {{ContractSpec{"policy", cfg.limit, cfg.severity, ClaimProbability{p}, 0.0}, cfg.policies}}, 0.0, 1.0};
    samples.push_back(simulate_portfolio_losses(port, cfg.run.runs, campaign_seed(cfg.run.seed, "benchmark/" + percent_label(p)), sim));
    labels.push_back(percent_label(p));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double p = cfg.claim_probabilities[i];
    Portfolio port{"benchmark", {{ContractSpec{"policy", cfg.limit, cfg.severity, ClaimProbability{p}, 0.0}, cfg.policies}}, 0.0, 1.0};
    const double ex = exposure(port);
    t1.add_row(labels[i], {technical_premium(port), samples[i].mean, samples[i].sd,
                           model_expected_loss(port, cfg.run.convention), ex > 0 ? technical_premium(port) / ex : kNaN});
    std::vector<double> positive;
    for (double x : samples[i].per_run_totals)
      if (x > 0.0) positive.push_back(x);
    const double excluded = static_cast<double>(samples[i].per_run_totals.size() - positive.size());
    if (positive.size() >= 2) {
      const auto f = fit_lognormal(positive);
      fit.add_row(labels[i], {f.mu_log, f.sigma_log, excluded});
    } else {
      fit.add_row(labels[i], {kNaN, kNaN, excluded});
    }
    if (std::fabs(p - cfg.reinsurance.claim_probability) < 1e-12) reinsured = &samples[i];
  }
  fit.add_row("pinned", {cfg.reinsurance.fitted.mu_log, cfg.reinsurance.fitted.sigma_log, kNaN});
  fit.add_note("'pinned' is the configured pricing distribution used for the excess-of-loss grid");

  // Excess-of-loss grid, priced and re-simulated on the pinned distribution.
  Table t2("2", "Excess-of-loss reinsurance on the pinned fitted distribution",
           {{"attachment", Unit::currency}, {"layer", Unit::currency}, {"rate", Unit::probability},
            {"technical_premium", Unit::currency}, {"expected_indemnity", Unit::currency},
            {"capped_loss", Unit::currency}, {"loss_reduction", Unit::currency}});
  std::vector<double> pinned(cfg.run.runs);
  const RngSeed pinned_seed = campaign_seed(cfg.run.seed, "benchmark/pinned");
  parallel_for(cfg.run.runs, cfg.run.threads, [&](std::size_t r) {
    SubstreamRng rng(pinned_seed, r);
    pinned[r] = sample_severity(cfg.reinsurance.fitted, rng);
  });
  const LossSample pinned_sample = LossSample::from_totals(std::move(pinned), pinned_seed);
  double baseline = cfg.reinsurance.baseline_loss;
  if (baseline <= 0.0) baseline = reinsured ? reinsured->mean : pinned_sample.mean;
  for (const auto& layer : cfg.reinsurance.layers) {
    const XLTerms priced = price_xl_by_exceedance(cfg.reinsurance.fitted, layer);
    double indemnity = 0.0;
    for (double x : pinned_sample.per_run_totals) indemnity += xl_indemnity(x, priced);
    indemnity /= static_cast<double>(pinned_sample.per_run_totals.size());
    const LossSample capped = capped_loss_sample(pinned_sample, layer.attachment, cfg.reinsurance.cap_mode, layer.layer);
    t2.add_row(money_label(layer.layer) + " xs " + money_label(layer.attachment),
               {layer.attachment, layer.layer, priced.rate, priced.technical_premium, indemnity, capped.mean,
                baseline - capped.mean});
  }
  t2.add_note(std::string("capped_loss uses cap mode ") + to_string(cfg.reinsurance.cap_mode) +
              "; loss_reduction is measured from " + money_label(baseline));

  // Buyer demand at the technical rate of each frequency.
  Table buyer("buyer_optimum", "Utility-maximising coverage at the technical premium rate",
              {{"premium_rate", Unit::rate}, {"optimal_coverage", Unit::currency}, {"closed_form_coverage", Unit::currency},
               {"coverage_ratio", Unit::ratio}});
  Plot utility{"buyer_utility", "Buyer expected utility against coverage ratio", "coverage / limit", "expected utility", {}};
  for (double p : cfg.claim_probabilities) {
    const BuyerProfile b{cfg.buyer.wealth, cfg.buyer.risk_aversion, p, cfg.severity.mean, cfg.buyer.deductible, cfg.limit};
    const double rate = p * cfg.severity.mean / cfg.limit;
    const double c = optimal_coverage(b, rate, cfg.buyer.grid_step);
    buyer.add_row(percent_label(p), {rate, c, closed_form_coverage(b, rate), c / cfg.limit});
    PlotSeries s{"pi=" + format_number(p), {}};
    for (std::size_t i = 0; i < cfg.buyer.curve_points; ++i) {
      const double ratio = static_cast<double>(i) / static_cast<double>(cfg.buyer.curve_points - 1);
      s.points.emplace_back(ratio, expected_utility(b, rate, std::min(cfg.limit, ratio * cfg.limit)));
    }
    utility.series.push_back(std::move(s));
  }

  // Plot data for the input distributions and the simulated totals.
  Plot sev_pdf{"severity_pdf", "Benchmark severity density", "loss (USD)", "density", {{"severity", {}}}};
  const double hi = lognormal_quantile(sev, 0.9999);
  for (int i = 1; i <= 200; ++i) {
    const double x = hi * i / 200.0;
    sev_pdf.series[0].points.emplace_back(x, lognormal_pdf(sev, x));
  }
  Plot freq_pmf{"frequency_pmf", "Benchmark claim count probabilities", "claims", "probability", {}};
  for (double p : cfg.claim_probabilities) {
    const PoissonParams pp{p * static_cast<double>(cfg.policies)};
    PlotSeries s{"lambda=" + format_number(pp.lambda), {}};
    const long long kmax = poisson_quantile(pp, 0.9999) + 1;
    for (long long k = 0; k <= kmax; ++k) s.points.emplace_back(static_cast<double>(k), poisson_pmf(pp, k));
    freq_pmf.series.push_back(std::move(s));
  }
  std::vector<std::pair<std::string, const LossSample*>> hist;
  for (std::size_t i = 0; i < samples.size(); ++i) hist.emplace_back(labels[i], &samples[i]);

  rep.tables = {std::move(t1), std::move(fit), std::move(t2), std::move(buyer)};
  rep.plots = {std::move(sev_pdf), std::move(freq_pmf),
               histogram_plot("loss_histogram", "Simulated total losses", hist, cfg.histogram_bin), std::move(utility)};
  return rep;
}

// ---------------------------------------------------------------------------
// panel

struct PanelInsurerResult {
  std::string name;
  Portfolio portfolio;
  double technical_premium = 0.0;
  double exposure = 0.0;
  double premium_income = 0.0;
  double charged_rate = 0.0;
  double capital = 0.0;
  LossSample sample;
  std::vector<StressPoint> stress;  // aligned with stress levels
};

inline Portfolio build_portfolio(const PanelConfig& cfg, const InsurerConfig& ins) {
  Portfolio p{ins.name, {}, 0.0, ins.target_loss_ratio};
  for (auto k : cfg.contracts) {
    k.premium_rate = std::get<ClaimProbability>(k.frequency).value * k.severity.mean / k.limit;
    const auto it = ins.counts.find(k.id);
    p.holdings.push_back({k, it == ins.counts.end() ? 0 : it->second});
  }
  return p;
}

inline Report run_panel(const PanelConfig& cfg) {
  Report rep;
  rep.scenario = "panel";
  rep.seed = cfg.run.seed;
  rep.runs = cfg.run.runs;
  rep.convention = to_string(cfg.run.convention);
  const auto conv = cfg.run.convention;

  // Reinsurer distributions and rate grid.
  Table t3("3", "Reinsurer loss distributions",
           {{"mean", Unit::currency}, {"sd", Unit::currency}, {"mu_log", Unit::parameter}, {"sigma_log", Unit::parameter},
            {"quantile_99.5", Unit::currency}});
  std::vector<Column> lr_cols;
  for (double lr : cfg.reinsurer.loss_ratios) lr_cols.push_back({format_number(lr), Unit::rate});
  Table t4("4", "Reinsurance rate by target loss ratio at fixed maximum cover", lr_cols);
  Plot pdf{"reinsurer_pdf", "Reinsurer loss densities", "loss (USD)", "density", {}};
  Plot cdf{"reinsurer_cdf", "Reinsurer loss distribution functions", "loss (USD)", "probability", {}};
  double qs_rate = kNaN;
  for (const auto& d : cfg.reinsurer.distributions) {
    const LogNormalParams ln = lognormal_from_moments(d.moments, conv);
    t3.add_row(d.id, {d.moments.mean, d.moments.sd, ln.mu_log, ln.sigma_log, lognormal_quantile(ln, 0.995)});
    std::vector<double> rates;
    for (double lr : cfg.reinsurer.loss_ratios) rates.push_back(reinsurance_rate({ln, lr, cfg.reinsurer.max_cover}));
    t4.add_row(d.id, rates);
    if (d.id == cfg.reinsurer.quota_share_distribution)
      qs_rate = reinsurance_rate({ln, cfg.reinsurer.quota_share_loss_ratio, cfg.reinsurer.max_cover});
    PlotSeries ps{d.id, {}}, cs{d.id, {}};
    for (int i = 1; i <= 200; ++i) {
      const double x = cfg.plot_loss_max * i / 200.0;
      ps.points.emplace_back(x, lognormal_pdf(ln, x));
      cs.points.emplace_back(x, lognormal_cdf(ln, x));
    }
    pdf.series.push_back(std::move(ps));
    cdf.series.push_back(std::move(cs));
  }
  const double qs_quoted = quote_rate(qs_rate, cfg.reinsurer.quote_precision);
  Table qs("quota_share", "Quota-share reinsurance rate offered to the panel",
           {{"loss_ratio", Unit::ratio}, {"rate", Unit::rate}, {"quoted_rate", Unit::rate}});
  qs.add_row(cfg.reinsurer.quota_share_distribution, {cfg.reinsurer.quota_share_loss_ratio, qs_rate, qs_quoted});

  // Contracts.
  Table t5("5", "Insurance contracts in the market",
           {{"limit", Unit::currency}, {"mean", Unit::currency}, {"sd", Unit::currency}, {"claim_probability", Unit::probability},
            {"expected_loss", Unit::currency}, {"premium_rate", Unit::rate}, {"mu_log", Unit::parameter},
            {"sigma_log", Unit::parameter}});
  for (const auto& k : cfg.contracts) {
    const double pi = std::get<ClaimProbability>(k.frequency).value;
    const auto ln = lognormal_from_moments(k.severity, conv);
    t5.add_row(k.id, {k.limit, k.severity.mean, k.severity.sd, pi, pi * k.severity.mean, pi * k.severity.mean / k.limit,
                      ln.mu_log, ln.sigma_log});
  }

  // Portfolios, campaigns, stress tests.
  std::vector<PanelInsurerResult> results;
  for (const auto& ins : cfg.insurers) {
    PanelInsurerResult r;
    r.name = ins.name;
    r.portfolio = build_portfolio(cfg, ins);
    r.technical_premium = technical_premium(r.portfolio);
    r.exposure = exposure(r.portfolio);
    r.premium_income = r.technical_premium / ins.target_loss_ratio;
    r.charged_rate = r.exposure > 0 ? r.premium_income / r.exposure : kNaN;
    r.sample = simulate_portfolio_losses(r.portfolio, cfg.run.runs, campaign_seed(cfg.run.seed, "panel/" + ins.name),
                                         cfg.run.simulation());
    r.capital = ins.capital ? *ins.capital : r.sample.mean;
    r.portfolio.capital = r.capital;
    for (double q : cfg.stress_levels) r.stress.push_back(stress_loss(r.portfolio, q, q, conv));
    results.push_back(std::move(r));
  }

  std::vector<Column> t6cols;
  for (const auto& k : cfg.contracts) t6cols.push_back({k.id, Unit::count});
  t6cols.push_back({"exposure", Unit::currency});
  t6cols.push_back({"technical_premium", Unit::currency});
  Table t6("6", "Policies written by the insurance panel", t6cols);
  std::vector<double> totals(t6cols.size(), 0.0);
  for (const auto& r : results) {
    std::vector<double> row;
    for (const auto& h : r.portfolio.holdings) row.push_back(static_cast<double>(h.count));
    row.push_back(r.exposure);
    row.push_back(r.technical_premium);
    for (std::size_t i = 0; i < row.size(); ++i) totals[i] += row[i];
    t6.add_row(r.name, row);
  }
  t6.add_row("Total", totals);

  Table t7("7", "Premium loading for the target loss ratio",
           {{"technical_premium", Unit::currency}, {"target_loss_ratio", Unit::ratio}, {"exposure", Unit::currency},
            {"technical_rate", Unit::rate}, {"loading", Unit::rate}, {"charged_rate", Unit::rate}});
  Plot loading_curve{"loading_curve", "Loading against target loss ratio", "target loss ratio", "loading", {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const double lr = cfg.insurers[i].target_loss_ratio;
    const double load = r.exposure > 0 ? loading(r.technical_premium, lr, r.exposure) : kNaN;
    t7.add_row(r.name, {r.technical_premium, lr, r.exposure, r.exposure > 0 ? r.technical_premium / r.exposure : kNaN, load,
                        r.exposure > 0 ? weighted_average_rate(r.portfolio, load) : kNaN});
    if (r.exposure > 0) {
      PlotSeries s{r.name, {}};
      for (int k = 1; k <= 20; ++k) s.points.emplace_back(k * 0.05, loading(r.technical_premium, k * 0.05, r.exposure));
      loading_curve.series.push_back(std::move(s));
    }
  }

  std::vector<Column> t9cols{{"premium_income", Unit::currency}, {"capital", Unit::currency}, {"reserves", Unit::currency},
                             {"simulated_mean", Unit::currency}, {"simulated_sd", Unit::currency}};
  for (double q : cfg.stress_levels) t9cols.push_back({"stress_" + level_label(q), Unit::currency});
  Table t9("9", "Simulated losses and stress tests", t9cols);
  std::vector<Column> sbcols;
  for (const auto& k : cfg.contracts) sbcols.push_back({k.id, Unit::currency});
  sbcols.push_back({"total", Unit::currency});
  Table breakdown("stress_breakdown", "Stress loss by contract group", sbcols);
  for (const auto& r : results) {
    std::vector<double> row{r.premium_income, r.capital, reserves(r.portfolio, r.premium_income), r.sample.mean, r.sample.sd};
    for (std::size_t s = 0; s < r.stress.size(); ++s) {
      row.push_back(r.stress[s].total_loss);
      auto parts = r.stress[s].per_contract_breakdown;
      parts.push_back(r.stress[s].total_loss);
      breakdown.add_row(r.name + "@" + level_label(cfg.stress_levels[s]), parts);
    }
    t9.add_row(r.name, row);
  }

  // Quota share: optimal ceded fraction and profit at the baseline loss.
  std::vector<Column> t10cols{{"ceding_commission", Unit::rate}};
  for (double q : cfg.stress_levels) t10cols.push_back({"rho_" + level_label(q), Unit::ratio});
  t10cols.push_back({"profit_rho_0", Unit::currency});
  for (double q : cfg.stress_levels) t10cols.push_back({"profit_rho_" + level_label(q), Unit::currency});
  Table t10("10", "Ceded fractions that keep the insurer solvent under stress", t10cols);
  std::vector<Plot> profit_plots;
  for (const auto& r : results) {
    const double cc = ceding_commission(r.charged_rate, qs_quoted);
    std::vector<double> rhos, profits;
    for (std::size_t s = 0; s < r.stress.size(); ++s) {
      const auto sol = optimal_rho(r.stress[s].total_loss, r.premium_income, r.capital, r.exposure, cc);
      rhos.push_back(sol.rho);
      profits.push_back(insurer_profit(r.sample.mean, r.premium_income, r.exposure, {sol.rho, cc, qs_quoted}));
      if (sol.status != RhoStatus::feasible && sol.status != RhoStatus::not_needed)
        t10.add_note(r.name + " at " + percent_label(cfg.stress_levels[s]) + ": " + to_string(sol.status));
    }
    std::vector<double> row{cc};
    row.insert(row.end(), rhos.begin(), rhos.end());
    row.push_back(insurer_profit(r.sample.mean, r.premium_income, r.exposure, {0.0, cc, qs_quoted}));
    row.insert(row.end(), profits.begin(), profits.end());
    t10.add_row(r.name, row);

    Plot pp{"profit_" + r.name, "Profit against loss for " + r.name, "loss (USD)", "profit (USD)", {}};
    double lmax = r.sample.mean;
    for (const auto& s : r.stress) lmax = std::max(lmax, s.total_loss);
    lmax *= 1.1;
    for (double rho : cfg.profit_plot_rhos) {
      PlotSeries s{"rho=" + format_number(rho), {}};
      for (int i = 0; i <= 50; ++i) {
        const double loss = lmax * i / 50.0;
        s.points.emplace_back(loss, insurer_profit(loss, r.premium_income, r.exposure, {rho, cc, qs_quoted}));
      }
      pp.series.push_back(std::move(s));
    }
    pp.series.push_back({"minus_capital", {{0.0, -r.capital}, {lmax, -r.capital}}});
    for (std::size_t s = 0; s < r.stress.size(); ++s)
      pp.series.push_back({"stress_" + level_label(cfg.stress_levels[s]),
                           {{r.stress[s].total_loss, -r.capital}, {r.stress[s].total_loss, r.premium_income}}});
    profit_plots.push_back(std::move(pp));
  }
  t10.add_note("ceding commission = charged rate - quoted quota-share rate " + format_number(qs_quoted));

  // Excess of loss from premium income up to the stress loss.
  Table t11("11", "Excess-of-loss quotes from each insurer's own simulated losses",
            {{"attachment", Unit::currency}, {"layer", Unit::currency}, {"probability", Unit::probability},
             {"technical_premium", Unit::currency}, {"expected_indemnity", Unit::currency},
             {"quota_share_cost", Unit::currency}});
  for (const auto& r : results) {
    const StressPoint sp = stress_loss(r.portfolio, cfg.xl_stress_level, cfg.xl_stress_level, conv);
    const double cc = ceding_commission(r.charged_rate, qs_quoted);
    const auto sol = optimal_rho(sp.total_loss, r.premium_income, r.capital, r.exposure, cc);
    const double qs_cost = insurer_profit(r.sample.mean, r.premium_income, r.exposure, {0.0, cc, qs_quoted}) -
                           insurer_profit(r.sample.mean, r.premium_income, r.exposure, {sol.rho, cc, qs_quoted});
    const XLTerms terms{r.premium_income, std::max(0.0, sp.total_loss - r.premium_income)};
    if (terms.layer > 0.0 && terms.attachment > 0.0) {
      const auto q = xl_technical_premium_from_sample(r.sample, terms);
      t11.add_row(r.name, {terms.attachment, terms.layer, q.probability, q.technical_premium, q.expected_indemnity, qs_cost});
    } else {
      t11.add_row(r.name, {terms.attachment, terms.layer, kNaN, kNaN, kNaN, qs_cost});
    }
  }
  t11.add_note("technical_premium = probability x layer; quota_share_cost = profit at rho 0 less profit at rho for the " +
               percent_label(cfg.xl_stress_level) + " stress");

  std::vector<std::pair<std::string, const LossSample*>> hist;
  for (const auto& r : results) hist.emplace_back(r.name, &r.sample);

  rep.tables = {std::move(t3), std::move(t4), std::move(qs), std::move(t5), std::move(t6), std::move(t7),
                std::move(t9), std::move(breakdown), std::move(t10), std::move(t11)};
  rep.plots = {std::move(pdf), std::move(cdf), std::move(loading_curve),
               histogram_plot("loss_histogram", "Simulated portfolio losses", hist, cfg.histogram_bin)};
  for (auto& p : profit_plots) rep.plots.push_back(std::move(p));
  return rep;
}

// ---------------------------------------------------------------------------
// buyer_tiers

inline Report run_buyer_tiers(const BuyerTiersConfig& cfg) {
  Report rep;
  rep.scenario = "buyer_tiers";
  rep.seed = cfg.run.seed;
  rep.runs = cfg.run.runs;
  rep.convention = to_string(cfg.run.convention);
  const auto conv = cfg.run.convention;
  const auto& tiers = cfg.tiers;
  auto tier_cols = [&](const std::vector<std::string>& suffixes, Unit unit) {
    std::vector<Column> cols;
    for (const auto& suffix : suffixes)
      for (const auto& t : tiers) cols.push_back({suffix.empty() ? t.name : t.name + "_" + suffix, unit});
    return cols;
  };

  std::vector<Column> c12 = tier_cols({"ceiling"}, Unit::rate);
  c12.push_back({"max_customers", Unit::count});
  Table t12("12", "Buyer premium ceilings and market capacity", c12);
  std::vector<Column> c13{{"mean", Unit::currency}, {"sd", Unit::currency}, {"mu_log", Unit::parameter}, {"sigma_log", Unit::parameter}};
  for (const auto& c : tier_cols({"lambda"}, Unit::parameter)) c13.push_back(c);
  Table t13("13", "Severity and frequency by contract and risk tier", c13);
  for (std::size_t i = 0; i < cfg.contracts.size(); ++i) {
    const auto& k = cfg.contracts[i];
    std::vector<double> r12, r13;
    for (const auto& t : tiers) r12.push_back(t.premium_ceilings[i]);
    r12.push_back(static_cast<double>(k.max_customers));
    t12.add_row(k.id, r12);
    const auto ln = lognormal_from_moments(k.severity, conv);
    r13 = {k.severity.mean, k.severity.sd, ln.mu_log, ln.sigma_log};
    for (const auto& t : tiers) r13.push_back(t.frequencies[i]);
    t13.add_row(k.id, r13);
  }

  Table reins("tier_reinsurance", "Reinsurer rate applied to each risk tier",
              {{"distribution_mean", Unit::currency}, {"loss_ratio", Unit::ratio}, {"rate", Unit::rate}, {"quoted_rate", Unit::rate}});
  std::vector<double> quoted;
  for (const auto& t : tiers) {
    const auto ln = lognormal_from_moments(t.reinsurer_distribution, conv);
    const double rate = reinsurance_rate({ln, t.reinsurer_loss_ratio, cfg.reinsurer_max_cover});
    quoted.push_back(quote_rate(rate, cfg.quote_precision));
    reins.add_row(t.name, {t.reinsurer_distribution.mean, t.reinsurer_loss_ratio, rate, quoted.back()});
  }

  std::vector<Column> c14 = tier_cols({"total", "per_contract", "model_total"}, Unit::currency);
  Table t14("14", "Expected losses by contract and risk tier", c14);
  Table t15("15", "Technical premium rate by contract and risk tier", tier_cols({""}, Unit::rate));
  std::vector<Column> chead = tier_cols({"headroom"}, Unit::rate);
  for (const auto& c : tier_cols({"above_ceiling"}, Unit::count)) chead.push_back(c);
  Table headroom("premium_headroom", "Buyer ceiling less technical rate", chead);
  Table t16("16", "Stress losses by contract and risk tier", tier_cols({"total", "per_contract"}, Unit::currency));
  std::vector<Column> c17 = tier_cols({""}, Unit::ratio);
  for (const auto& c : tier_cols({"published", "delta"}, Unit::ratio)) c17.push_back(c);
  Table t17("17", "Ceded fraction per contract from the stress losses", c17);

  const std::size_t nt = tiers.size();
  for (std::size_t i = 0; i < cfg.contracts.size(); ++i) {
    const auto& k = cfg.contracts[i];
    const double customers = static_cast<double>(k.max_customers);
    std::vector<double> r14(3 * nt), r15(nt), rh(2 * nt), r16(2 * nt), r17(3 * nt, kNaN);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto& tier = tiers[t];
      Portfolio port{tier.name + "/" + k.id, {{ContractSpec{k.id, k.limit, k.severity, GroupFrequency{tier.frequencies[i]}, 0.0}, k.max_customers}}, 0.0, 1.0};
      const LossSample s = simulate_portfolio_losses(
          port, cfg.run.runs, campaign_seed(cfg.run.seed, "buyer_tiers/" + tier.name + "/" + k.id), cfg.run.simulation());
      const double model_total = model_expected_loss(port, conv);
      r14[t] = s.mean;
      r14[nt + t] = s.mean / customers;
      r14[2 * nt + t] = model_total;

      const double tech_rate = model_total / customers / k.limit;
      r15[t] = tech_rate;
      rh[t] = tier.premium_ceilings[i] - tech_rate;
      rh[nt + t] = tech_rate > tier.premium_ceilings[i] ? 1.0 : 0.0;
      if (tech_rate > tier.premium_ceilings[i])
        headroom.add_note(tier.name + " " + k.id + ": technical rate above the buyer ceiling");

      const StressPoint sp = stress_loss(port, cfg.stress_frequency_quantile, cfg.stress_severity_quantile, conv);
      r16[t] = sp.total_loss;
      r16[nt + t] = sp.total_loss / customers;

      const double premium_rate = cfg.rho_premium == RhoPremiumBasis::technical ? tech_rate : tier.premium_ceilings[i];
      double cc = 0.0;
      if (cfg.rho_commission == RhoCommissionBasis::ceiling_minus_reinsurer) cc = tier.premium_ceilings[i] - quoted[t];
      else if (cfg.rho_commission == RhoCommissionBasis::technical_minus_reinsurer) cc = tech_rate - quoted[t];
      const auto sol = optimal_rho(sp.total_loss / customers, premium_rate * k.limit, s.mean / customers, k.limit, cc);
      r17[t] = sol.rho;
      if (!tier.reference_rho.empty()) {
        r17[nt + t] = tier.reference_rho[i];
        r17[2 * nt + t] = sol.rho - tier.reference_rho[i];
      }
      if (sol.status != RhoStatus::feasible)
        t17.add_note(tier.name + " " + k.id + ": " + to_string(sol.status) + " (unclamped " + format_number(sol.unclamped) + ")");
    }
    t14.add_row(k.id, r14);
    t15.add_row(k.id, r15);
    headroom.add_row(k.id, rh);
    t16.add_row(k.id, r16);
    t17.add_row(k.id, r17);
  }
  t14.add_note("total and per_contract are simulated means; model_total is the log-normal expectation");
  t15.add_note("technical rate = model expected loss per contract / limit");
  t16.add_note("claims at frequency quantile " + format_number(cfg.stress_frequency_quantile) + ", severity at quantile " +
               format_number(cfg.stress_severity_quantile));
  t17.add_note(std::string("premium basis ") + to_string(cfg.rho_premium) + ", commission basis " +
               to_string(cfg.rho_commission) + ", capital = simulated expected loss per contract");
  t17.add_note("published fractions are not reproduced by these assumptions; see the delta columns");

  rep.tables = {std::move(t12), std::move(t13), std::move(reins), std::move(t14),
                std::move(t15), std::move(headroom), std::move(t16), std::move(t17)};
  return rep;
}

// ---------------------------------------------------------------------------
// naic_report

inline std::filesystem::path resolve_data_path(const std::string& path, const std::filesystem::path& data_dir) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : data_dir / p;
}

inline Report run_naic_report(const NaicConfig& cfg, const std::filesystem::path& data_dir = CYBERSIM_DATA_DIR) {
  Report rep;
  rep.scenario = "naic_report";
  rep.seed = cfg.run.seed;
  rep.runs = 0;
  rep.convention = to_string(cfg.run.convention);
  const auto records = load_naic_csv(resolve_data_path(cfg.data, data_dir).string());
  const auto years = summarise_naic(records);

  std::vector<std::string> firms;
  for (const auto& r : records)
    if (std::find(firms.begin(), firms.end(), r.firm) == firms.end()) firms.push_back(r.firm);
  std::vector<Column> cols;
  for (const auto& y : years) cols.push_back({"dwp_" + std::to_string(y.year), Unit::currency});
  for (const auto& y : years) cols.push_back({"loss_ratio_" + std::to_string(y.year), Unit::ratio});
  Table recs("naic_records", "Cyber-insurer direct written premium and loss ratio", cols);
  for (const auto& f : firms) {
    std::vector<double> row(2 * years.size(), kNaN);
    for (const auto& r : records) {
      if (r.firm != f) continue;
      for (std::size_t i = 0; i < years.size(); ++i)
        if (years[i].year == r.year) {
          row[i] = r.dwp_usd_mn * 1e6;
          row[years.size() + i] = r.loss_ratio;
        }
    }
    recs.add_row(f, row);
  }

  Table summary("naic_summary", "Market loss ratio by year",
                {{"firms", Unit::count}, {"total_dwp", Unit::currency}, {"total_losses", Unit::currency},
                 {"weighted_loss_ratio", Unit::ratio}, {"trend_slope", Unit::ratio}});
  Plot scatter{"naic_losses_vs_premium", "Losses against premium written", "DWP (USD mn)", "losses (USD mn)", {}};
  for (const auto& y : years) {
    summary.add_row(std::to_string(y.year), {static_cast<double>(y.firms), y.total_dwp_usd_mn * 1e6,
                                             y.total_losses_usd_mn * 1e6, y.weighted_loss_ratio, y.trend_slope});
    PlotSeries pts{std::to_string(y.year), {}};
    double xmax = 0.0;
    for (const auto& r : records)
      if (r.year == y.year) {
        pts.points.emplace_back(r.dwp_usd_mn, r.dwp_usd_mn * r.loss_ratio);
        xmax = std::max(xmax, r.dwp_usd_mn);
      }
    scatter.series.push_back(std::move(pts));
    scatter.series.push_back({"trend_" + std::to_string(y.year), {{0.0, 0.0}, {xmax, y.trend_slope * xmax}}});
    if (y.year == cfg.headline_year)
      rep.notes.push_back(std::to_string(y.year) + ": DWP-weighted loss ratio " + format_number(y.weighted_loss_ratio) +
                          ", zero-intercept trend slope " + format_number(y.trend_slope));
  }
  rep.tables = {std::move(recs), std::move(summary)};
  rep.plots = {std::move(scatter)};
  return rep;
}

// ---------------------------------------------------------------------------

inline Report run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& data_dir = CYBERSIM_DATA_DIR) {
  if (auto issues = validate(cfg); !issues.empty()) throw ConfigError(std::move(issues));
  switch (cfg.index()) {
    case 0: return run_benchmark(std::get<BenchmarkConfig>(cfg));
    case 1: return run_panel(std::get<PanelConfig>(cfg));
    case 2: return run_buyer_tiers(std::get<BuyerTiersConfig>(cfg));
    default: return run_naic_report(std::get<NaicConfig>(cfg), data_dir);
  }
}

}  // namespace cybersim
