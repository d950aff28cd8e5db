#pragma once

// Scenario configuration: JSON documents whose defaults reproduce the
// published inputs. Parsing never stops at the first problem; every issue
// is reported with its JSON path.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cybersim/error.hpp"
#include "cybersim/reinsurance.hpp"
#include "cybersim/stochastic.hpp"
#include "cybersim/underwriting.hpp"

namespace cybersim {

using nlohmann::json;

struct RunSettings {
  std::size_t runs = 100000;
  std::uint64_t seed = 42;
  MomentConvention convention = MomentConvention::paper;
  FrequencyModel frequency = FrequencyModel::per_type_poisson;
  bool cap_severity_at_limit = false;
  unsigned threads = 0;
  std::string output_dir;

  SimulationOptions simulation() const { return {convention, frequency, cap_severity_at_limit, threads}; }
};

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkConfig {
  RunSettings run;
  double limit = 1e6;
  CashMoments severity{500000.0, 250000.0};
  long long policies = 100;
  std::vector<double> claim_probabilities{0.1, 0.5};

  struct Buyer {
    double wealth = 2e6;  // not published; utility argmax does not depend on it
    double risk_aversion = 3e-6;
    double deductible = 0.0;
    double grid_step = 1000.0;
    std::size_t curve_points = 101;
  } buyer;

  struct Reinsurance {
    double claim_probability = 0.5;
    LogNormalParams fitted{16.9, 0.27};
    double baseline_loss = 0.0;  // loss the reductions are measured from; 0: simulated mean
    std::vector<XLTerms> layers{{25e6, 25e6}, {30e6, 20e6}, {35e6, 15e6}, {40e6, 10e6}};
    CapMode cap_mode = CapMode::zero_run;
  } reinsurance;

  double histogram_bin = 0.5e6;
};

// ---------------------------------------------------------------------------
// panel

struct NamedMoments {
  std::string id;
  CashMoments moments;
};

struct InsurerConfig {
  std::string name;
  std::map<std::string, long long> counts;  // contract id -> policies
  double target_loss_ratio = 0.5;
  std::optional<double> capital;  // unset: the simulated mean loss
};

struct PanelConfig {
  RunSettings run;

  struct Reinsurer {
    std::vector<NamedMoments> distributions{{"A", {10e6, 10e6}}, {"B", {20e6, 20e6}}, {"C", {30e6, 30e6}},
                                            {"D", {40e6, 40e6}}, {"E", {50e6, 50e6}}, {"F", {60e6, 60e6}}};
    std::vector<double> loss_ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double max_cover = 500e6;
    std::string quota_share_distribution = "D";
    double quota_share_loss_ratio = 0.5;
    double quote_precision = 0.01;
  } reinsurer;

  std::vector<ContractSpec> contracts{
      {"500k", 500e3, {200e3, 125e3}, ClaimProbability{0.10}, 0.0},
      {"1mn", 1e6, {400e3, 350e3}, ClaimProbability{0.15}, 0.0},
      {"2mn", 2e6, {1e6, 1e6}, ClaimProbability{0.16}, 0.0},
      {"5mn", 5e6, {2.5e6, 1.25e6}, ClaimProbability{0.20}, 0.0},
      {"10mn", 10e6, {4e6, 4e6}, ClaimProbability{0.30}, 0.0},
  };

  std::vector<InsurerConfig> insurers{
      {"Alpha", {{"500k", 200}}, 0.5, std::nullopt},
      {"Beta", {{"500k", 100}, {"1mn", 50}}, 0.5, std::nullopt},
      {"Charlie", {{"500k", 50}, {"1mn", 20}, {"2mn", 15}, {"5mn", 5}}, 0.5, std::nullopt},
      {"Delta", {{"500k", 30}, {"2mn", 5}, {"5mn", 5}, {"10mn", 5}}, 0.5, std::nullopt},
      {"Echo", {{"10mn", 10}}, 0.5, std::nullopt},
  };

  std::vector<double> stress_levels{0.95, 0.975};
  double xl_stress_level = 0.975;
  std::vector<double> profit_plot_rhos{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  double plot_loss_max = 100e6;
  double histogram_bin = 0.5e6;
};

// ---------------------------------------------------------------------------
// buyer_tiers

struct TierContract {
  std::string id;
  double limit = 0.0;
  CashMoments severity;
  long long max_customers = 0;
};

struct BuyerTier {
  std::string name;
  std::vector<double> frequencies;       // Poisson lambda per contract, whole market
  std::vector<double> premium_ceilings;  // highest rate at which buyers take full cover
  CashMoments reinsurer_distribution;
  double reinsurer_loss_ratio = 0.5;
  std::vector<double> reference_rho;  // published fractions, reported alongside
};

enum class RhoPremiumBasis { technical, ceiling };
enum class RhoCommissionBasis { ceiling_minus_reinsurer, technical_minus_reinsurer, zero };

struct BuyerTiersConfig {
  RunSettings run;
  std::vector<TierContract> contracts{
      {"500k", 500e3, {125e3, 62.5e3}, 46},
      {"1mn", 1e6, {250e3, 125e3}, 32},
      {"2mn", 2e6, {500e3, 250e3}, 16},
      {"5mn", 5e6, {1.25e6, 625e3}, 8},
      {"10mn", 10e6, {2.5e6, 1.25e6}, 4},
  };
  std::vector<BuyerTier> tiers{
      {"low", {4.6, 6.4, 4, 2, 1}, {0.14, 0.13, 0.12, 0.11, 0.10}, {10e6, 10e6}, 0.3, {0.23, 0.31, 0.41, 0.51, 0.63}},
      {"medium", {11.5, 12.8, 8, 4, 2}, {0.20, 0.18, 0.16, 0.14, 0.12}, {30e6, 30e6}, 0.5, {0.23, 0.30, 0.40, 0.53, 0.64}},
      {"high", {23, 19.2, 12, 6, 3}, {0.26, 0.23, 0.20, 0.17, 0.14}, {50e6, 50e6}, 0.7, {0.20, 0.25, 0.36, 0.48, 0.60}},
  };
  double reinsurer_max_cover = 500e6;
  double quote_precision = 0.01;
  double stress_frequency_quantile = 0.995;
  double stress_severity_quantile = 0.5;
  RhoPremiumBasis rho_premium = RhoPremiumBasis::technical;
  RhoCommissionBasis rho_commission = RhoCommissionBasis::ceiling_minus_reinsurer;
};

// ---------------------------------------------------------------------------
// naic_report

struct NaicConfig {
  RunSettings run;
  std::string data = "naic_cyber.csv";  // relative paths resolve against the data directory
  int headline_year = 2021;
};

using ScenarioConfig = std::variant<BenchmarkConfig, PanelConfig, BuyerTiersConfig, NaicConfig>;

inline const char* scenario_id(const ScenarioConfig& c) {
  switch (c.index()) {
    case 0: return "benchmark";
    case 1: return "panel";
    case 2: return "buyer_tiers";
    default: return "naic_report";
  }
}

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"benchmark", "panel", "buyer_tiers", "naic_report"};
  return ids;
}

inline ScenarioConfig default_config(const std::string& scenario) {
  ScenarioConfig c;
  if (scenario == "benchmark") c = BenchmarkConfig{};
  else if (scenario == "panel") c = PanelConfig{};
  else if (scenario == "buyer_tiers") c = BuyerTiersConfig{};
  else if (scenario == "naic_report") c = NaicConfig{};
  else throw ConfigError({"$.scenario: unknown scenario '" + scenario + "'"});
  std::visit([&](auto& cfg) { cfg.run.output_dir = "out/" + scenario; }, c);
  return c;
}

// ---------------------------------------------------------------------------
// serialisation

inline const char* to_string(FrequencyModel m) {
  return m == FrequencyModel::per_type_poisson ? "per_type_poisson" : "per_policy_bernoulli";
}
inline const char* to_string(CapMode m) { return m == CapMode::zero_run ? "zero_run" : "subtract_indemnity"; }
inline const char* to_string(RhoPremiumBasis b) { return b == RhoPremiumBasis::technical ? "technical" : "ceiling"; }
inline const char* to_string(RhoCommissionBasis b) {
  switch (b) {
    case RhoCommissionBasis::ceiling_minus_reinsurer: return "ceiling_minus_reinsurer";
    case RhoCommissionBasis::technical_minus_reinsurer: return "technical_minus_reinsurer";
    case RhoCommissionBasis::zero: return "zero";
  }
  return "zero";
}

inline json moments_json(const CashMoments& m) { return {{"mean", m.mean}, {"sd", m.sd}}; }

inline json run_json(const RunSettings& r) {
  return {{"runs", r.runs},
          {"seed", r.seed},
          {"convention", to_string(r.convention)},
          {"frequency_model", to_string(r.frequency)},
          {"cap_severity_at_limit", r.cap_severity_at_limit},
          {"threads", r.threads},
          {"output_dir", r.output_dir}};
}

inline json to_json(const BenchmarkConfig& c) {
  json layers = json::array();
  for (const auto& l : c.reinsurance.layers) layers.push_back({{"attachment", l.attachment}, {"layer", l.layer}});
  return {{"scenario", "benchmark"},
          {"run", run_json(c.run)},
          {"policy", {{"limit", c.limit}, {"severity", moments_json(c.severity)}, {"count", c.policies}}},
          {"claim_probabilities", c.claim_probabilities},
          {"buyer",
           {{"wealth", c.buyer.wealth},
            {"risk_aversion", c.buyer.risk_aversion},
            {"deductible", c.buyer.deductible},
            {"grid_step", c.buyer.grid_step},
            {"curve_points", c.buyer.curve_points}}},
          {"reinsurance",
           {{"claim_probability", c.reinsurance.claim_probability},
            {"fitted", {{"mu_log", c.reinsurance.fitted.mu_log}, {"sigma_log", c.reinsurance.fitted.sigma_log}}},
            {"baseline_loss", c.reinsurance.baseline_loss},
            {"layers", layers},
            {"cap_mode", to_string(c.reinsurance.cap_mode)}}},
          {"histogram_bin", c.histogram_bin}};
}

inline json to_json(const PanelConfig& c) {
  json dists = json::array();
  for (const auto& d : c.reinsurer.distributions) dists.push_back({{"id", d.id}, {"mean", d.moments.mean}, {"sd", d.moments.sd}});
  json contracts = json::array();
  for (const auto& k : c.contracts)
    contracts.push_back({{"id", k.id},
                         {"limit", k.limit},
                         {"severity", moments_json(k.severity)},
                         {"claim_probability", std::get<ClaimProbability>(k.frequency).value}});
  json insurers = json::array();
  for (const auto& i : c.insurers) {
    json counts = json::object();
    for (const auto& [id, n] : i.counts) counts[id] = n;
    insurers.push_back({{"name", i.name},
                        {"counts", counts},
                        {"target_loss_ratio", i.target_loss_ratio},
                        {"capital", i.capital ? json(*i.capital) : json(nullptr)}});
  }
  return {{"scenario", "panel"},
          {"run", run_json(c.run)},
          {"reinsurer",
           {{"distributions", dists},
            {"loss_ratios", c.reinsurer.loss_ratios},
            {"max_cover", c.reinsurer.max_cover},
            {"quota_share_distribution", c.reinsurer.quota_share_distribution},
            {"quota_share_loss_ratio", c.reinsurer.quota_share_loss_ratio},
            {"quote_precision", c.reinsurer.quote_precision}}},
          {"contracts", contracts},
          {"insurers", insurers},
          {"stress_levels", c.stress_levels},
          {"xl_stress_level", c.xl_stress_level},
          {"profit_plot_rhos", c.profit_plot_rhos},
          {"plot_loss_max", c.plot_loss_max},
          {"histogram_bin", c.histogram_bin}};
}

inline json to_json(const BuyerTiersConfig& c) {
  json contracts = json::array();
  for (const auto& k : c.contracts)
    contracts.push_back({{"id", k.id}, {"limit", k.limit}, {"severity", moments_json(k.severity)}, {"max_customers", k.max_customers}});
  json tiers = json::array();
  for (const auto& t : c.tiers)
    tiers.push_back({{"name", t.name},
                     {"frequencies", t.frequencies},
                     {"premium_ceilings", t.premium_ceilings},
                     {"reinsurer_distribution", moments_json(t.reinsurer_distribution)},
                     {"reinsurer_loss_ratio", t.reinsurer_loss_ratio},
                     {"reference_rho", t.reference_rho}});
  return {{"scenario", "buyer_tiers"},
          {"run", run_json(c.run)},
          {"contracts", contracts},
          {"tiers", tiers},
          {"reinsurer_max_cover", c.reinsurer_max_cover},
          {"quote_precision", c.quote_precision},
          {"stress_frequency_quantile", c.stress_frequency_quantile},
          {"stress_severity_quantile", c.stress_severity_quantile},
          {"rho_premium", to_string(c.rho_premium)},
          {"rho_commission", to_string(c.rho_commission)}};
}

inline json to_json(const NaicConfig& c) {
  return {{"scenario", "naic_report"}, {"run", run_json(c.run)}, {"data", c.data}, {"headline_year", c.headline_year}};
}

inline json to_json(const ScenarioConfig& c) {
  return std::visit([](const auto& cfg) { return to_json(cfg); }, c);
}

// ---------------------------------------------------------------------------
// parsing

namespace detail {

/// Walks a JSON document, overwriting defaults and collecting issues.
class ConfigReader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& message) { issues.push_back(path + ": " + message); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!keys.count(k)) fail(path + "." + k, "unknown key");
    return true;
  }

  void number(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) return fail(path + "." + key, "expected a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json& j, const std::string& path, const char* key, Int& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>())))
      return fail(path + "." + key, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_float() ? v.get<double>() < 0 : (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        return fail(path + "." + key, "must be non-negative");
      out = v.is_number_float() ? static_cast<Int>(v.get<double>()) : v.get<Int>();
    } else {
      out = v.is_number_float() ? static_cast<Int>(v.get<double>()) : v.get<Int>();
    }
  }

  void string(const json& j, const std::string& path, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) return fail(path + "." + key, "expected a string");
    out = j.at(key).get<std::string>();
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) return fail(path + "." + key, "expected true or false");
    out = j.at(key).get<bool>();
  }

  void numbers(const json& j, const std::string& path, const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) return fail(path + "." + key, "expected an array of numbers");
    std::vector<double> values;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      values.push_back(v[i].get<double>());
    }
    out = std::move(values);
  }

  template <class Enum>
  void choice(const json& j, const std::string& path, const char* key, Enum& out,
              std::initializer_list<std::pair<const char*, Enum>> options) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (v.is_string() && v.get<std::string>() == name) {
        out = value;
        return;
      }
      allowed += std::string(allowed.empty() ? "" : ", ") + name;
    }
    fail(path + "." + key, "expected one of: " + allowed);
  }

  void moments(const json& j, const std::string& path, CashMoments& out) {
    if (!object(j, path, {"mean", "sd"})) return;
    number(j, path, "mean", out.mean);
    number(j, path, "sd", out.sd);
  }

  void run(const json& j, const std::string& path, RunSettings& r) {
    if (!object(j, path, {"runs", "seed", "convention", "frequency_model", "cap_severity_at_limit", "threads", "output_dir"}))
      return;
    integer(j, path, "runs", r.runs);
    integer(j, path, "seed", r.seed);
    choice(j, path, "convention", r.convention,
           {{"paper", MomentConvention::paper}, {"textbook", MomentConvention::textbook}});
    choice(j, path, "frequency_model", r.frequency,
           {{"per_type_poisson", FrequencyModel::per_type_poisson},
            {"per_policy_bernoulli", FrequencyModel::per_policy_bernoulli}});
    boolean(j, path, "cap_severity_at_limit", r.cap_severity_at_limit);
    integer(j, path, "threads", r.threads);
    string(j, path, "output_dir", r.output_dir);
  }

  template <class Item, class Fn>
  void array(const json& j, const std::string& path, const char* key, std::vector<Item>& out, Fn&& read_item) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array()) return fail(path + "." + key, "expected an array");
    std::vector<Item> items;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Item item{};
      read_item(v[i], path + "." + key + "[" + std::to_string(i) + "]", item);
      items.push_back(std::move(item));
    }
    out = std::move(items);
  }
};

inline void read(ConfigReader& r, const json& j, BenchmarkConfig& c) {
  const std::string p = "$";
  if (!r.object(j, p, {"scenario", "run", "policy", "claim_probabilities", "buyer", "reinsurance", "histogram_bin"})) return;
  if (j.contains("run")) r.run(j["run"], p + ".run", c.run);
  if (j.contains("policy") && r.object(j["policy"], p + ".policy", {"limit", "severity", "count"})) {
    r.number(j["policy"], p + ".policy", "limit", c.limit);
    if (j["policy"].contains("severity")) r.moments(j["policy"]["severity"], p + ".policy.severity", c.severity);
    r.integer(j["policy"], p + ".policy", "count", c.policies);
  }
  r.numbers(j, p, "claim_probabilities", c.claim_probabilities);
  if (j.contains("buyer") &&
      r.object(j["buyer"], p + ".buyer", {"wealth", "risk_aversion", "deductible", "grid_step", "curve_points"})) {
    const auto& b = j["buyer"];
    r.number(b, p + ".buyer", "wealth", c.buyer.wealth);
    r.number(b, p + ".buyer", "risk_aversion", c.buyer.risk_aversion);
    r.number(b, p + ".buyer", "deductible", c.buyer.deductible);
    r.number(b, p + ".buyer", "grid_step", c.buyer.grid_step);
    r.integer(b, p + ".buyer", "curve_points", c.buyer.curve_points);
  }
  if (j.contains("reinsurance") &&
      r.object(j["reinsurance"], p + ".reinsurance", {"claim_probability", "fitted", "baseline_loss", "layers", "cap_mode"})) {
    const auto& x = j["reinsurance"];
    const std::string xp = p + ".reinsurance";
    r.number(x, xp, "claim_probability", c.reinsurance.claim_probability);
    if (x.contains("fitted") && r.object(x["fitted"], xp + ".fitted", {"mu_log", "sigma_log"})) {
      r.number(x["fitted"], xp + ".fitted", "mu_log", c.reinsurance.fitted.mu_log);
      r.number(x["fitted"], xp + ".fitted", "sigma_log", c.reinsurance.fitted.sigma_log);
    }
    r.number(x, xp, "baseline_loss", c.reinsurance.baseline_loss);
    r.array(x, xp, "layers", c.reinsurance.layers, [&](const json& item, const std::string& ip, XLTerms& t) {
      if (!r.object(item, ip, {"attachment", "layer"})) return;
      r.number(item, ip, "attachment", t.attachment);
      r.number(item, ip, "layer", t.layer);
      if (!item.contains("attachment")) r.fail(ip + ".attachment", "required");
      if (!item.contains("layer")) r.fail(ip + ".layer", "required");
    });
    r.choice(x, xp, "cap_mode", c.reinsurance.cap_mode,
             {{"zero_run", CapMode::zero_run}, {"subtract_indemnity", CapMode::subtract_indemnity}});
  }
  r.number(j, p, "histogram_bin", c.histogram_bin);
}

inline void read(ConfigReader& r, const json& j, PanelConfig& c) {
  const std::string p = "$";
  if (!r.object(j, p, {"scenario", "run", "reinsurer", "contracts", "insurers", "stress_levels", "xl_stress_level",
                       "profit_plot_rhos", "plot_loss_max", "histogram_bin"}))
    return;
  if (j.contains("run")) r.run(j["run"], p + ".run", c.run);
  if (j.contains("reinsurer") &&
      r.object(j["reinsurer"], p + ".reinsurer",
               {"distributions", "loss_ratios", "max_cover", "quota_share_distribution", "quota_share_loss_ratio",
                "quote_precision"})) {
    const auto& x = j["reinsurer"];
    const std::string xp = p + ".reinsurer";
    r.array(x, xp, "distributions", c.reinsurer.distributions, [&](const json& item, const std::string& ip, NamedMoments& d) {
      if (!r.object(item, ip, {"id", "mean", "sd"})) return;
      r.string(item, ip, "id", d.id);
      r.number(item, ip, "mean", d.moments.mean);
      r.number(item, ip, "sd", d.moments.sd);
    });
    r.numbers(x, xp, "loss_ratios", c.reinsurer.loss_ratios);
    r.number(x, xp, "max_cover", c.reinsurer.max_cover);
    r.string(x, xp, "quota_share_distribution", c.reinsurer.quota_share_distribution);
    r.number(x, xp, "quota_share_loss_ratio", c.reinsurer.quota_share_loss_ratio);
    r.number(x, xp, "quote_precision", c.reinsurer.quote_precision);
  }
  r.array(j, p, "contracts", c.contracts, [&](const json& item, const std::string& ip, ContractSpec& k) {
    if (!r.object(item, ip, {"id", "limit", "severity", "claim_probability"})) return;
    r.string(item, ip, "id", k.id);
    r.number(item, ip, "limit", k.limit);
    if (item.contains("severity")) r.moments(item["severity"], ip + ".severity", k.severity);
    double prob = 0.0;
    r.number(item, ip, "claim_probability", prob);
    k.frequency = ClaimProbability{prob};
  });
  r.array(j, p, "insurers", c.insurers, [&](const json& item, const std::string& ip, InsurerConfig& ins) {
    if (!r.object(item, ip, {"name", "counts", "target_loss_ratio", "capital"})) return;
    r.string(item, ip, "name", ins.name);
    if (item.contains("counts") && !item["counts"].is_object()) r.fail(ip + ".counts", "expected an object");
    if (item.contains("counts") && item["counts"].is_object()) {
      ins.counts.clear();
      for (const auto& [id, n] : item["counts"].items()) {
        if (!n.is_number_integer()) {
          r.fail(ip + ".counts." + id, "expected an integer");
          continue;
        }
        ins.counts[id] = n.get<long long>();
      }
    }
    r.number(item, ip, "target_loss_ratio", ins.target_loss_ratio);
    if (item.contains("capital") && !item["capital"].is_null()) {
      double k = 0.0;
      r.number(item, ip, "capital", k);
      ins.capital = k;
    }
  });
  r.numbers(j, p, "stress_levels", c.stress_levels);
  r.number(j, p, "xl_stress_level", c.xl_stress_level);
  r.numbers(j, p, "profit_plot_rhos", c.profit_plot_rhos);
  r.number(j, p, "plot_loss_max", c.plot_loss_max);
  r.number(j, p, "histogram_bin", c.histogram_bin);
}

inline void read(ConfigReader& r, const json& j, BuyerTiersConfig& c) {
  const std::string p = "$";
  if (!r.object(j, p, {"scenario", "run", "contracts", "tiers", "reinsurer_max_cover", "quote_precision",
                       "stress_frequency_quantile", "stress_severity_quantile", "rho_premium", "rho_commission"}))
    return;
  if (j.contains("run")) r.run(j["run"], p + ".run", c.run);
  r.array(j, p, "contracts", c.contracts, [&](const json& item, const std::string& ip, TierContract& k) {
    if (!r.object(item, ip, {"id", "limit", "severity", "max_customers"})) return;
    r.string(item, ip, "id", k.id);
    r.number(item, ip, "limit", k.limit);
    if (item.contains("severity")) r.moments(item["severity"], ip + ".severity", k.severity);
    r.integer(item, ip, "max_customers", k.max_customers);
  });
  r.array(j, p, "tiers", c.tiers, [&](const json& item, const std::string& ip, BuyerTier& t) {
    if (!r.object(item, ip, {"name", "frequencies", "premium_ceilings", "reinsurer_distribution", "reinsurer_loss_ratio",
                             "reference_rho"}))
      return;
    r.string(item, ip, "name", t.name);
    r.numbers(item, ip, "frequencies", t.frequencies);
    r.numbers(item, ip, "premium_ceilings", t.premium_ceilings);
    if (item.contains("reinsurer_distribution"))
      r.moments(item["reinsurer_distribution"], ip + ".reinsurer_distribution", t.reinsurer_distribution);
    r.number(item, ip, "reinsurer_loss_ratio", t.reinsurer_loss_ratio);
    r.numbers(item, ip, "reference_rho", t.reference_rho);
  });
  r.number(j, p, "reinsurer_max_cover", c.reinsurer_max_cover);
  r.number(j, p, "quote_precision", c.quote_precision);
  r.number(j, p, "stress_frequency_quantile", c.stress_frequency_quantile);
  r.number(j, p, "stress_severity_quantile", c.stress_severity_quantile);
  r.choice(j, p, "rho_premium", c.rho_premium,
           {{"technical", RhoPremiumBasis::technical}, {"ceiling", RhoPremiumBasis::ceiling}});
  r.choice(j, p, "rho_commission", c.rho_commission,
           {{"ceiling_minus_reinsurer", RhoCommissionBasis::ceiling_minus_reinsurer},
            {"technical_minus_reinsurer", RhoCommissionBasis::technical_minus_reinsurer},
            {"zero", RhoCommissionBasis::zero}});
}

inline void read(ConfigReader& r, const json& j, NaicConfig& c) {
  const std::string p = "$";
  if (!r.object(j, p, {"scenario", "run", "data", "headline_year"})) return;
  if (j.contains("run")) r.run(j["run"], p + ".run", c.run);
  r.string(j, p, "data", c.data);
  r.integer(j, p, "headline_year", c.headline_year);
}

// Semantic checks, run after parsing.

inline void check_run(std::vector<std::string>& issues, const RunSettings& r) {
  if (r.runs < 1) issues.push_back("$.run.runs: must be >= 1");
}

inline void check_probability(std::vector<std::string>& issues, const std::string& path, double v, bool open = false) {
  const bool ok = open ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
  if (!ok) issues.push_back(path + (open ? ": must lie in (0, 1)" : ": must lie in [0, 1]"));
}

inline void check_moments(std::vector<std::string>& issues, const std::string& path, const CashMoments& m) {
  if (!(m.mean > 0.0)) issues.push_back(path + ".mean: must be positive");
  if (!(m.sd >= 0.0)) issues.push_back(path + ".sd: must be non-negative");
}

inline void check_loss_ratio(std::vector<std::string>& issues, const std::string& path, double v) {
  if (!(v > 0.0 && v <= 1.0)) issues.push_back(path + ": must lie in (0, 1]");
}

inline std::vector<std::string> validate(const BenchmarkConfig& c) {
  std::vector<std::string> out;
  check_run(out, c.run);
  if (!(c.limit > 0.0)) out.push_back("$.policy.limit: must be positive");
  check_moments(out, "$.policy.severity", c.severity);
  if (c.policies < 0) out.push_back("$.policy.count: must be non-negative");
  for (std::size_t i = 0; i < c.claim_probabilities.size(); ++i)
    check_probability(out, "$.claim_probabilities[" + std::to_string(i) + "]", c.claim_probabilities[i]);
  if (!(c.buyer.risk_aversion > 0.0)) out.push_back("$.buyer.risk_aversion: must be positive");
  if (!(c.buyer.deductible >= 0.0)) out.push_back("$.buyer.deductible: must be non-negative");
  if (!(c.buyer.grid_step > 0.0)) out.push_back("$.buyer.grid_step: must be positive");
  if (c.buyer.curve_points < 2) out.push_back("$.buyer.curve_points: must be >= 2");
  check_probability(out, "$.reinsurance.claim_probability", c.reinsurance.claim_probability);
  if (!std::isfinite(c.reinsurance.fitted.mu_log)) out.push_back("$.reinsurance.fitted.mu_log: must be finite");
  if (!(c.reinsurance.fitted.sigma_log > 0.0)) out.push_back("$.reinsurance.fitted.sigma_log: must be positive");
  if (!(c.reinsurance.baseline_loss >= 0.0)) out.push_back("$.reinsurance.baseline_loss: must be non-negative");
  for (std::size_t i = 0; i < c.reinsurance.layers.size(); ++i) {
    const std::string ip = "$.reinsurance.layers[" + std::to_string(i) + "]";
    if (!(c.reinsurance.layers[i].attachment > 0.0)) out.push_back(ip + ".attachment: must be positive");
    if (!(c.reinsurance.layers[i].layer > 0.0)) out.push_back(ip + ".layer: must be positive");
  }
  if (!(c.histogram_bin > 0.0)) out.push_back("$.histogram_bin: must be positive");
  return out;
}

inline std::vector<std::string> validate(const PanelConfig& c) {
  std::vector<std::string> out;
  check_run(out, c.run);
  std::set<std::string> dist_ids;
  for (std::size_t i = 0; i < c.reinsurer.distributions.size(); ++i) {
    const auto& d = c.reinsurer.distributions[i];
    const std::string ip = "$.reinsurer.distributions[" + std::to_string(i) + "]";
    if (d.id.empty()) out.push_back(ip + ".id: required");
    if (!dist_ids.insert(d.id).second) out.push_back(ip + ".id: duplicate '" + d.id + "'");
    check_moments(out, ip, d.moments);
    if (!(d.moments.sd > 0.0)) out.push_back(ip + ".sd: must be positive for pricing");
  }
  for (std::size_t i = 0; i < c.reinsurer.loss_ratios.size(); ++i)
    check_loss_ratio(out, "$.reinsurer.loss_ratios[" + std::to_string(i) + "]", c.reinsurer.loss_ratios[i]);
  if (!(c.reinsurer.max_cover > 0.0)) out.push_back("$.reinsurer.max_cover: must be positive");
  if (!dist_ids.count(c.reinsurer.quota_share_distribution))
    out.push_back("$.reinsurer.quota_share_distribution: unknown distribution '" + c.reinsurer.quota_share_distribution + "'");
  check_loss_ratio(out, "$.reinsurer.quota_share_loss_ratio", c.reinsurer.quota_share_loss_ratio);
  if (!(c.reinsurer.quote_precision >= 0.0)) out.push_back("$.reinsurer.quote_precision: must be non-negative");
  std::set<std::string> contract_ids;
  for (std::size_t i = 0; i < c.contracts.size(); ++i) {
    const auto& k = c.contracts[i];
    const std::string ip = "$.contracts[" + std::to_string(i) + "]";
    if (k.id.empty()) out.push_back(ip + ".id: required");
    if (!contract_ids.insert(k.id).second) out.push_back(ip + ".id: duplicate '" + k.id + "'");
    if (!(k.limit > 0.0)) out.push_back(ip + ".limit: must be positive");
    check_moments(out, ip + ".severity", k.severity);
    if (k.severity.mean > k.limit) out.push_back(ip + ".severity.mean: must not exceed the limit");
    check_probability(out, ip + ".claim_probability", std::get<ClaimProbability>(k.frequency).value);
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < c.insurers.size(); ++i) {
    const auto& ins = c.insurers[i];
    const std::string ip = "$.insurers[" + std::to_string(i) + "]";
    if (ins.name.empty()) out.push_back(ip + ".name: required");
    if (!names.insert(ins.name).second) out.push_back(ip + ".name: duplicate '" + ins.name + "'");
    for (const auto& [id, n] : ins.counts) {
      if (!contract_ids.count(id)) out.push_back(ip + ".counts." + id + ": unknown contract");
      if (n < 0) out.push_back(ip + ".counts." + id + ": must be non-negative");
    }
    check_loss_ratio(out, ip + ".target_loss_ratio", ins.target_loss_ratio);
    if (ins.capital && !(*ins.capital >= 0.0)) out.push_back(ip + ".capital: must be non-negative");
  }
  for (std::size_t i = 0; i < c.stress_levels.size(); ++i)
    check_probability(out, "$.stress_levels[" + std::to_string(i) + "]", c.stress_levels[i], true);
  check_probability(out, "$.xl_stress_level", c.xl_stress_level, true);
  for (std::size_t i = 0; i < c.profit_plot_rhos.size(); ++i)
    check_probability(out, "$.profit_plot_rhos[" + std::to_string(i) + "]", c.profit_plot_rhos[i]);
  if (!(c.plot_loss_max > 0.0)) out.push_back("$.plot_loss_max: must be positive");
  if (!(c.histogram_bin > 0.0)) out.push_back("$.histogram_bin: must be positive");
  return out;
}

inline std::vector<std::string> validate(const BuyerTiersConfig& c) {
  std::vector<std::string> out;
  check_run(out, c.run);
  const std::size_t n = c.contracts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = c.contracts[i];
    const std::string ip = "$.contracts[" + std::to_string(i) + "]";
    if (k.id.empty()) out.push_back(ip + ".id: required");
    if (!(k.limit > 0.0)) out.push_back(ip + ".limit: must be positive");
    check_moments(out, ip + ".severity", k.severity);
    if (k.max_customers < 1) out.push_back(ip + ".max_customers: must be >= 1");
  }
  for (std::size_t t = 0; t < c.tiers.size(); ++t) {
    const auto& tier = c.tiers[t];
    const std::string tp = "$.tiers[" + std::to_string(t) + "]";
    if (tier.name.empty()) out.push_back(tp + ".name: required");
    if (tier.frequencies.size() != n) out.push_back(tp + ".frequencies: need one value per contract");
    if (tier.premium_ceilings.size() != n) out.push_back(tp + ".premium_ceilings: need one value per contract");
    if (!tier.reference_rho.empty() && tier.reference_rho.size() != n)
      out.push_back(tp + ".reference_rho: need one value per contract or none");
    for (std::size_t i = 0; i < tier.frequencies.size(); ++i)
      if (!(tier.frequencies[i] >= 0.0)) out.push_back(tp + ".frequencies[" + std::to_string(i) + "]: must be non-negative");
    check_moments(out, tp + ".reinsurer_distribution", tier.reinsurer_distribution);
    if (!(tier.reinsurer_distribution.sd > 0.0)) out.push_back(tp + ".reinsurer_distribution.sd: must be positive for pricing");
    check_loss_ratio(out, tp + ".reinsurer_loss_ratio", tier.reinsurer_loss_ratio);
  }
  if (!(c.reinsurer_max_cover > 0.0)) out.push_back("$.reinsurer_max_cover: must be positive");
  if (!(c.quote_precision >= 0.0)) out.push_back("$.quote_precision: must be non-negative");
  check_probability(out, "$.stress_frequency_quantile", c.stress_frequency_quantile, true);
  check_probability(out, "$.stress_severity_quantile", c.stress_severity_quantile, true);
  return out;
}

inline std::vector<std::string> validate(const NaicConfig& c) {
  std::vector<std::string> out;
  if (c.data.empty()) out.push_back("$.data: required");
  return out;
}

}  // namespace detail

inline std::vector<std::string> validate(const ScenarioConfig& c) {
  return std::visit([](const auto& cfg) { return detail::validate(cfg); }, c);
}

/// Builds a config from a JSON document. Absent keys keep their defaults.
inline ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError({"$: expected an object"});
  if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError({"$.scenario: required string"});
  const std::string id = j["scenario"].get<std::string>();
  ScenarioConfig c = default_config(id);
  detail::ConfigReader r;
  std::visit([&](auto& cfg) { detail::read(r, j, cfg); }, c);
  auto issues = std::move(r.issues);
  for (auto& issue : validate(c)) issues.push_back(std::move(issue));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open"});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return config_from_json(j);
}

inline RunSettings& run_settings(ScenarioConfig& c) {
  return std::visit([](auto& cfg) -> RunSettings& { return cfg.run; }, c);
}

inline const RunSettings& run_settings(const ScenarioConfig& c) {
  return std::visit([](const auto& cfg) -> const RunSettings& { return cfg.run; }, c);
}

}  // namespace cybersim
