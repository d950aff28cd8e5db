// cybersim command-line front end.
//
// Exit codes: 0 success, 1 usage or validation error, 2 golden mismatch.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cybersim/cybersim.hpp"

namespace cs = cybersim;
using nlohmann::json;

namespace {

struct Common {
  bool json_out = false;
  unsigned threads = 0;
  bool threads_set = false;
};

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CYBERSIM_DATA_DIR"); env && *env) return env;
  return CYBERSIM_DATA_DIR;
}

/// --seed, else CYBERSIM_SEED, else the config's own seed.
std::optional<std::uint64_t> seed_override(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("CYBERSIM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw cs::ConfigError({std::string("CYBERSIM_SEED: not an unsigned integer: '") + env + "'"});
  }
  return std::nullopt;
}

double currency(const std::string& text, const char* flag) {
  try {
    return cs::parse_currency(text);
  } catch (const cs::DomainError& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

/// Key/value output shared by the single-calculation subcommands.
void emit(const Common& common, const std::vector<std::pair<std::string, json>>& fields) {
  if (common.json_out) {
    json j = json::object();
    for (const auto& [k, v] : fields) j[k] = v;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : fields) width = std::max(width, k.size());
  for (const auto& [k, v] : fields) {
    std::string text;
    if (v.is_number_float()) text = cs::format_number(v.get<double>());
    else if (v.is_string()) text = v.get<std::string>();
    else text = v.dump();
    std::cout << k << std::string(width - k.size() + 2, ' ') << text << "\n";
  }
}

struct ScenarioArgs {
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string convention;
  std::string out;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  auto* sc = cmd->add_option("--scenario", a.scenario, "Built-in scenario")
                 ->check(CLI::IsMember(cs::scenario_ids()));
  auto* cf = cmd->add_option("--config", a.config, "Scenario config file (JSON)")->check(CLI::ExistingFile);
  sc->excludes(cf);
  cmd->add_option("--seed", a.seed, "Master seed (default: CYBERSIM_SEED, then the config)");
  cmd->add_option("--runs", a.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  cmd->add_option("--convention", a.convention, "Severity sigma convention")->check(CLI::IsMember({"paper", "textbook"}));
  cmd->add_option("--out", a.out, "Output directory for report.json and CSV files");
}

cs::ScenarioConfig resolve_config(const ScenarioArgs& a, const Common& common) {
  if (a.scenario.empty() && a.config.empty()) throw CLI::RequiredError("--scenario or --config");
  cs::ScenarioConfig cfg = a.config.empty() ? cs::default_config(a.scenario) : cs::load_config(a.config);
  auto& run = cs::run_settings(cfg);
  if (auto s = seed_override(a.seed)) run.seed = *s;
  if (a.runs) run.runs = *a.runs;
  if (!a.convention.empty()) run.convention = a.convention == "paper" ? cs::MomentConvention::paper : cs::MomentConvention::textbook;
  if (common.threads_set) run.threads = common.threads;
  if (!a.out.empty()) run.output_dir = a.out;
  if (auto issues = cs::validate(cfg); !issues.empty()) throw cs::ConfigError(std::move(issues));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator of a buyer / insurer / reinsurer cyber-insurance market"};
  app.require_subcommand(1, 1);
  Common common;
  app.add_flag("--json", common.json_out, "Machine-readable output on stdout");
  app.add_option("--threads", common.threads, "Worker threads for Monte Carlo campaigns (0: hardware)")
      ->each([&](const std::string&) { common.threads_set = true; });

  // run
  ScenarioArgs run_args;
  bool no_files = false;
  auto* run = app.add_subcommand("run", "Run a scenario and write its report");
  add_scenario_options(run, run_args);
  run->add_flag("--no-files", no_files, "Do not write output files");

  // compare
  ScenarioArgs cmp_args;
  std::string golden_dir, diff_out;
  auto* compare = app.add_subcommand("compare", "Run a scenario and compare it with golden tables");
  add_scenario_options(compare, cmp_args);
  compare->add_option("--golden", golden_dir, "Golden directory (default: bundled goldens for the scenario)");
  compare->add_option("--diff-out", diff_out, "Write the cell diff as CSV");

  // config
  std::string c_scenario;
  auto* config = app.add_subcommand("config", "Print the default config of a scenario as JSON");
  config->add_option("--scenario", c_scenario, "Built-in scenario")->required()->check(CLI::IsMember(cs::scenario_ids()));

  // price
  std::string p_limit, p_mean, p_sd;
  double p_prob = 0.0, p_lr = 1.0;
  long long p_count = 1;
  std::string p_conv = "paper";
  auto* price = app.add_subcommand("price", "Technical premium, loading and stress losses for one contract group");
  price->add_option("--limit", p_limit, "Policy limit")->required();
  price->add_option("--mean", p_mean, "Severity mean")->required();
  price->add_option("--sd", p_sd, "Severity standard deviation")->required();
  price->add_option("--claim-probability", p_prob, "Per-policy claim probability")->required()->check(CLI::Range(0.0, 1.0));
  price->add_option("--count", p_count, "Number of policies")->check(CLI::NonNegativeNumber);
  price->add_option("--loss-ratio", p_lr, "Target loss ratio")->check(CLI::Range(0.0, 1.0));
  price->add_option("--convention", p_conv, "Severity sigma convention")->check(CLI::IsMember({"paper", "textbook"}));

  // quote-qs
  std::string q_mean, q_sd, q_cover = "500mn";
  double q_lr = 0.5, q_precision = 0.0;
  std::optional<double> q_avg;
  std::string q_conv = "paper";
  auto* quote_qs = app.add_subcommand("quote-qs", "Reinsurance rate for a target loss ratio, and the ceding commission");
  quote_qs->add_option("--mean", q_mean, "Mean of the reinsurer's loss distribution")->required();
  quote_qs->add_option("--sd", q_sd, "Standard deviation of the reinsurer's loss distribution")->required();
  quote_qs->add_option("--loss-ratio", q_lr, "Reinsurer target loss ratio")->check(CLI::Range(0.0, 1.0));
  quote_qs->add_option("--max-cover", q_cover, "Maximum cover");
  quote_qs->add_option("--precision", q_precision, "Quote rounding step (0: none)")->check(CLI::NonNegativeNumber);
  quote_qs->add_option("--avg-rate", q_avg, "Cedent's average charged rate, for the ceding commission");
  quote_qs->add_option("--convention", q_conv, "Severity sigma convention")->check(CLI::IsMember({"paper", "textbook"}));

  // quote-xl
  std::string x_attach, x_layer;
  double x_mu = 16.9, x_sigma = 0.27;
  auto* quote_xl = app.add_subcommand("quote-xl", "Exceedance-priced excess-of-loss layer on a log-normal loss");
  quote_xl->add_option("--attachment", x_attach, "Attachment point")->required();
  quote_xl->add_option("--layer", x_layer, "Layer size")->required();
  quote_xl->add_option("--mu", x_mu, "mu_log of the loss distribution");
  quote_xl->add_option("--sigma", x_sigma, "sigma_log of the loss distribution")->check(CLI::PositiveNumber);

  // optimal-rho
  std::string r_stress, r_premium, r_capital, r_exposure;
  double r_cc = 0.0;
  auto* orho = app.add_subcommand("optimal-rho", "Quota-share fraction keeping profit at the stress loss equal to -capital");
  orho->add_option("--stress", r_stress, "Stress loss")->required();
  orho->add_option("--premium", r_premium, "Premium written")->required();
  orho->add_option("--capital", r_capital, "Capital")->required();
  orho->add_option("--exposure", r_exposure, "Exposure")->required();
  orho->add_option("--cc", r_cc, "Ceding commission as a fraction of exposure")->required();

  // fit
  std::string f_input, f_mean, f_sd, f_conv = "paper";
  auto* fit = app.add_subcommand("fit", "Log-normal parameters from samples or from cash moments");
  auto* fin = fit->add_option("--input", f_input, "File of positive samples, one per line ('-' for stdin)");
  auto* fm = fit->add_option("--mean", f_mean, "Cash mean");
  fit->add_option("--sd", f_sd, "Cash standard deviation")->needs(fm);
  fm->needs(fit->get_option("--sd"));
  fin->excludes(fm);
  fit->add_option("--convention", f_conv, "Sigma convention for --mean/--sd")->check(CLI::IsMember({"paper", "textbook"}));

  // naic
  std::string n_data;
  auto* naic = app.add_subcommand("naic", "Loss-ratio summary of the bundled US cyber-insurer data");
  naic->add_option("--data", n_data, "Alternative CSV (firm,year,dwp_usd_mn,loss_ratio)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (run->parsed()) {
      const auto cfg = resolve_config(run_args, common);
      const cs::Report rep = cs::run_scenario(cfg, data_dir());
      const auto& rs = cs::run_settings(cfg);
      if (!no_files) cs::write_report_files(rep, rs.output_dir);
      if (common.json_out) std::cout << cs::to_json(rep).dump(2) << "\n";
      else {
        std::cout << cs::render_text(rep);
        if (!no_files) std::cout << "\nwrote " << rs.output_dir << "\n";
      }
      return 0;
    }

    if (compare->parsed()) {
      const auto cfg = resolve_config(cmp_args, common);
      const std::string id = cs::scenario_id(cfg);
      const std::filesystem::path gdir = golden_dir.empty() ? data_dir() / "golden" / id : std::filesystem::path(golden_dir);
      const auto goldens = cs::load_golden_dir(gdir);
      const cs::Report rep = cs::run_scenario(cfg, data_dir());
      const cs::GoldenDiff diff = cs::compare_to_golden(rep, goldens);
      if (!diff_out.empty()) cs::write_text_file(diff_out, cs::to_csv(diff));
      if (common.json_out) std::cout << cs::to_json(diff).dump(2) << "\n";
      else std::cout << cs::render_text(diff);
      return diff.passed() ? 0 : 2;
    }

    if (config->parsed()) {
      std::cout << cs::to_json(cs::default_config(c_scenario)).dump(2) << "\n";
      return 0;
    }

    if (price->parsed()) {
      const auto conv = p_conv == "paper" ? cs::MomentConvention::paper : cs::MomentConvention::textbook;
      const cs::ContractSpec spec{"contract", currency(p_limit, "--limit"), {currency(p_mean, "--mean"), currency(p_sd, "--sd")},
                                  cs::ClaimProbability{p_prob}, 0.0};
      const cs::Portfolio port{"cli", {{spec, p_count}}, 0.0, p_lr};
      cs::validate(port);
      const double tp = cs::technical_premium(port);
      const double ex = cs::exposure(port);
      const double load = ex > 0 ? cs::loading(tp, p_lr, ex) : 0.0;
      const auto ln = cs::lognormal_from_moments(spec.severity, conv);
      std::vector<std::pair<std::string, json>> out{
          {"mu_log", ln.mu_log},
          {"sigma_log", ln.sigma_log},
          {"exposure", ex},
          {"technical_premium", tp},
          {"model_expected_loss", cs::model_expected_loss(port, conv)},
          {"technical_rate", ex > 0 ? tp / ex : 0.0},
          {"loading", load},
          {"charged_rate", ex > 0 ? tp / ex + load : 0.0},
          {"premium_income", tp / p_lr}};
      for (double q : {0.95, 0.975, 0.995})
        out.emplace_back("stress_" + cs::level_label(q), cs::stress_loss(port, q, q, conv).total_loss);
      emit(common, out);
      return 0;
    }

    if (quote_qs->parsed()) {
      const auto conv = q_conv == "paper" ? cs::MomentConvention::paper : cs::MomentConvention::textbook;
      const auto ln = cs::lognormal_from_moments({currency(q_mean, "--mean"), currency(q_sd, "--sd")}, conv);
      const double rate = cs::reinsurance_rate({ln, q_lr, currency(q_cover, "--max-cover")});
      const double quoted = cs::quote_rate(rate, q_precision);
      std::vector<std::pair<std::string, json>> out{
          {"mu_log", ln.mu_log}, {"sigma_log", ln.sigma_log}, {"rate", rate}, {"quoted_rate", quoted}};
      if (q_avg) out.emplace_back("ceding_commission", cs::ceding_commission(*q_avg, quoted));
      emit(common, out);
      return 0;
    }

    if (quote_xl->parsed()) {
      const cs::LogNormalParams ln{x_mu, x_sigma};
      const cs::XLTerms t = cs::price_xl_by_exceedance(ln, {currency(x_attach, "--attachment"), currency(x_layer, "--layer")});
      // E[min((X - B)+, A)] from partial expectations.
      auto stop_loss = [&](double k) {
        return cs::lognormal_mean(ln) - cs::partial_expectation(ln, k) - k * (1.0 - cs::lognormal_cdf(ln, k));
      };
      emit(common, {{"attachment", t.attachment},
                    {"layer", t.layer},
                    {"rate", t.rate},
                    {"technical_premium", t.technical_premium},
                    {"expected_indemnity", stop_loss(t.attachment) - stop_loss(t.attachment + t.layer)}});
      return 0;
    }

    if (orho->parsed()) {
      const auto s = cs::optimal_rho(currency(r_stress, "--stress"), currency(r_premium, "--premium"),
                                     currency(r_capital, "--capital"), currency(r_exposure, "--exposure"), r_cc);
      emit(common, {{"rho", s.rho}, {"unclamped", cs::cell_json(s.unclamped)}, {"status", cs::to_string(s.status)}});
      return 0;
    }

    if (fit->parsed()) {
      if (!f_input.empty()) {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (f_input != "-") {
          file.open(f_input);
          if (!file) throw cs::ConfigError({f_input + ": cannot open"});
          in = &file;
        }
        std::vector<double> xs;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(*in, line)) {
          ++lineno;
          if (line.empty() || line == "\r") continue;
          try {
            xs.push_back(cs::parse_currency(line));
          } catch (const cs::DomainError&) {
            throw cs::ConfigError({f_input + ":" + std::to_string(lineno) + ": not a number"});
          }
        }
        const auto p = cs::fit_lognormal(xs);
        emit(common, {{"samples", xs.size()}, {"mu_log", p.mu_log}, {"sigma_log", p.sigma_log}});
        return 0;
      }
      if (f_mean.empty()) throw CLI::RequiredError("--input or --mean/--sd");
      const auto conv = f_conv == "paper" ? cs::MomentConvention::paper : cs::MomentConvention::textbook;
      const auto p = cs::lognormal_from_moments({currency(f_mean, "--mean"), currency(f_sd, "--sd")}, conv);
      emit(common, {{"mu_log", p.mu_log}, {"sigma_log", p.sigma_log}, {"convention", cs::to_string(conv)}});
      return 0;
    }

    if (naic->parsed()) {
      cs::NaicConfig cfg;
      if (!n_data.empty()) cfg.data = std::filesystem::absolute(n_data).string();
      const cs::Report rep = cs::run_naic_report(cfg, data_dir());
      if (common.json_out) std::cout << cs::to_json(rep).dump(2) << "\n";
      else std::cout << cs::render_text(rep);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const cs::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const cs::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
