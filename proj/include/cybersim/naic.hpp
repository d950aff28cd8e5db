#pragma once

// US cyber-insurer premium and loss-ratio records (long format CSV:
// firm,year,dwp_usd_mn,loss_ratio) and per-year market statistics.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cybersim/error.hpp"

namespace cybersim {

struct NaicRecord {
  std::string firm;
  int year = 0;
  double dwp_usd_mn = 0.0;
  double loss_ratio = 0.0;
};

struct NaicYearSummary {
  int year = 0;
  std::size_t firms = 0;
  double total_dwp_usd_mn = 0.0;
  double total_losses_usd_mn = 0.0;
  double weighted_loss_ratio = 0.0;  // total losses / total DWP
  double trend_slope = 0.0;          // zero-intercept least squares of losses on DWP
};

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}
}  // namespace detail

/// Parses the bundled format. Every problem is collected before throwing.
inline std::vector<NaicRecord> parse_naic_csv(std::istream& in, const std::string& source = "naic") {
  std::vector<std::string> issues;
  std::vector<NaicRecord> records;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError({source + ": empty file"});
  const auto header = detail::split_csv_line(line);
  const std::vector<std::string> expected{"firm", "year", "dwp_usd_mn", "loss_ratio"};
  if (header != expected) throw ConfigError({source + ":1: header must be firm,year,dwp_usd_mn,loss_ratio"});
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    const std::string where = source + ":" + std::to_string(lineno);
    if (f.size() != 4) {
      issues.push_back(where + ": expected 4 fields, got " + std::to_string(f.size()));
      continue;
    }
    NaicRecord r;
    r.firm = f[0];
    if (r.firm.empty()) issues.push_back(where + ": missing firm");
    try {
      std::size_t used = 0;
      r.year = std::stoi(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("year");
      r.dwp_usd_mn = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("dwp");
      r.loss_ratio = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument("loss_ratio");
    } catch (const std::exception&) {
      issues.push_back(where + ": missing or non-numeric year/dwp_usd_mn/loss_ratio");
      continue;
    }
    if (!(r.dwp_usd_mn >= 0.0)) issues.push_back(where + ": dwp_usd_mn must be non-negative");
    if (!(r.loss_ratio >= 0.0)) issues.push_back(where + ": loss_ratio must be non-negative");
    records.push_back(std::move(r));
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return records;
}

inline std::vector<NaicRecord> load_naic_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open"});
  return parse_naic_csv(in, path);
}

/// One summary per year present, in ascending year order.
inline std::vector<NaicYearSummary> summarise_naic(const std::vector<NaicRecord>& records) {
  std::map<int, NaicYearSummary> by_year;
  std::map<int, double> sxx, sxy;
  for (const auto& r : records) {
    auto& s = by_year[r.year];
    s.year = r.year;
    ++s.firms;
    const double losses = r.dwp_usd_mn * r.loss_ratio;
    s.total_dwp_usd_mn += r.dwp_usd_mn;
    s.total_losses_usd_mn += losses;
    sxx[r.year] += r.dwp_usd_mn * r.dwp_usd_mn;
    sxy[r.year] += r.dwp_usd_mn * losses;
  }
  std::vector<NaicYearSummary> out;
  for (auto& [year, s] : by_year) {
    if (!(s.total_dwp_usd_mn > 0.0)) throw DomainError("naic: year " + std::to_string(year) + " has no premium");
    s.weighted_loss_ratio = s.total_losses_usd_mn / s.total_dwp_usd_mn;
    s.trend_slope = sxy[year] / sxx[year];
    out.push_back(s);
  }
  return out;
}

}  // namespace cybersim
