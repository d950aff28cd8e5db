#pragma once

// Reference values for report cells and the cell-by-cell comparison.
//
// A golden directory holds table_<id>.csv files with the header
//   row,column,expected,mode,tolerance,quantum
// mode is one of
//   round        |actual - expected| <= quantum / 2   (published value is a rounding)
//   abs          |actual - expected| <= tolerance
//   rel          |actual - expected| <= tolerance * |expected| + quantum / 2
//   known_issue  reported as flagged, never passes silently
//   info         reported with its delta, not judged

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cybersim/error.hpp"
#include "cybersim/naic.hpp"
#include "cybersim/report.hpp"

namespace cybersim {

enum class GoldenMode { round, abs, rel, known_issue, info };

inline const char* to_string(GoldenMode m) {
  switch (m) {
    case GoldenMode::round: return "round";
    case GoldenMode::abs: return "abs";
    case GoldenMode::rel: return "rel";
    case GoldenMode::known_issue: return "known_issue";
    case GoldenMode::info: return "info";
  }
  return "info";
}

inline GoldenMode golden_mode_from_string(const std::string& s) {
  for (GoldenMode m : {GoldenMode::round, GoldenMode::abs, GoldenMode::rel, GoldenMode::known_issue, GoldenMode::info})
    if (s == to_string(m)) return m;
  throw DomainError("unknown golden mode '" + s + "'");
}

struct GoldenCell {
  std::string row;
  std::string column;
  double expected = 0.0;
  GoldenMode mode = GoldenMode::round;
  double tolerance = 0.0;
  double quantum = 0.0;
};

struct GoldenTable {
  std::string table_id;
  std::vector<GoldenCell> cells;
};

enum class CellStatus { pass, fail, flagged, info, missing };

inline const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::pass: return "pass";
    case CellStatus::fail: return "fail";
    case CellStatus::flagged: return "flagged";
    case CellStatus::info: return "info";
    case CellStatus::missing: return "missing";
  }
  return "missing";
}

struct CellDiff {
  std::string table_id;
  GoldenCell golden;
  double actual = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();  // actual - expected
  double bound = std::numeric_limits<double>::quiet_NaN();  // allowed |delta|
  CellStatus status = CellStatus::missing;
};

struct GoldenDiff {
  std::vector<CellDiff> cells;

  std::size_t count(CellStatus s) const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [s](const CellDiff& c) { return c.status == s; }));
  }
  /// Entries that make the comparison fail: out-of-band and missing cells.
  std::vector<CellDiff> failures() const {
    std::vector<CellDiff> out;
    for (const auto& c : cells)
      if (c.status == CellStatus::fail || c.status == CellStatus::missing) out.push_back(c);
    return out;
  }
  bool passed() const { return failures().empty(); }
};

inline GoldenTable parse_golden_csv(std::istream& in, const std::string& table_id, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError({source + ": empty golden file"});
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "row,column,expected,mode,tolerance,quantum")
    throw ConfigError({source + ":1: header must be row,column,expected,mode,tolerance,quantum"});
  GoldenTable t{table_id, {}};
  std::vector<std::string> issues;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    const std::string where = source + ":" + std::to_string(lineno);
    if (f.size() != 6) {
      issues.push_back(where + ": expected 6 fields");
      continue;
    }
    try {
      GoldenCell c;
      c.row = f[0];
      c.column = f[1];
      c.expected = std::stod(f[2]);
      c.mode = golden_mode_from_string(f[3]);
      c.tolerance = f[4].empty() ? 0.0 : std::stod(f[4]);
      c.quantum = f[5].empty() ? 0.0 : std::stod(f[5]);
      if (c.mode == GoldenMode::abs && !(c.tolerance > 0.0)) issues.push_back(where + ": abs mode needs tolerance > 0");
      if (c.mode == GoldenMode::rel && !(c.tolerance > 0.0)) issues.push_back(where + ": rel mode needs tolerance > 0");
      if (c.mode == GoldenMode::round && !(c.quantum > 0.0)) issues.push_back(where + ": round mode needs quantum > 0");
      t.cells.push_back(std::move(c));
    } catch (const std::exception& e) {
      issues.push_back(where + ": " + e.what());
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return t;
}

/// Every table_<id>.csv in `dir`, sorted by id.
inline std::vector<GoldenTable> load_golden_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError({dir.string() + ": golden directory not found"});
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("table_", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GoldenTable> out;
  for (const auto& p : files) {
    std::ifstream in(p);
    const std::string stem = p.stem().string();
    out.push_back(parse_golden_csv(in, stem.substr(6), p.string()));
  }
  return out;
}

inline CellDiff compare_cell(const std::string& table_id, const GoldenCell& g, std::optional<double> actual) {
  CellDiff d;
  d.table_id = table_id;
  d.golden = g;
  if (!actual) return d;
  d.actual = *actual;
  d.delta = *actual - g.expected;
  switch (g.mode) {
    case GoldenMode::round: d.bound = 0.5 * g.quantum; break;
    case GoldenMode::abs: d.bound = g.tolerance; break;
    case GoldenMode::rel: d.bound = g.tolerance * std::fabs(g.expected) + 0.5 * g.quantum; break;
    case GoldenMode::known_issue:
      d.status = CellStatus::flagged;
      return d;
    case GoldenMode::info:
      d.status = CellStatus::info;
      return d;
  }
  // Slack of a few ulps so values sitting exactly on a rounding edge pass.
  const double slack = 1e-9 * std::max(std::fabs(g.expected), d.bound);
  d.status = std::isfinite(d.delta) && std::fabs(d.delta) <= d.bound + slack ? CellStatus::pass : CellStatus::fail;
  return d;
}

/// Throws DomainError for a golden table whose id the report does not have.
inline GoldenDiff compare_to_golden(const Report& report, const std::vector<GoldenTable>& goldens) {
  GoldenDiff diff;
  for (const auto& g : goldens) {
    const Table* t = report.find_table(g.table_id);
    if (t == nullptr) throw DomainError("golden table '" + g.table_id + "' is not produced by scenario " + report.scenario);
    for (const auto& cell : g.cells) diff.cells.push_back(compare_cell(g.table_id, cell, t->cell(cell.row, cell.column)));
  }
  return diff;
}

/// Goldens that pin every non-empty cell of a report at its own value.
inline std::vector<GoldenTable> goldens_from_report(const Report& report, GoldenMode mode = GoldenMode::abs,
                                                    double tolerance = 1e-9) {
  std::vector<GoldenTable> out;
  for (const auto& t : report.tables) {
    GoldenTable g{t.id(), {}};
    for (const auto& r : t.rows())
      for (std::size_t i = 0; i < r.values.size(); ++i)
        if (!std::isnan(r.values[i])) g.cells.push_back({r.label, t.columns()[i].name, r.values[i], mode, tolerance, 0.0});
    out.push_back(std::move(g));
  }
  return out;
}

inline nlohmann::json to_json(const GoldenDiff& d) {
  nlohmann::json j;
  j["passed"] = d.passed();
  j["counts"] = {{"pass", d.count(CellStatus::pass)},
                 {"fail", d.count(CellStatus::fail)},
                 {"flagged", d.count(CellStatus::flagged)},
                 {"info", d.count(CellStatus::info)},
                 {"missing", d.count(CellStatus::missing)}};
  j["cells"] = nlohmann::json::array();
  for (const auto& c : d.cells)
    j["cells"].push_back({{"table", c.table_id},
                          {"row", c.golden.row},
                          {"column", c.golden.column},
                          {"expected", c.golden.expected},
                          {"actual", cell_json(c.actual)},
                          {"delta", cell_json(c.delta)},
                          {"bound", cell_json(c.bound)},
                          {"mode", to_string(c.golden.mode)},
                          {"status", to_string(c.status)}});
  return j;
}

inline std::string to_csv(const GoldenDiff& d) {
  std::string out = "table,row,column,expected,actual,delta,bound,mode,status\n";
  for (const auto& c : d.cells)
    out += detail::csv_field(c.table_id) + "," + detail::csv_field(c.golden.row) + "," +
           detail::csv_field(c.golden.column) + "," + format_number(c.golden.expected) + "," +
           format_number(c.actual) + "," + format_number(c.delta) + "," + format_number(c.bound) + "," +
           to_string(c.golden.mode) + "," + to_string(c.status) + "\n";
  return out;
}

/// Human listing: only cells that are not plain passes.
inline std::string render_text(const GoldenDiff& d) {
  std::ostringstream os;
  os << "golden comparison: " << d.count(CellStatus::pass) << " pass, " << d.count(CellStatus::fail) << " fail, "
     << d.count(CellStatus::missing) << " missing, " << d.count(CellStatus::flagged) << " flagged, "
     << d.count(CellStatus::info) << " info\n";
  for (const auto& c : d.cells) {
    if (c.status == CellStatus::pass) continue;
    os << "  " << to_string(c.status) << "  table " << c.table_id << " [" << c.golden.row << ", " << c.golden.column
       << "] expected " << format_number(c.golden.expected) << " actual "
       << (std::isnan(c.actual) ? std::string("-") : format_number(c.actual));
    if (!std::isnan(c.bound)) os << " (|delta| " << format_number(std::fabs(c.delta)) << " > " << format_number(c.bound) << ")";
    else if (!std::isnan(c.delta)) os << " (delta " << format_number(c.delta) << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace cybersim
