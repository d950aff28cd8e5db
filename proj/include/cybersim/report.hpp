#pragma once

// Scenario results: named tables of numeric cells plus plot series, with
// JSON, CSV and plain-text renderings.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cybersim {

enum class Unit { currency, rate, ratio, probability, count, parameter };

inline const char* to_string(Unit u) {
  switch (u) {
    case Unit::currency: return "currency";
    case Unit::rate: return "rate";
    case Unit::ratio: return "ratio";
    case Unit::probability: return "probability";
    case Unit::count: return "count";
    case Unit::parameter: return "parameter";
  }
  return "parameter";
}

inline Unit unit_from_string(const std::string& s) {
  for (Unit u : {Unit::currency, Unit::rate, Unit::ratio, Unit::probability, Unit::count, Unit::parameter})
    if (s == to_string(u)) return u;
  throw std::invalid_argument("unknown unit '" + s + "'");
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Currency cells are held at whole cents so text output is stable.
inline double round_to_cents(double v) {
  if (!std::isfinite(v)) return v;
  return static_cast<double>(std::llround(v * 100.0)) / 100.0;
}

struct Column {
  std::string name;
  Unit unit = Unit::parameter;
};

struct Row {
  std::string label;
  std::vector<double> values;  // NaN marks an empty cell
};

class Table {
 public:
  Table() = default;
  Table(std::string id, std::string title, std::vector<Column> columns)
      : id_(std::move(id)), title_(std::move(title)), columns_(std::move(columns)) {}

  const std::string& id() const { return id_; }
  const std::string& title() const { return title_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<std::string>& notes() const { return notes_; }

  void add_row(std::string label, std::vector<double> values) {
    if (values.size() != columns_.size())
      throw std::logic_error("table " + id_ + ": row '" + label + "' has " + std::to_string(values.size()) +
                             " cells, expected " + std::to_string(columns_.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
      if (columns_[i].unit == Unit::currency) values[i] = round_to_cents(values[i]);
    rows_.push_back({std::move(label), std::move(values)});
  }

  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  std::optional<std::size_t> column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == name) return i;
    return std::nullopt;
  }

  const Row* find_row(const std::string& label) const {
    for (const auto& r : rows_)
      if (r.label == label) return &r;
    return nullptr;
  }

  /// Value at (row, column); nullopt if either is absent.
  std::optional<double> cell(const std::string& row, const std::string& column) const {
    const auto c = column_index(column);
    const Row* r = find_row(row);
    if (!c || r == nullptr) return std::nullopt;
    return r->values[*c];
  }

  double at(const std::string& row, const std::string& column) const {
    const auto v = cell(row, column);
    if (!v) throw std::out_of_range("table " + id_ + " has no cell (" + row + ", " + column + ")");
    return *v;
  }

 private:
  std::string id_;
  std::string title_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::vector<std::string> notes_;
};

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Plot {
  std::string id;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::string convention;
  std::vector<Table> tables;
  std::vector<Plot> plots;
  std::vector<std::string> notes;

  const Table* find_table(const std::string& id) const {
    for (const auto& t : tables)
      if (t.id() == id) return &t;
    return nullptr;
  }

  const Table& table(const std::string& id) const {
    const Table* t = find_table(id);
    if (t == nullptr) throw std::out_of_range("report has no table '" + id + "'");
    return *t;
  }
};

inline nlohmann::json cell_json(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json j;
  j["id"] = t.id();
  j["title"] = t.title();
  j["columns"] = nlohmann::json::array();
  for (const auto& c : t.columns()) j["columns"].push_back({{"name", c.name}, {"unit", to_string(c.unit)}});
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows()) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : r.values) values.push_back(cell_json(v));
    j["rows"].push_back({{"label", r.label}, {"values", values}});
  }
  j["notes"] = t.notes();
  return j;
}

inline Table table_from_json(const nlohmann::json& j) {
  std::vector<Column> cols;
  for (const auto& c : j.at("columns")) cols.push_back({c.at("name").get<std::string>(), unit_from_string(c.at("unit"))});
  Table t(j.at("id").get<std::string>(), j.at("title").get<std::string>(), std::move(cols));
  for (const auto& r : j.at("rows")) {
    std::vector<double> values;
    for (const auto& v : r.at("values"))
      values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    t.add_row(r.at("label").get<std::string>(), std::move(values));
  }
  for (const auto& n : j.value("notes", nlohmann::json::array())) t.add_note(n.get<std::string>());
  return t;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["runs"] = r.runs;
  j["convention"] = r.convention;
  j["tables"] = nlohmann::json::array();
  for (const auto& t : r.tables) j["tables"].push_back(to_json(t));
  j["plots"] = nlohmann::json::array();
  for (const auto& p : r.plots) {
    nlohmann::json pj{{"id", p.id}, {"title", p.title}, {"x_label", p.x_label}, {"y_label", p.y_label}};
    pj["series"] = nlohmann::json::array();
    for (const auto& s : p.series) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& [x, y] : s.points) pts.push_back({x, y});
      pj["series"].push_back({{"name", s.name}, {"points", pts}});
    }
    j["plots"].push_back(pj);
  }
  j["notes"] = r.notes;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.runs = j.at("runs").get<std::size_t>();
  r.convention = j.at("convention").get<std::string>();
  for (const auto& t : j.at("tables")) r.tables.push_back(table_from_json(t));
  for (const auto& pj : j.at("plots")) {
    Plot p{pj.at("id"), pj.at("title"), pj.at("x_label"), pj.at("y_label"), {}};
    for (const auto& sj : pj.at("series")) {
      PlotSeries s{sj.at("name"), {}};
      for (const auto& pt : sj.at("points")) s.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
      p.series.push_back(std::move(s));
    }
    r.plots.push_back(std::move(p));
  }
  for (const auto& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
  return r;
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_value(double v, Unit unit) {
  if (std::isnan(v)) return "";
  if (unit == Unit::currency && std::isfinite(v)) {
    const long long cents = std::llround(v * 100.0);
    const long long whole = cents / 100;
    const long long frac = std::llabs(cents % 100);
    std::string s = (cents < 0 && whole == 0) ? "-0" : std::to_string(whole);
    return s + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
  }
  return format_number(v);
}
}  // namespace detail

/// One header row ("row", then the column names), LF line endings.
inline std::string to_csv(const Table& t) {
  std::string out = "row";
  for (const auto& c : t.columns()) out += "," + detail::csv_field(c.name);
  out += "\n";
  for (const auto& r : t.rows()) {
    out += detail::csv_field(r.label);
    for (std::size_t i = 0; i < r.values.size(); ++i) out += "," + detail::csv_value(r.values[i], t.columns()[i].unit);
    out += "\n";
  }
  return out;
}

inline std::string to_csv(const Plot& p) {
  std::string out = "series,x,y\n";
  for (const auto& s : p.series)
    for (const auto& [x, y] : s.points) out += detail::csv_field(s.name) + "," + format_number(x) + "," + format_number(y) + "\n";
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// Writes report.json, table_<id>.csv per table (ids already carry the
/// "table_" prefix where they name a published table) and plot_<id>.csv.
inline void write_report_files(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.json", to_json(r).dump(2) + "\n");
  for (const auto& t : r.tables) {
    const std::string stem = t.id().rfind("table_", 0) == 0 ? t.id() : "table_" + t.id();
    write_text_file(dir / (stem + ".csv"), to_csv(t));
  }
  for (const auto& p : r.plots) write_text_file(dir / ("plot_" + p.id + ".csv"), to_csv(p));
}

/// Aligned plain-text rendering. Cells use the same text as the CSV files,
/// so the numbers are exactly those in report.json.
inline std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario << "  seed " << r.seed << "  runs " << r.runs << "  convention " << r.convention
     << "\n";
  for (const auto& t : r.tables) {
    os << "\n[" << t.id() << "] " << t.title() << "\n";
    std::vector<std::size_t> width(t.columns().size() + 1, 3);
    for (const auto& row : t.rows()) width[0] = std::max(width[0], row.label.size());
    for (std::size_t i = 0; i < t.columns().size(); ++i) {
      width[i + 1] = std::max(width[i + 1], t.columns()[i].name.size());
      for (const auto& row : t.rows())
        width[i + 1] = std::max(width[i + 1], detail::csv_value(row.values[i], t.columns()[i].unit).size());
    }
    os << std::left << std::setw(static_cast<int>(width[0])) << "row";
    for (std::size_t i = 0; i < t.columns().size(); ++i)
      os << "  " << std::right << std::setw(static_cast<int>(width[i + 1])) << t.columns()[i].name;
    os << "\n";
    for (const auto& row : t.rows()) {
      os << std::left << std::setw(static_cast<int>(width[0])) << row.label;
      for (std::size_t i = 0; i < row.values.size(); ++i) {
        const std::string v = detail::csv_value(row.values[i], t.columns()[i].unit);
        os << "  " << std::right << std::setw(static_cast<int>(width[i + 1])) << (v.empty() ? "-" : v);
      }
      os << "\n";
    }
    for (const auto& n : t.notes()) os << "  note: " << n << "\n";
  }
  if (!r.notes.empty()) os << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace cybersim
