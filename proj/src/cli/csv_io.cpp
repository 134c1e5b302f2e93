#include "riskkit/cli/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

namespace riskkit::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> to_number(const std::string& cell) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvParseError(path, 0, 0, "cannot open file");
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c].empty()) throw CsvParseError(path, line_no, c + 1, "empty column name");
      }
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw CsvParseError(path, line_no, 0,
                          "expected " + std::to_string(t.header.size()) + " cells, found " +
                              std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(line_no);
  }
  if (t.header.empty()) throw CsvParseError(path, 0, 0, "file has no header row");
  return t;
}

double number_at(const std::string& path, const Table& t, std::size_t r, std::size_t c) {
  const auto v = to_number(t.rows[r][c]);
  if (!v) throw CsvParseError(path, t.lines[r], c + 1, "non-numeric cell '" + t.rows[r][c] + "'");
  return *v;
}

std::optional<double> optional_number_at(const std::string& path, const Table& t, std::size_t r,
                                         std::optional<std::size_t> c) {
  if (!c || t.rows[r][*c].empty()) return std::nullopt;
  return number_at(path, t, r, *c);
}

}  // namespace

CsvParseError::CsvParseError(std::string path, std::size_t row, std::size_t column, const std::string& what)
    : RiskError(ErrorCode::ParseError,
                path + ":" + std::to_string(row) + (column ? ":" + std::to_string(column) : "") + ": " + what),
      path_(std::move(path)),
      row_(row),
      column_(column) {}

LossPanel parse_panel_csv(const std::string& path) {
  const auto t = read_table(path);
  if (t.rows.empty()) throw CsvParseError(path, 0, 0, "no data rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<double> row;
    row.reserve(t.header.size());
    for (std::size_t c = 0; c < t.header.size(); ++c) row.push_back(number_at(path, t, r, c));
    rows.push_back(std::move(row));
  }
  return LossPanel(t.header, std::move(rows));
}

std::vector<double> read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvParseError(path, 0, 0, "cannot open scenario file");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cell = trim(line);
    if (cell.empty()) continue;
    const auto v = to_number(cell);
    if (!v) throw CsvParseError(path, line_no, 1, "non-numeric scenario '" + cell + "'");
    values.push_back(*v);
  }
  return values;
}

ForecastTable parse_forecasts_csv(const std::string& path) {
  const auto t = read_table(path);
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (!column.emplace(t.header[c], c).second) {
      throw CsvParseError(path, 1, c + 1, "duplicate column '" + t.header[c] + "'");
    }
  }
  const auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto period_col = find("period");
  const auto realized_col = find("realized");
  if (!realized_col) throw CsvParseError(path, 1, 0, "missing required column 'realized'");
  if (!period_col) throw CsvParseError(path, 1, 0, "missing required column 'period'");
  const auto var_col = find("var_forecast");
  const auto es_col = find("es_forecast");
  const auto scenario_col = find("scenario_file");
  std::vector<std::size_t> quantile_cols;
  for (std::size_t k = 1; auto c = find("q" + std::to_string(k)); ++k) quantile_cols.push_back(*c);

  const auto base = std::filesystem::path(path).parent_path();
  ForecastTable out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ForecastRecord rec;
    const double period = number_at(path, t, r, *period_col);
    if (period != static_cast<double>(static_cast<long>(period))) {
      throw CsvParseError(path, t.lines[r], *period_col + 1, "period must be an integer");
    }
    rec.period = static_cast<long>(period);
    rec.var_forecast = optional_number_at(path, t, r, var_col);
    rec.es_forecast = optional_number_at(path, t, r, es_col);
    for (auto c : quantile_cols) {
      const auto q = optional_number_at(path, t, r, c);
      if (!q) throw CsvParseError(path, t.lines[r], c + 1, "quantile forecast missing");
      rec.quantile_forecasts.push_back(*q);
    }
    if (scenario_col && !t.rows[r][*scenario_col].empty()) {
      const auto file = base / t.rows[r][*scenario_col];
      if (!std::filesystem::exists(file)) {
        throw CsvParseError(path, t.lines[r], *scenario_col + 1,
                            "scenario file '" + t.rows[r][*scenario_col] + "' not found");
      }
      rec.scenario_set = read_scenario_file(file.string());
    }
    rec.validate();
    out.realized.push_back(number_at(path, t, r, *realized_col));
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace riskkit::cli
