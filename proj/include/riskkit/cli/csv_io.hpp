#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskkit/allocation.hpp"
#include "riskkit/error.hpp"
#include "riskkit/scoring.hpp"

namespace riskkit::cli {

/// Parse failure with a 1-based location in the file. Line 1 is the header;
/// column 0 means the whole line (or file) is at fault.
class CsvParseError : public RiskError {
 public:
  CsvParseError(std::string path, std::size_t row, std::size_t column, const std::string& what);

  const std::string& path() const noexcept { return path_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string path_;
  std::size_t row_;
  std::size_t column_;
};

/// Header row of position names, then one numeric row per period. Losses are
/// positive numbers and gains negative; no sign flip is applied.
LossPanel parse_panel_csv(const std::string& path);

struct ForecastTable {
  std::vector<ForecastRecord> records;
  std::vector<double> realized;
};

/// Columns: period and realized (required); var_forecast, es_forecast,
/// q1..qN and scenario_file (optional, any order). Empty optional cells are
/// treated as missing. Scenario files hold one value per line and are
/// resolved relative to the directory of the forecast file.
ForecastTable parse_forecasts_csv(const std::string& path);

/// One number per line; blank lines are skipped.
std::vector<double> read_scenario_file(const std::string& path);

}  // namespace riskkit::cli
