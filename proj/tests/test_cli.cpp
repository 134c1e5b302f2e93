#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskkit/cli/csv_io.hpp"
#include "riskkit/cli/run.hpp"

using namespace riskkit;
using namespace riskkit::cli;

namespace {

const std::filesystem::path kFixtures = RISKKIT_FIXTURES;

std::string fixture(const std::string& name) { return (kFixtures / name).string(); }

struct Outcome {
  int code;
  Json report;
  std::string text;
};

Outcome run_cli(RunConfig config) {
  std::ostringstream out, err;
  const int code = execute(config, out, err);
  return {code, Json::parse(out.str()), out.str()};
}

RunConfig config_for(Command c, std::vector<std::string> inputs) {
  RunConfig cfg;
  cfg.command = c;
  for (auto& i : inputs) cfg.inputs.push_back(fixture(i));
  return cfg;
}

}  // namespace

TEST(ParsePanel, Basic) {
  const auto path = std::filesystem::temp_directory_path() / "riskkit_basic_panel.csv";
  std::ofstream(path) << "a,b\n1,2\n3,4\n";
  const auto p = parse_panel_csv(path.string());
  EXPECT_EQ(p.periods(), 2u);
  EXPECT_EQ(p.positions(), 2u);
  EXPECT_EQ(p.names()[1], "b");
  EXPECT_EQ(p.rows()[1][0], 3.0);
  std::filesystem::remove(path);
}

TEST(ParsePanel, ErrorsCarryLocation) {
  try {
    parse_panel_csv(fixture("panel_ragged.csv"));
    ADD_FAILURE();
  } catch (const CsvParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.row(), 2u);
  }
  try {
    parse_panel_csv(fixture("panel_bad_cell.csv"));
    ADD_FAILURE();
  } catch (const CsvParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
  EXPECT_THROW(parse_panel_csv(fixture("no_such_file.csv")), CsvParseError);
}

TEST(ParseForecasts, Layouts) {
  const auto var = parse_forecasts_csv(fixture("forecasts_var.csv"));
  EXPECT_EQ(var.records.size(), 250u);
  EXPECT_TRUE(var.records[0].var_forecast.has_value());
  EXPECT_FALSE(var.records[0].scenario_set.has_value());

  const auto es = parse_forecasts_csv(fixture("forecasts_es.csv"));
  EXPECT_EQ(es.records[0].quantile_forecasts.size(), 4u);
  EXPECT_TRUE(es.records[0].es_forecast.has_value());

  const auto pit = parse_forecasts_csv(fixture("forecasts_pit.csv"));
  ASSERT_TRUE(pit.records[0].scenario_set.has_value());
  EXPECT_EQ(pit.records[0].scenario_set->size(), 200u);

  EXPECT_THROW(parse_forecasts_csv(fixture("forecasts_no_realized.csv")), CsvParseError);
  EXPECT_THROW(parse_forecasts_csv(fixture("forecasts_dangling.csv")), CsvParseError);
}

TEST(Run, MeasureOnUniformPanel) {
  auto cfg = config_for(Command::Measure, {"panel_uniform.csv"});
  cfg.kind = "es";
  cfg.level = 0.95;
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.report["result"]["value"].get<double>(), 98.0);
  EXPECT_EQ(o.report["config"]["level"].get<double>(), 0.95);
  EXPECT_EQ(o.report["version"], kVersion);
}

TEST(Run, AllocateSinglePosition) {
  auto cfg = config_for(Command::Allocate, {"panel_uniform.csv"});
  cfg.kind = "expectile";
  cfg.level = 0.8;
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.code, 0);
  const auto& r = o.report["result"];
  EXPECT_NEAR(r["contributions"][0]["contribution"].get<double>(), r["total"].get<double>(), 1e-12);
}

TEST(Run, BacktestVarRejectsWhenForecastsAreBelowEverything) {
  auto cfg = config_for(Command::BacktestVar, {"forecasts_var_low.csv"});
  cfg.level = 0.99;
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.report["result"]["coverage_rejected"].get<bool>());
  EXPECT_EQ(o.report["result"]["violations"].get<int>(), 250);
}

TEST(Run, BacktestPitIsSeeded) {
  auto cfg = config_for(Command::BacktestPit, {"forecasts_pit.csv"});
  cfg.seed = 3;
  const auto a = run_cli(cfg);
  const auto b = run_cli(cfg);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.report["result"]["seed"].get<std::uint64_t>(), 3u);

  // Realizations sitting on tied atoms make the draw visible.
  const auto dir = std::filesystem::temp_directory_path() / "riskkit_pit_ties";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "s.txt") << "0\n0\n1\n1\n";
  {
    std::ofstream csv(dir / "f.csv");
    csv << "period,realized,scenario_file\n";
    for (int t = 1; t <= 20; ++t) csv << t << "," << t % 2 << ",s.txt\n";
  }
  cfg.inputs = {(dir / "f.csv").string()};
  const auto tied = run_cli(cfg);
  EXPECT_EQ(tied.code, 0);
  EXPECT_EQ(run_cli(cfg).text, tied.text);
  cfg.seed = 4;
  EXPECT_NE(run_cli(cfg).report["result"]["pit"], tied.report["result"]["pit"]);
  std::filesystem::remove_all(dir);
}

TEST(Run, ElicitAndCounterexample) {
  auto cfg = config_for(Command::Elicit, {"panel_uniform.csv"});
  cfg.score = "weighted-absolute";
  cfg.level = 0.95;
  auto o = run_cli(cfg);
  EXPECT_EQ(o.report["result"]["minimizer"].get<double>(), 95.0);
  EXPECT_EQ(o.report["result"]["two_step_es"]["expected_shortfall"].get<double>(), 97.5);

  RunConfig ce;
  ce.command = Command::Counterexample;
  ce.kind = "expectile";
  ce.level = 0.5;
  o = run_cli(ce);
  EXPECT_EQ(o.code, 0);
  EXPECT_FALSE(o.report["result"]["found"].get<bool>());
  EXPECT_FALSE(o.report["warnings"].empty());
}

TEST(Run, InputErrorsExitWithTwo) {
  auto cfg = config_for(Command::Measure, {"panel_bad_cell.csv"});
  cfg.kind = "es";
  cfg.level = 0.95;
  auto o = run_cli(cfg);
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(o.report["result"]["error"]["code"], "ParseError");
  EXPECT_EQ(o.report["result"]["error"]["row"].get<int>(), 3);

  cfg = config_for(Command::Measure, {"panel_uniform.csv"});
  cfg.kind = "es";
  cfg.level = 1.5;
  EXPECT_EQ(run_cli(cfg).code, 2);
  cfg.level = 0.9;
  cfg.significance = 0.6;
  EXPECT_EQ(run_cli(cfg).code, 2);
  cfg.significance = 0.05;
  cfg.bins = 1;
  EXPECT_EQ(run_cli(cfg).code, 2);
  cfg.bins = 10;
  cfg.kind = "median";
  EXPECT_EQ(run_cli(cfg).code, 2);
  cfg.kind = "es";
  cfg.level.reset();
  EXPECT_EQ(run_cli(cfg).code, 2);
}

TEST(Run, DiversifyReportsDegenerateDenominatorsAsWarnings) {
  const auto path = std::filesystem::temp_directory_path() / "riskkit_zero_panel.csv";
  std::ofstream(path) << "a,b\n0,0\n0,0\n";
  RunConfig cfg;
  cfg.command = Command::Diversify;
  cfg.inputs = {path.string()};
  cfg.kind = "es";
  cfg.level = 0.5;
  const auto o = run_cli(cfg);
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.report["result"]["diversification_index"].is_null());
  EXPECT_GE(o.report["warnings"].size(), 2u);
  std::filesystem::remove(path);
}

TEST(Seed, EnvironmentOverride) {
  ::setenv("RISKKIT_SEED", "42", 1);
  EXPECT_EQ(default_seed(), 42u);
  ::setenv("RISKKIT_SEED", "abc", 1);
  EXPECT_THROW(default_seed(), RiskError);
  ::unsetenv("RISKKIT_SEED");
  EXPECT_EQ(default_seed(), 0u);
}

TEST(Report, KeysAreSorted) {
  auto cfg = config_for(Command::Measure, {"panel_uniform.csv"});
  cfg.kind = "var";
  cfg.level = 0.95;
  const auto text = run_cli(cfg).text;
  EXPECT_LT(text.find("\"command\""), text.find("\"config\""));
  EXPECT_LT(text.find("\"config\""), text.find("\"result\""));
  EXPECT_LT(text.find("\"version\""), text.find("\"warnings\""));
}
