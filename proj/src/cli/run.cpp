#include "riskkit/cli/run.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <utility>

#include "riskkit/cli/csv_io.hpp"

namespace riskkit::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::Measure, "measure"},
    {Command::Allocate, "allocate"},
    {Command::Diversify, "diversify"},
    {Command::BacktestVar, "backtest-var"},
    {Command::BacktestEs, "backtest-es"},
    {Command::BacktestPit, "backtest-pit"},
    {Command::Elicit, "elicit"},
    {Command::Counterexample, "counterexample"},
}};

const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) {
    fail(ErrorCode::InvalidArgument, to_string(c.command) + " takes exactly one input file");
  }
  return c.inputs.front();
}

double required_level(const RunConfig& c) {
  if (!c.level) fail(ErrorCode::InvalidArgument, to_string(c.command) + " needs --level");
  return *c.level;
}

MeasureKind measure_kind(const RunConfig& c) {
  if (c.kind == "variance") return MeasureKind::variance();
  if (c.kind == "mean") return MeasureKind::mean();
  if (c.kind == "var") return MeasureKind::var(Level::quantile(required_level(c)));
  if (c.kind == "es") return MeasureKind::es(Level::quantile(required_level(c)));
  if (c.kind == "expectile") return MeasureKind::expectile(Level::expectile(required_level(c)));
  if (c.kind.empty()) fail(ErrorCode::InvalidArgument, to_string(c.command) + " needs --kind");
  fail(ErrorCode::InvalidArgument, "unknown measure kind '" + c.kind + "'");
}

// Value of a quantity that may legitimately be undefined for the input; the
// reason goes to the warnings.
template <class F>
Json guarded(Report& report, const std::string& what, F&& f) {
  try {
    return Json(f());
  } catch (const RiskError& e) {
    if (e.code() != ErrorCode::DegenerateDenominator && e.code() != ErrorCode::InsufficientData) throw;
    report.warnings.push_back(what + ": " + e.what());
    return Json(nullptr);
  }
}

void run_measure(const RunConfig& c, Report& report) {
  const auto panel = parse_panel_csv(single_input(c));
  const auto kind = measure_kind(c);
  Json positions = Json::array();
  for (std::size_t i = 0; i < panel.positions(); ++i) {
    positions.push_back(
        Json{{"position", panel.names()[i]}, {"value", evaluate(panel.position_distribution(i), kind)}});
  }
  const auto law = panel.portfolio_distribution();
  report.result = Json{{"measure", kind.name()},
                       {"periods", panel.periods()},
                       {"value", evaluate(law, kind)},
                       {"risk_adjusted_capital", risk_adjusted_capital(law, kind)},
                       {"positions", positions}};
}

AllocationResult allocate(const LossPanel& panel, const MeasureKind& kind) {
  if (kind.type() != MeasureKind::Type::ES && kind.type() != MeasureKind::Type::Expectile) {
    fail(ErrorCode::InvalidArgument, "allocation supports the es and expectile kinds only");
  }
  return contributions(panel, kind);
}

void run_allocate(const RunConfig& c, Report& report) {
  const auto panel = parse_panel_csv(single_input(c));
  const auto result = allocate(panel, measure_kind(c));
  if (result.non_unique) {
    report.warnings.push_back(
        "portfolio loss has an atom at the boundary; contributions are one element of the subgradient");
  }
  report.result = to_json(result, panel.names());
}

void run_diversify(const RunConfig& c, Report& report) {
  const auto panel = parse_panel_csv(single_input(c));
  const auto kind = measure_kind(c);
  Json result{{"measure", kind.name()},
              {"diversification_index",
               guarded(report, "diversification index", [&] { return diversification_index(panel, kind); })},
              {"diversification_benefit",
               guarded(report, "diversification benefit", [&] { return diversification_benefit(panel, kind); })}};
  const bool has_contributions =
      kind.type() == MeasureKind::Type::ES ||
      (kind.type() == MeasureKind::Type::Expectile && kind.level()->value() >= 0.5);
  if (has_contributions) {
    Json marginal = Json::array();
    for (std::size_t i = 0; i < panel.positions(); ++i) {
      marginal.push_back(Json{{"position", panel.names()[i]},
                              {"index", guarded(report, "marginal index of " + panel.names()[i],
                                                [&] { return marginal_diversification_index(panel, i, kind); })}});
    }
    result["marginal_diversification_index"] = marginal;
  }
  report.result = result;
}

void note_test(Report& report, const std::string& label, const TestResult& r) {
  if (r.degenerate) report.warnings.push_back(label + " is degenerate: no information in the data");
  if (r.normal_approximation) report.warnings.push_back(label + " uses the normal approximation");
}

void run_backtest_var(const RunConfig& c, Report& report) {
  const auto table = parse_forecasts_csv(single_input(c));
  std::vector<double> var;
  for (const auto& rec : table.records) {
    if (!rec.var_forecast) {
      fail(ErrorCode::InvalidArgument, "period " + std::to_string(rec.period) + " has no var_forecast");
    }
    var.push_back(*rec.var_forecast);
  }
  const auto bt = var_backtest(var, table.realized, Level::quantile(required_level(c)));
  note_test(report, "independence test", bt.independence);
  note_test(report, "coverage test", bt.coverage);
  auto result = to_json(bt);
  result["significance"] = c.significance;
  result["coverage_rejected"] = bt.coverage.rejects(c.significance);
  result["independence_rejected"] = bt.independence.rejects(c.significance);
  report.result = result;
}

void run_backtest_es(const RunConfig& c, Report& report) {
  const auto table = parse_forecasts_csv(single_input(c));
  const auto& records = table.records;
  const std::size_t points = records.empty() ? 0 : records.front().quantile_forecasts.size();
  std::vector<std::vector<double>> quantiles(points);
  std::vector<double> es;
  for (const auto& rec : records) {
    for (std::size_t k = 0; k < points; ++k) quantiles[k].push_back(rec.quantile_forecasts[k]);
    if (rec.es_forecast) es.push_back(*rec.es_forecast);
  }
  if (!es.empty() && es.size() != records.size()) {
    fail(ErrorCode::InvalidArgument, "es_forecast must be given on every row or on none");
  }
  const auto r = es_quantile_backtest(es, quantiles, table.realized, Level::quantile(required_level(c)),
                                      c.significance);
  for (std::size_t k = 0; k < r.quantiles.size(); ++k) {
    note_test(report, "independence test at level " + std::to_string(r.levels[k]), r.quantiles[k].independence);
  }
  report.warnings.push_back("tail_observations are listed for manual inspection only");
  report.result = to_json(r);
}

void run_backtest_pit(const RunConfig& c, Report& report) {
  const auto table = parse_forecasts_csv(single_input(c));
  const auto p = pit_series(table.records, table.realized, c.seed);
  Json uniformity = guarded(report, "uniformity test", [&] { return to_json(pit_uniformity_test(p, c.bins)); });
  Json independence =
      guarded(report, "independence test", [&] { return to_json(pit_independence_test(p, c.max_lag)); });
  if (independence.is_object() && independence["degenerate"].get<bool>()) {
    report.warnings.push_back("independence test is degenerate: every transformed series is constant");
  }
  const auto rejected = [&](const Json& t) {
    return t.is_null() ? Json(nullptr) : Json(t["p_value"].get<double>() < c.significance);
  };
  report.result = Json{{"pit", p.z},
                       {"randomized", p.randomized},
                       {"seed", p.rng_seed},
                       {"significance", c.significance},
                       {"uniformity", uniformity},
                       {"uniformity_rejected", rejected(uniformity)},
                       {"independence", independence},
                       {"independence_rejected", rejected(independence)}};
}

ScoringFunction scoring_function(const RunConfig& c) {
  if (c.score == "squared") return ScoringFunction::squared_error();
  if (c.score == "absolute") return ScoringFunction::absolute_error();
  if (c.score == "weighted-squared") return ScoringFunction::weighted_squared_error(required_level(c));
  if (c.score == "weighted-absolute") return ScoringFunction::weighted_absolute_error(required_level(c));
  if (c.score == "tail-mean") {
    if (!c.threshold) fail(ErrorCode::InvalidArgument, "tail-mean score needs --threshold");
    return ScoringFunction::tail_mean_score(*c.threshold);
  }
  if (c.score.empty()) fail(ErrorCode::InvalidArgument, "elicit needs --score");
  fail(ErrorCode::InvalidArgument, "unknown score '" + c.score + "'");
}

void run_elicit(const RunConfig& c, Report& report) {
  const auto panel = parse_panel_csv(single_input(c));
  const auto s = scoring_function(c);
  const auto sample = panel.portfolio();
  const double x = elicit(s, sample);
  Json result{{"score", s.name()},
              {"parameter", s.parameter()},
              {"sample_size", sample.size()},
              {"minimizer", x},
              {"mean_score", mean_score(s, x, sample)}};
  if (s.type() == ScoringFunction::Type::WeightedAbsoluteError) {
    const auto two = two_step_es_forecast(sample, Level::quantile(s.parameter()));
    result["two_step_es"] = Json{{"quantile", two.quantile}, {"expected_shortfall", two.expected_shortfall}};
  }
  report.result = result;
}

void run_counterexample(const RunConfig& c, Report& report) {
  if (!c.inputs.empty()) fail(ErrorCode::InvalidArgument, "counterexample takes no input files");
  try {
    if (c.kind == "expectile") {
      const auto ce = find_expectile_comonotone_counterexample(Level::expectile(required_level(c)));
      report.result = Json{{"found", true},
                           {"property", "comonotonic additivity"},
                           {"factor", to_json(ce.pair.factor)},
                           {"f1", ce.pair.f1},
                           {"f2", ce.pair.f2},
                           {"expectile_first", ce.expectile_first},
                           {"expectile_second", ce.expectile_second},
                           {"expectile_sum", ce.expectile_sum},
                           {"gap", ce.gap},
                           {"searched", ce.searched}};
    } else if (c.kind == "var") {
      const auto ex = find_var_superadditivity_example(Level::quantile(required_level(c)));
      Json cells = Json::array();
      for (std::size_t t = 0; t < ex.law.periods(); ++t) {
        cells.push_back(Json{{"l1", ex.law.rows()[t][0]}, {"l2", ex.law.rows()[t][1]},
                             {"probability", ex.law.row_weight(t)}});
      }
      report.result = Json{{"found", true},
                           {"property", "subadditivity"},
                           {"joint_law", cells},
                           {"var_first", ex.var_first},
                           {"var_second", ex.var_second},
                           {"var_sum", ex.var_sum},
                           {"searched", ex.searched}};
    } else {
      fail(ErrorCode::InvalidArgument, "counterexample supports --kind expectile or var");
    }
  } catch (const RiskError& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    report.warnings.push_back(e.what());
    report.result = Json{{"found", false}};
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return std::string(name);
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& entry : kCommands) out.emplace_back(entry.second);
  return out;
}

void RunConfig::validate() const {
  if (level && !(*level > 0.0 && *level < 1.0)) fail(ErrorCode::InvalidArgument, "level must lie in (0,1)");
  if (!(significance > 0.0 && significance <= 0.5)) {
    fail(ErrorCode::InvalidArgument, "significance must lie in (0, 0.5]");
  }
  if (bins < 2) fail(ErrorCode::InvalidArgument, "bins must be at least 2");
  if (max_lag < 1) fail(ErrorCode::InvalidArgument, "max-lag must be at least 1");
}

Json RunConfig::echo() const {
  return Json{{"command", to_string(command)},
              {"inputs", inputs},
              {"kind", kind.empty() ? Json(nullptr) : Json(kind)},
              {"level", level ? Json(*level) : Json(nullptr)},
              {"significance", significance},
              {"bins", bins},
              {"seed", seed},
              {"max_lag", max_lag},
              {"score", score.empty() ? Json(nullptr) : Json(score)},
              {"threshold", threshold ? Json(*threshold) : Json(nullptr)}};
}

std::uint64_t default_seed() {
  const char* env = std::getenv("RISKKIT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view s(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::InvalidArgument, "RISKKIT_SEED must be an unsigned 64-bit integer");
  }
  return seed;
}

Report run(const RunConfig& config) {
  config.validate();
  Report report;
  report.command = to_string(config.command);
  report.config = config.echo();
  switch (config.command) {
    case Command::Measure: run_measure(config, report); break;
    case Command::Allocate: run_allocate(config, report); break;
    case Command::Diversify: run_diversify(config, report); break;
    case Command::BacktestVar: run_backtest_var(config, report); break;
    case Command::BacktestEs: run_backtest_es(config, report); break;
    case Command::BacktestPit: run_backtest_pit(config, report); break;
    case Command::Elicit: run_elicit(config, report); break;
    case Command::Counterexample: run_counterexample(config, report); break;
  }
  return report;
}

Report error_report(const RunConfig& config, const RiskError& error) {
  Report report;
  report.command = to_string(config.command);
  report.config = config.echo();
  Json e{{"code", std::string(to_string(error.code()))}, {"message", error.what()}};
  if (const auto* parse = dynamic_cast<const CsvParseError*>(&error)) {
    e["file"] = parse->path();
    e["row"] = parse->row();
    e["column"] = parse->column();
  }
  report.result = Json{{"error", e}};
  return report;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  int code = 0;
  try {
    report = run(config);
  } catch (const RiskError& e) {
    err << "riskkit: " << to_string(e.code()) << ": " << e.what() << "\n";
    report = error_report(config, e);
    code = 2;
  }
  const auto text = report.dump();
  if (config.output.empty()) {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file || !(file << text)) {
      err << "riskkit: cannot write report to " << config.output << "\n";
      return 2;
    }
  }
  return code;
}

}  // namespace riskkit::cli
