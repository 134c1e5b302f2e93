#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskkit/cli/report.hpp"

namespace riskkit::cli {

enum class Command { Measure, Allocate, Diversify, BacktestVar, BacktestEs, BacktestPit, Elicit, Counterexample };

std::string to_string(Command c);
std::optional<Command> parse_command(std::string_view name);
/// All command names in the order they are documented.
std::vector<std::string> command_names();

struct RunConfig {
  Command command = Command::Measure;
  std::vector<std::string> inputs;
  /// variance, mean, var, es or expectile.
  std::string kind;
  std::optional<double> level;
  double significance = 0.05;
  std::size_t bins = 10;
  std::uint64_t seed = 0;
  std::size_t max_lag = 5;
  /// Scoring family for `elicit`: squared, absolute, weighted-squared,
  /// weighted-absolute or tail-mean.
  std::string score;
  /// Tail threshold c of the tail-mean score.
  std::optional<double> threshold;
  /// Report destination; empty means standard output.
  std::string output;

  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
  Json echo() const;
};

/// Seed taken from RISKKIT_SEED when set, otherwise 0. Throws
/// InvalidArgument if the variable is not an unsigned integer.
std::uint64_t default_seed();

/// Runs one command. Input problems surface as RiskError; statistical
/// rejections are reported in the result, never thrown.
Report run(const RunConfig& config);

/// Report carrying the error code, message and, for parse errors, the file
/// location.
Report error_report(const RunConfig& config, const RiskError& error);

/// Runs the command and writes the report to config.output (or `out`).
/// Returns 0 on a completed run and 2 on input errors.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace riskkit::cli
