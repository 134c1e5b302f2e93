#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskkit/cli/run.hpp"

int main(int argc, char** argv) {
  using namespace riskkit::cli;

  CLI::App app{"Risk measures, allocation and backtests on loss data"};
  app.set_version_flag("--version", std::string("riskkit ") + kVersion);

  std::string command;
  RunConfig config;
  std::optional<std::uint64_t> seed;
  std::optional<double> level;
  std::optional<double> threshold;

  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("inputs", config.inputs, "Input files (panel or forecast CSV)");
  app.add_option("--kind", config.kind, "Measure kind: variance, mean, var, es, expectile");
  app.add_option("--level", level, "Quantile level alpha or expectile level tau in (0,1)");
  app.add_option("--significance", config.significance, "Test significance in (0, 0.5]")->capture_default_str();
  app.add_option("--bins", config.bins, "Bins for the PIT uniformity test")->capture_default_str();
  app.add_option("--max-lag", config.max_lag, "Lags for the PIT independence test")->capture_default_str();
  app.add_option("--seed", seed, "Random seed (default: $RISKKIT_SEED or 0)");
  app.add_option("--score", config.score,
                 "Scoring family for elicit: squared, absolute, weighted-squared, weighted-absolute, tail-mean");
  app.add_option("--threshold", threshold, "Tail threshold of the tail-mean score");
  app.add_option("-o,--output", config.output, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.command = *parse_command(command);
  config.level = level;
  config.threshold = threshold;
  try {
    config.seed = seed ? *seed : default_seed();
  } catch (const riskkit::RiskError& e) {
    std::cerr << "riskkit: " << e.what() << "\n";
    return 2;
  }
  return execute(config, std::cout, std::cerr);
}
