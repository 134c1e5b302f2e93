#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "riskkit/backtest.hpp"

namespace riskkit::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

Json to_json(const TestResult& r);
Json to_json(const CoverageBacktest& b);
Json to_json(const AllocationResult& a, const std::vector<std::string>& names);
Json to_json(const EsBacktestReport& r);
Json to_json(const DiscreteDistribution& d);

/// Report skeleton. Object keys serialise in sorted order, so equal inputs
/// always give byte-identical text.
struct Report {
  Json config = Json::object();
  Json result = Json::object();
  std::vector<std::string> warnings;
  std::string command;

  Json to_json() const;
  /// Two-space indented JSON followed by a newline.
  std::string dump() const;
};

}  // namespace riskkit::cli
