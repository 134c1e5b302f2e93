#include "riskkit/cli/report.hpp"

#include <iomanip>
#include <sstream>

namespace riskkit::cli {

namespace {

std::string level_key(double level) {
  std::ostringstream s;
  s << std::setprecision(2) << std::fixed << level;
  return s.str();
}

}  // namespace

Json to_json(const TestResult& r) {
  Json reject = Json::object();
  for (const auto& [level, decision] : r.reject_at) reject[level_key(level)] = decision;
  return Json{{"method", r.method},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"reject_at", reject},
              {"degenerate", r.degenerate},
              {"normal_approximation", r.normal_approximation}};
}

Json to_json(const CoverageBacktest& b) {
  const auto periods = b.violations.indicators.size();
  return Json{{"level", b.violations.alpha.value()},
              {"periods", periods},
              {"violations", b.violations.count},
              {"expected_violations", static_cast<double>(periods) * (1.0 - b.violations.alpha.value())},
              {"coverage", to_json(b.coverage)},
              {"independence", to_json(b.independence)}};
}

Json to_json(const AllocationResult& a, const std::vector<std::string>& names) {
  Json contributions = Json::array();
  for (std::size_t i = 0; i < a.contributions.size(); ++i) {
    contributions.push_back(Json{{"position", names.at(i)}, {"contribution", a.contributions[i]}});
  }
  return Json{{"measure", a.measure.name()},
              {"total", a.total},
              {"contributions", contributions},
              {"residual", a.residual},
              {"non_unique", a.non_unique}};
}

Json to_json(const EsBacktestReport& r) {
  Json quantiles = Json::array();
  for (const auto& q : r.quantiles) quantiles.push_back(to_json(q));
  Json tail = Json::array();
  for (const auto& t : r.tail_observations) tail.push_back(Json{{"index", t.index}, {"realized", t.realization}});
  return Json{{"level", r.alpha.value()},
              {"significance", r.significance},
              {"per_quantile_significance", r.per_quantile_significance},
              {"supporting_levels", r.levels},
              {"quantiles", quantiles},
              {"mean_gap_to_es", r.mean_gap_to_es ? Json(*r.mean_gap_to_es) : Json(nullptr)},
              {"tail_observations", tail},
              {"pass", r.pass}};
}

Json to_json(const DiscreteDistribution& d) {
  Json atoms = Json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    atoms.push_back(Json{{"value", d.atoms()[k]}, {"probability", d.weights()[k]}});
  }
  return atoms;
}

Json Report::to_json() const {
  return Json{{"version", kVersion},
              {"command", command},
              {"config", config},
              {"result", result},
              {"warnings", warnings}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace riskkit::cli
