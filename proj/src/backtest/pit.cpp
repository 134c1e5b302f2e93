#include <algorithm>
#include <cmath>

#include "riskkit/backtest.hpp"
#include "riskkit/stats.hpp"

namespace riskkit {

namespace {

const std::vector<double>& scenarios_of(const ForecastRecord& forecast) {
  if (!forecast.scenario_set || forecast.scenario_set->empty()) {
    fail(ErrorCode::EmptyScenarioSet, "forecast for period " + std::to_string(forecast.period) +
                                          " has no scenario set");
  }
  return *forecast.scenario_set;
}

void require_unit_interval(const PitSeries& p) {
  for (double z : p.z) {
    if (!(z >= 0.0 && z <= 1.0)) fail(ErrorCode::InvalidArgument, "PIT values must lie in [0,1]");
  }
}

// Shifted Legendre polynomial of the given degree on [0,1].
double shifted_legendre(int degree, double z) {
  const double x = 2.0 * z - 1.0;
  double previous = 1.0;
  double current = x;
  if (degree == 0) return previous;
  for (int n = 1; n < degree; ++n) {
    const double next = ((2.0 * n + 1.0) * x * current - n * previous) / (n + 1.0);
    previous = current;
    current = next;
  }
  return current;
}

// Ljung-Box statistic over lags 1..max_lag; nullopt when the series is constant.
std::optional<double> ljung_box(std::vector<double> x, std::size_t max_lag) {
  const auto n = static_cast<double>(x.size());
  const double centre = compensated_sum(x) / n;
  for (double& v : x) v -= centre;
  CompensatedSum denom;
  for (double v : x) denom.add(v * v);
  if (!(denom.value() > 0.0)) return std::nullopt;
  CompensatedSum q;
  for (std::size_t h = 1; h <= max_lag; ++h) {
    CompensatedSum num;
    for (std::size_t t = h; t < x.size(); ++t) num.add(x[t] * x[t - h]);
    const double r = num.value() / denom.value();
    q.add(r * r / (n - static_cast<double>(h)));
  }
  return n * (n + 2.0) * q.value();
}

}  // namespace

double pit_value(const DiscreteDistribution& forecast, double realization, double v) {
  const double below = cdf_left(forecast, realization);
  const double at_or_below = cdf(forecast, realization);
  return std::clamp(below + v * (at_or_below - below), 0.0, 1.0);
}

double pit_transform(const ForecastRecord& forecast, double realization, std::uint64_t rng_seed) {
  const auto dist = DiscreteDistribution::from_sample(scenarios_of(forecast));
  Rng rng(rng_seed);
  return pit_value(dist, realization, uniform01(rng));
}

PitSeries pit_series(std::span<const ForecastRecord> forecasts, std::span<const double> realizations,
                     std::uint64_t rng_seed) {
  if (forecasts.size() != realizations.size()) {
    fail(ErrorCode::ShapeMismatch, "forecasts and realisations differ in length");
  }
  PitSeries out{{}, true, rng_seed};
  out.z.reserve(forecasts.size());
  Rng rng(rng_seed);
  for (std::size_t t = 0; t < forecasts.size(); ++t) {
    const auto dist = DiscreteDistribution::from_sample(scenarios_of(forecasts[t]));
    // One draw per period whether or not the realisation hits an atom, so the
    // stream stays aligned with the period index.
    out.z.push_back(pit_value(dist, realizations[t], uniform01(rng)));
  }
  return out;
}

TestResult pit_uniformity_test(const PitSeries& p, std::size_t bins) {
  if (bins < 2) fail(ErrorCode::InvalidArgument, "at least two bins required");
  if (p.z.size() < 5 * bins) {
    fail(ErrorCode::InsufficientData, "uniformity test needs at least 5 observations per bin");
  }
  require_unit_interval(p);
  std::vector<double> observed(bins, 0.0);
  for (double z : p.z) {
    const auto k = std::min(bins - 1, static_cast<std::size_t>(z * static_cast<double>(bins)));
    observed[k] += 1.0;
  }
  const double expected = static_cast<double>(p.z.size()) / static_cast<double>(bins);
  CompensatedSum chi2;
  for (double o : observed) chi2.add((o - expected) * (o - expected) / expected);
  return make_test_result("pearson chi-square uniformity", chi2.value(),
                          stats::chi_square_sf(chi2.value(), static_cast<double>(bins - 1)));
}

TestResult pit_independence_test(const PitSeries& p, std::size_t max_lag, const std::vector<int>& powers) {
  if (max_lag < 1) fail(ErrorCode::InvalidArgument, "max_lag must be at least 1");
  if (powers.empty()) fail(ErrorCode::InvalidArgument, "at least one power required");
  for (int k : powers) {
    if (k < 1) fail(ErrorCode::InvalidArgument, "powers must be positive integers");
  }
  if (p.z.size() <= 2 * max_lag) {
    fail(ErrorCode::InsufficientData, "independence test needs more than 2 * max_lag observations");
  }
  require_unit_interval(p);

  double best_p = 1.0;
  double best_statistic = 0.0;
  bool any = false;
  for (int k : powers) {
    std::vector<double> x;
    x.reserve(p.z.size());
    for (double z : p.z) x.push_back(shifted_legendre(k, z));
    const auto q = ljung_box(std::move(x), max_lag);
    if (!q) continue;
    const double pk = stats::chi_square_sf(*q, static_cast<double>(max_lag));
    if (!any || pk < best_p) {
      best_p = pk;
      best_statistic = *q;
    }
    any = true;
  }
  auto r = make_test_result("ljung-box portmanteau, bonferroni over powers", best_statistic,
                            std::min(1.0, static_cast<double>(powers.size()) * best_p));
  r.degenerate = !any;
  return r;
}

}  // namespace riskkit
