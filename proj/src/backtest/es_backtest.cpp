#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskkit/backtest.hpp"

namespace riskkit {

namespace {

void require_points(std::size_t points) {
  if (points < 2 || points > 16) {
    fail(ErrorCode::InvalidArgument, "number of supporting quantiles must be between 2 and 16");
  }
}

}  // namespace

std::vector<double> supporting_quantile_levels(Level alpha, std::size_t points) {
  alpha.require(LevelKind::QuantileAlpha);
  require_points(points);
  const double a = alpha.value();
  const auto n = static_cast<double>(points);
  std::vector<double> levels;
  levels.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const auto kk = static_cast<double>(k);
    levels.push_back(((n - kk) / n) * a + kk / n);
  }
  return levels;
}

double es_quantile_approximation(const DiscreteDistribution& d, Level alpha, std::size_t points) {
  CompensatedSum sum;
  for (double u : supporting_quantile_levels(alpha, points)) sum.add(quantile(d, u));
  return sum.value() / static_cast<double>(points);
}

EsBacktestReport es_quantile_backtest(std::span<const double> es_forecasts,
                                      const std::vector<std::vector<double>>& quantile_forecasts,
                                      std::span<const double> realizations, Level alpha,
                                      double significance) {
  alpha.require(LevelKind::QuantileAlpha);
  if (!(significance > 0.0 && significance <= 0.5)) {
    fail(ErrorCode::InvalidArgument, "significance must lie in (0, 0.5]");
  }
  const std::size_t points = quantile_forecasts.size();
  require_points(points);
  const std::size_t periods = realizations.size();
  if (periods == 0) fail(ErrorCode::ShapeMismatch, "no realisations");
  for (const auto& series : quantile_forecasts) {
    if (series.size() != periods) fail(ErrorCode::ShapeMismatch, "quantile forecast series length mismatch");
  }
  if (!es_forecasts.empty() && es_forecasts.size() != periods) {
    fail(ErrorCode::ShapeMismatch, "ES forecast series length mismatch");
  }

  EsBacktestReport report{alpha, significance, significance / static_cast<double>(points),
                          supporting_quantile_levels(alpha, points), {}, {}, std::nullopt, {}, true};
  for (std::size_t k = 0; k < points; ++k) {
    report.quantiles.push_back(
        var_backtest(quantile_forecasts[k], realizations, Level::quantile(report.levels[k])));
    report.pass = report.pass && !report.quantiles.back().coverage.rejects(report.per_quantile_significance);
  }

  report.approximation.resize(periods);
  for (std::size_t t = 0; t < periods; ++t) {
    CompensatedSum sum;
    for (const auto& series : quantile_forecasts) sum.add(series[t]);
    report.approximation[t] = sum.value() / static_cast<double>(points);
  }
  if (!es_forecasts.empty()) {
    CompensatedSum gap;
    for (std::size_t t = 0; t < periods; ++t) gap.add(report.approximation[t] - es_forecasts[t]);
    report.mean_gap_to_es = gap.value() / static_cast<double>(periods);
  }

  const auto inspect = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(0.0025 * static_cast<double>(periods))));
  std::vector<std::size_t> order(periods);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return realizations[a] > realizations[b]; });
  for (std::size_t k = 0; k < inspect; ++k) {
    report.tail_observations.push_back({order[k], realizations[order[k]]});
  }
  return report;
}

}  // namespace riskkit
