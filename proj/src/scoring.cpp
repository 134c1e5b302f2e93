#include "riskkit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace riskkit {

namespace {

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " must lie in (0,1)");
  }
}

double phi(double x) { return x * x / (1.0 + std::abs(x)); }

double phi_prime(double x) {
  const double a = 1.0 + std::abs(x);
  return x * (2.0 + std::abs(x)) / (a * a);
}

double phi_second(double x) {
  const double a = 1.0 + std::abs(x);
  return 2.0 / (a * a * a);
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// d/dx s(x, y) for the smooth families.
double score_derivative(const ScoringFunction& s, double x, double y) {
  switch (s.type()) {
    case ScoringFunction::Type::SquaredError:
      return 2.0 * (x - y);
    case ScoringFunction::Type::WeightedSquaredError: {
      const double tau = s.parameter();
      return 2.0 * (x >= y ? 1.0 - tau : tau) * (x - y);
    }
    case ScoringFunction::Type::TailMeanScore:
      return y >= s.parameter() ? -phi_second(x) * (y - x) : 0.0;
    default:
      break;
  }
  fail(ErrorCode::InvalidArgument, "score has no derivative");
}

double elicit_smooth(const ScoringFunction& s, std::span<const double> sample) {
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  for (double y : sample) {
    if (s.type() == ScoringFunction::Type::TailMeanScore && y < s.parameter()) continue;
    left = std::min(left, y);
    right = std::max(right, y);
  }
  if (left > right) fail(ErrorCode::EmptyTail, "no observation at or above the tail threshold");

  const auto slope = [&](double x) {
    CompensatedSum sum;
    for (double y : sample) sum.add(score_derivative(s, x, y));
    return sum.value();
  };
  // The mean score decreases then increases; its minimiser is the sign change.
  if (slope(left) >= 0.0) return left;
  if (slope(right) <= 0.0) return right;
  for (int it = 0; it < 2000; ++it) {
    const double mid = left + 0.5 * (right - left);
    if (mid <= left || mid >= right) break;
    if (slope(mid) < 0.0) {
      left = mid;
    } else {
      right = mid;
    }
  }
  return std::abs(slope(left)) < std::abs(slope(right)) ? left : right;
}

double elicit_piecewise_linear(const ScoringFunction& s, std::span<const double> sample) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double alpha = s.type() == ScoringFunction::Type::AbsoluteError ? 0.5 : s.parameter();
  const double factor = s.type() == ScoringFunction::Type::AbsoluteError ? 2.0 : 1.0;

  // Scores are translation invariant; centring keeps the prefix-sum
  // evaluation free of cancellation against the location.
  const double centre = sorted[n / 2];
  std::vector<double> prefix(n + 1, 0.0);
  {
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
      acc.add(sorted[k] - centre);
      prefix[k + 1] = acc.value();
    }
  }
  const auto mean_pinball = [&](double x) {
    const auto below = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
    const double xc = x - centre;
    const double lower = xc * static_cast<double>(below) - prefix[below];
    const double upper = (prefix[n] - prefix[below]) - xc * static_cast<double>(n - below);
    return factor * ((1.0 - alpha) * lower + alpha * upper) / static_cast<double>(n);
  };

  std::vector<double> candidates;
  candidates.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && sorted[k] == sorted[k - 1]) continue;
    if (k > 0) candidates.push_back(sorted[k - 1] + 0.5 * (sorted[k] - sorted[k - 1]));
    candidates.push_back(sorted[k]);
  }
  std::vector<double> scores;
  scores.reserve(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    scores.push_back(mean_pinball(c));
    best = std::min(best, scores.back());
  }
  const double tie = 1e-12 * std::abs(best);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (scores[k] <= best + tie) return candidates[k];
  }
  return candidates.back();
}

}  // namespace

ScoringFunction ScoringFunction::weighted_squared_error(double tau) {
  require_open_unit(tau, "tau");
  return {Type::WeightedSquaredError, tau};
}

ScoringFunction ScoringFunction::weighted_absolute_error(double alpha) {
  require_open_unit(alpha, "alpha");
  return {Type::WeightedAbsoluteError, alpha};
}

ScoringFunction ScoringFunction::tail_mean_score(double threshold) {
  if (!std::isfinite(threshold)) fail(ErrorCode::InvalidArgument, "tail threshold must be finite");
  return {Type::TailMeanScore, threshold};
}

std::string ScoringFunction::name() const {
  switch (type_) {
    case Type::SquaredError: return "squared";
    case Type::WeightedSquaredError: return "weighted-squared";
    case Type::AbsoluteError: return "absolute";
    case Type::WeightedAbsoluteError: return "weighted-absolute";
    case Type::TailMeanScore: return "tail-mean";
  }
  return "unknown";
}

double score(const ScoringFunction& s, double x, double y) {
  const double d = x - y;
  switch (s.type()) {
    case ScoringFunction::Type::SquaredError:
      return d * d;
    case ScoringFunction::Type::WeightedSquaredError:
      return ((x >= y ? 1.0 : 0.0) - s.parameter()) * d * d * sign(d);
    case ScoringFunction::Type::AbsoluteError:
      return std::abs(d);
    case ScoringFunction::Type::WeightedAbsoluteError:
      return ((x >= y ? 1.0 : 0.0) - s.parameter()) * d;
    case ScoringFunction::Type::TailMeanScore:
      if (y < s.parameter()) return 0.0;
      // Bregman divergence of a strictly convex phi; clamp rounding below zero.
      return std::max(0.0, phi(y) - phi(x) - phi_prime(x) * (y - x));
  }
  fail(ErrorCode::InvalidArgument, "unknown scoring function");
}

double mean_score(const ScoringFunction& s, double forecast, std::span<const double> sample) {
  if (sample.empty()) fail(ErrorCode::EmptySample, "sample is empty");
  CompensatedSum sum;
  for (double y : sample) sum.add(score(s, forecast, y));
  return sum.value() / static_cast<double>(sample.size());
}

double elicit(const ScoringFunction& s, std::span<const double> sample) {
  if (sample.empty()) fail(ErrorCode::EmptySample, "sample is empty");
  for (double y : sample) {
    if (!std::isfinite(y)) fail(ErrorCode::InvalidArgument, "non-finite observation");
  }
  return s.piecewise_linear() ? elicit_piecewise_linear(s, sample) : elicit_smooth(s, sample);
}

TwoStepEsForecast two_step_es_forecast(std::span<const double> sample, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  const double q = elicit(ScoringFunction::weighted_absolute_error(alpha.value()), sample);
  CompensatedSum tail;
  std::size_t count = 0;
  for (double y : sample) {
    if (y >= q) {
      tail.add(y);
      ++count;
    }
  }
  if (count == 0) fail(ErrorCode::EmptyTail, "no sample point at or above the elicited quantile");
  return {q, tail.value() / static_cast<double>(count)};
}

std::string to_string(ForecastWinner w) {
  switch (w) {
    case ForecastWinner::A: return "a";
    case ForecastWinner::B: return "b";
    case ForecastWinner::Neither: return "neither";
  }
  return "neither";
}

ForecastComparison compare_forecasts(const ScoringFunction& s, std::span<const double> forecasts_a,
                                     std::span<const double> forecasts_b,
                                     std::span<const double> realizations) {
  const std::size_t n = realizations.size();
  if (n == 0 || forecasts_a.size() != n || forecasts_b.size() != n) {
    fail(ErrorCode::ShapeMismatch, "forecast and realisation series must share one nonzero length");
  }
  CompensatedSum a;
  CompensatedSum b;
  for (std::size_t t = 0; t < n; ++t) {
    a.add(score(s, forecasts_a[t], realizations[t]));
    b.add(score(s, forecasts_b[t], realizations[t]));
  }
  ForecastComparison out{a.value() / static_cast<double>(n), b.value() / static_cast<double>(n),
                         ForecastWinner::Neither};
  if (out.mean_score_a < out.mean_score_b) {
    out.winner = ForecastWinner::A;
  } else if (out.mean_score_b < out.mean_score_a) {
    out.winner = ForecastWinner::B;
  }
  return out;
}

void ForecastRecord::validate() const {
  if (!var_forecast && !es_forecast && !scenario_set && quantile_forecasts.empty()) {
    fail(ErrorCode::InvalidArgument, "forecast record " + std::to_string(period) + " carries no forecast");
  }
  if (scenario_set && scenario_set->empty()) {
    fail(ErrorCode::EmptyScenarioSet, "forecast record " + std::to_string(period) + " has an empty scenario set");
  }
}

}  // namespace riskkit
