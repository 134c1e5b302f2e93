#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskkit/core.hpp"

namespace riskkit {

/// Scoring functions s(x, y) >= 0 of a point forecast x and an observation y.
class ScoringFunction {
 public:
  enum class Type {
    SquaredError,
    WeightedSquaredError,   // (1{x>=y} - tau)(x-y)^2 sgn(x-y); elicits the tau-expectile
    AbsoluteError,
    WeightedAbsoluteError,  // (1{x>=y} - alpha)(x-y); elicits the alpha-quantile
    TailMeanScore,          // Bregman score of phi(x) = x^2/(1+|x|) on the tail y >= c
  };

  static ScoringFunction squared_error() { return {Type::SquaredError, 0.0}; }
  static ScoringFunction absolute_error() { return {Type::AbsoluteError, 0.0}; }
  static ScoringFunction weighted_squared_error(double tau);
  static ScoringFunction weighted_absolute_error(double alpha);
  static ScoringFunction tail_mean_score(double threshold);

  Type type() const noexcept { return type_; }
  /// tau, alpha or the threshold c depending on the type; 0 otherwise.
  double parameter() const noexcept { return parameter_; }
  std::string name() const;

  /// True for the piecewise-linear families (absolute and weighted absolute).
  bool piecewise_linear() const noexcept {
    return type_ == Type::AbsoluteError || type_ == Type::WeightedAbsoluteError;
  }

 private:
  ScoringFunction(Type type, double parameter) : type_(type), parameter_(parameter) {}

  Type type_;
  double parameter_;
};

double score(const ScoringFunction& s, double forecast, double realization);

/// Mean score of a constant forecast x over the sample.
double mean_score(const ScoringFunction& s, double forecast, std::span<const double> sample);

/// Empirical minimiser of the mean score; the smallest minimiser on ties.
///
/// Piecewise-linear scores are minimised over the sample points and the
/// midpoints of consecutive sample points, which contain both endpoints of
/// every minimiser interval. The smooth families have a unique minimiser and
/// are minimised by bisection on the sign of the mean score derivative.
double elicit(const ScoringFunction& s, std::span<const double> sample);

struct TwoStepEsForecast {
  double quantile;
  double expected_shortfall;
};

/// Quantile elicited with the weighted absolute error, then the plain mean of
/// the sample points at or above it. On discrete samples this omits the ES
/// correction for an atom at the quantile.
TwoStepEsForecast two_step_es_forecast(std::span<const double> sample, Level alpha);

enum class ForecastWinner { A, B, Neither };

std::string to_string(ForecastWinner w);

struct ForecastComparison {
  double mean_score_a;
  double mean_score_b;
  ForecastWinner winner;
};

/// Winner has the strictly smaller mean score. Throws ShapeMismatch unless
/// all three series share one nonzero length.
ForecastComparison compare_forecasts(const ScoringFunction& s, std::span<const double> forecasts_a,
                                     std::span<const double> forecasts_b,
                                     std::span<const double> realizations);

/// One period of forecasts aligned with a realised loss. At least one of the
/// forecast fields is present.
struct ForecastRecord {
  long period = 0;
  std::optional<double> var_forecast;
  std::optional<double> es_forecast;
  /// Supporting quantile forecasts for the ES backtest, lowest level first.
  std::vector<double> quantile_forecasts;
  /// Distribution forecast as a scenario set.
  std::optional<std::vector<double>> scenario_set;

  void validate() const;
};

}  // namespace riskkit
