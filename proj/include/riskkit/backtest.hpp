#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskkit/allocation.hpp"
#include "riskkit/core.hpp"
#include "riskkit/measures.hpp"
#include "riskkit/random.hpp"
#include "riskkit/scoring.hpp"

namespace riskkit {

// ---------------------------------------------------------------------------
// Test results
// ---------------------------------------------------------------------------

struct TestResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  /// Reject decision at the standard levels 0.01, 0.05 and 0.10.
  std::map<double, bool> reject_at;
  /// No information to test with (no violations, all violations, constant input).
  bool degenerate = false;
  /// p-value from the normal approximation instead of the exact law.
  bool normal_approximation = false;

  bool rejects(double significance) const noexcept { return p_value < significance; }
};

/// Builds a result whose reject_at map is consistent with the p-value.
TestResult make_test_result(std::string method, double statistic, double p_value);

// ---------------------------------------------------------------------------
// VaR violation process
// ---------------------------------------------------------------------------

struct ViolationSeries {
  std::vector<std::uint8_t> indicators;
  Level alpha;
  std::size_t count = 0;
};

/// Indicator 1 iff the realised loss strictly exceeds the VaR forecast.
ViolationSeries violation_process(std::span<const double> var_forecasts,
                                  std::span<const double> realizations, Level alpha);

/// Two-sided exact binomial test of count ~ Binomial(T, 1 - alpha) with
/// p = min(1, 2 min(P[X <= count], P[X >= count])). Beyond 10^6 periods the
/// normal approximation is used and flagged.
TestResult unconditional_coverage_test(const ViolationSeries& v);

/// First-order Markov likelihood-ratio test of independence of the
/// indicators against chi-square(1). No violations or no non-violations give
/// a degenerate result with p-value 1.
TestResult independence_test(const ViolationSeries& v);

struct CoverageBacktest {
  ViolationSeries violations;
  TestResult coverage;
  TestResult independence;
};

CoverageBacktest var_backtest(std::span<const double> var_forecasts, std::span<const double> realizations,
                              Level alpha);

// ---------------------------------------------------------------------------
// ES backtest through supporting quantiles
// ---------------------------------------------------------------------------

/// Levels alpha + (1 - alpha) k / n for k = 0..n-1; n = 4 gives alpha,
/// 0.75 alpha + 0.25, 0.5 alpha + 0.5 and 0.25 alpha + 0.75.
std::vector<double> supporting_quantile_levels(Level alpha, std::size_t points = 4);

/// Mean of the quantiles at the supporting levels, a left-endpoint Riemann
/// sum of the integrated quantile function; never above the exact ES.
double es_quantile_approximation(const DiscreteDistribution& d, Level alpha, std::size_t points = 4);

struct TailObservation {
  std::size_t index;
  double realization;
};

struct EsBacktestReport {
  Level alpha;
  double significance;
  /// significance / number of supporting quantiles.
  double per_quantile_significance;
  std::vector<double> levels;
  std::vector<CoverageBacktest> quantiles;
  /// Per-period mean of the supporting quantile forecasts.
  std::vector<double> approximation;
  /// Mean of (approximation - es_forecast) over periods with an ES forecast.
  std::optional<double> mean_gap_to_es;
  /// Largest realisations, the upper 0.25% of the sample and at least one,
  /// listed for manual inspection. No automated judgement is made on them.
  std::vector<TailObservation> tail_observations;
  /// All coverage tests pass at the per-quantile level.
  bool pass = false;
};

/// Backtests the supporting quantile forecasts (quantile_forecasts[k] is the
/// series at level k) with coverage and independence tests. The verdict is
/// the joint coverage decision with a Bonferroni split of the significance.
/// es_forecasts may be empty. Supports 2 to 16 supporting points.
EsBacktestReport es_quantile_backtest(std::span<const double> es_forecasts,
                                      const std::vector<std::vector<double>>& quantile_forecasts,
                                      std::span<const double> realizations, Level alpha,
                                      double significance = 0.05);

// ---------------------------------------------------------------------------
// Distribution forecasts (PIT)
// ---------------------------------------------------------------------------

struct PitSeries {
  std::vector<double> z;
  bool randomized = true;
  std::uint64_t rng_seed = 0;
};

/// Randomised PIT F(x-) + v (F(x) - F(x-)) for a fixed v in [0,1].
double pit_value(const DiscreteDistribution& forecast, double realization, double v);

/// Randomised PIT of one realisation against the record's scenario set, with
/// v drawn from a generator seeded by rng_seed.
double pit_transform(const ForecastRecord& forecast, double realization, std::uint64_t rng_seed);

/// PIT series over aligned records; one generator stream seeded by rng_seed
/// supplies v for every period in order.
PitSeries pit_series(std::span<const ForecastRecord> forecasts, std::span<const double> realizations,
                     std::uint64_t rng_seed);

/// Pearson chi-square against equal-probability bins, bins - 1 degrees of
/// freedom. Needs at least 5 observations per bin.
TestResult pit_uniformity_test(const PitSeries& p, std::size_t bins = 10);

/// Ljung-Box portmanteau statistics on the correlogram of each transformed
/// series, one per power k, combined by Bonferroni. Power k uses the shifted
/// Legendre polynomial of degree k in z, which spans z, ..., z^k and is
/// orthogonal to the lower degrees under the uniform null, so the per-power
/// statistics are asymptotically independent.
TestResult pit_independence_test(const PitSeries& p, std::size_t max_lag = 5,
                                 const std::vector<int>& powers = {1, 2, 3});

// ---------------------------------------------------------------------------
// Counterexample searches
// ---------------------------------------------------------------------------

/// Joint laws of (L1, L2) on values1 x values2 with cell weights k/denominator.
struct JointGrid {
  std::vector<double> values1;
  std::vector<double> values2;
  int denominator = 8;
};

/// Calls visit(panel) for every joint law on the grid, cells with zero weight
/// omitted, in lexicographic order of the weight table. Returns the number of
/// laws visited. Stops early when visit returns false.
std::size_t enumerate_joint_laws(const JointGrid& grid,
                                 const std::function<bool(const LossPanel&)>& visit);

/// Search space of comonotone pairs: a factor on `factor_size` atoms with
/// weights k/denominator (all positive) and nondecreasing maps with values in
/// map_values.
struct ComonotoneGrid {
  std::size_t factor_size = 3;
  int denominator = 8;
  std::vector<double> map_values = {0.0, 1.0, 2.0};
};

struct ComonotoneCounterexample {
  ComonotonePair pair;
  double expectile_first;
  double expectile_second;
  double expectile_sum;
  /// e(L1 + L2) - e(L1) - e(L2).
  double gap;
  std::size_t searched;
};

/// First comonotone pair on the grid with |e(L1+L2) - e(L1) - e(L2)| > 1e-6.
/// Throws NotFound once the grid is exhausted.
ComonotoneCounterexample find_expectile_comonotone_counterexample(Level tau, const ComonotoneGrid& grid = {});

struct VarSuperadditivityExample {
  LossPanel law;
  double var_first;
  double var_second;
  double var_sum;
  std::size_t searched;
};

/// Default search grid: losses {0, 10} for both positions, weights in
/// multiples of 1/100.
JointGrid default_var_search_grid();

/// First joint law on the grid with VaR(L1 + L2) > VaR(L1) + VaR(L2).
/// Throws NotFound once the grid is exhausted.
VarSuperadditivityExample find_var_superadditivity_example(Level alpha,
                                                           const JointGrid& grid = default_var_search_grid());

}  // namespace riskkit
