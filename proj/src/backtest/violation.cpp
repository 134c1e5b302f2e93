#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "riskkit/backtest.hpp"
#include "riskkit/stats.hpp"

namespace riskkit {

namespace {

constexpr std::uint64_t kExactBinomialLimit = 1'000'000;

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

TestResult make_test_result(std::string method, double statistic, double p_value) {
  TestResult r;
  r.method = std::move(method);
  r.statistic = statistic;
  r.p_value = std::clamp(p_value, 0.0, 1.0);
  for (double level : {0.01, 0.05, 0.10}) r.reject_at[level] = r.p_value < level;
  return r;
}

ViolationSeries violation_process(std::span<const double> var_forecasts,
                                  std::span<const double> realizations, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  if (realizations.empty() || var_forecasts.size() != realizations.size()) {
    fail(ErrorCode::ShapeMismatch, "VaR forecasts and realisations must share one nonzero length");
  }
  ViolationSeries v{{}, alpha, 0};
  v.indicators.reserve(realizations.size());
  for (std::size_t t = 0; t < realizations.size(); ++t) {
    const bool hit = realizations[t] > var_forecasts[t];
    v.indicators.push_back(hit ? 1 : 0);
    v.count += hit ? 1 : 0;
  }
  return v;
}

TestResult unconditional_coverage_test(const ViolationSeries& v) {
  const auto periods = static_cast<std::uint64_t>(v.indicators.size());
  if (periods == 0) fail(ErrorCode::InsufficientData, "violation series is empty");
  const auto count = static_cast<std::uint64_t>(v.count);
  const double p = 1.0 - v.alpha.value();

  if (periods <= kExactBinomialLimit) {
    const double lower = stats::binomial_cdf(count, periods, p);
    const double upper = stats::binomial_upper(count, periods, p);
    return make_test_result("exact binomial coverage", static_cast<double>(count),
                            std::min(1.0, 2.0 * std::min(lower, upper)));
  }
  const double n = static_cast<double>(periods);
  const double z = (static_cast<double>(count) - n * p) / std::sqrt(n * p * (1.0 - p));
  auto r = make_test_result("normal-approximation binomial coverage", static_cast<double>(count),
                            std::min(1.0, 2.0 * stats::normal_sf(std::abs(z))));
  r.normal_approximation = true;
  return r;
}

TestResult independence_test(const ViolationSeries& v) {
  const auto& x = v.indicators;
  if (x.size() < 2) fail(ErrorCode::InsufficientData, "independence test needs at least two periods");
  if (v.count == 0 || v.count == x.size()) {
    auto r = make_test_result("markov likelihood ratio", 0.0, 1.0);
    r.degenerate = true;
    return r;
  }
  double n[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t t = 1; t < x.size(); ++t) n[x[t - 1]][x[t]] += 1.0;

  const double from0 = n[0][0] + n[0][1];
  const double from1 = n[1][0] + n[1][1];
  const double p01 = from0 > 0.0 ? n[0][1] / from0 : 0.0;
  const double p11 = from1 > 0.0 ? n[1][1] / from1 : 0.0;
  const double pooled = (n[0][1] + n[1][1]) / (from0 + from1);

  const double markov = xlogy(n[0][0], 1.0 - p01) + xlogy(n[0][1], p01) + xlogy(n[1][0], 1.0 - p11) +
                        xlogy(n[1][1], p11);
  const double iid = xlogy(n[0][0] + n[1][0], 1.0 - pooled) + xlogy(n[0][1] + n[1][1], pooled);
  const double lr = std::max(0.0, -2.0 * (iid - markov));
  return make_test_result("markov likelihood ratio", lr, stats::chi_square_sf(lr, 1.0));
}

CoverageBacktest var_backtest(std::span<const double> var_forecasts, std::span<const double> realizations,
                              Level alpha) {
  auto v = violation_process(var_forecasts, realizations, alpha);
  auto coverage = unconditional_coverage_test(v);
  auto independence = independence_test(v);
  return {std::move(v), std::move(coverage), std::move(independence)};
}

double rejection_rate(std::size_t replications, std::uint64_t master_seed,
                      const std::function<bool(Rng&)>& trial, unsigned threads) {
  if (replications == 0) fail(ErrorCode::InvalidArgument, "at least one replication required");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, replications));

  std::vector<std::uint8_t> rejected(replications, 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    try {
      for (std::size_t i = next++; i < replications; i = next++) {
        Rng rng(replication_seed(master_seed, i));
        rejected[i] = trial(rng) ? 1 : 0;
      }
    } catch (...) {
      const std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = replications;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::size_t total = 0;
  for (auto r : rejected) total += r;
  return static_cast<double>(total) / static_cast<double>(replications);
}

}  // namespace riskkit
