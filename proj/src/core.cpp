#include "riskkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace riskkit {

Level::Level(double value, LevelKind kind) : value_(value), kind_(kind) {
  if (!(value > 0.0 && value < 1.0)) {
    fail(ErrorCode::InvalidArgument,
         "level must lie in the open interval (0,1), got " + std::to_string(value));
  }
}

void Level::require(LevelKind expected) const {
  if (kind_ != expected) {
    fail(ErrorCode::InvalidArgument,
         expected == LevelKind::QuantileAlpha ? "expected a quantile level (alpha)"
                                              : "expected an expectile level (tau)");
  }
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite value in distribution");
  }
}

// Equal-weight law built from integer counts so that cumulative levels k/n are
// the correctly rounded doubles (quantile(uniform{1..100}, 0.95) must be 95).
struct CountedAtoms {
  std::vector<double> atoms;
  std::vector<std::size_t> counts;
};

CountedAtoms count_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  CountedAtoms out;
  for (double v : values) {
    if (!out.atoms.empty() && out.atoms.back() == v) {
      ++out.counts.back();
    } else {
      out.atoms.push_back(v);
      out.counts.push_back(1);
    }
  }
  return out;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights,
                                           std::vector<double> cumulative)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), cumulative_(std::move(cumulative)) {
  cumulative_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::from_sample(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::EmptySample, "sample is empty");
  require_finite(values);
  auto counted = count_sorted(std::vector<double>(values.begin(), values.end()));
  const auto n = static_cast<double>(values.size());
  std::vector<double> weights;
  std::vector<double> cumulative;
  weights.reserve(counted.atoms.size());
  cumulative.reserve(counted.atoms.size());
  std::size_t running = 0;
  for (std::size_t c : counted.counts) {
    running += c;
    weights.push_back(static_cast<double>(c) / n);
    cumulative.push_back(static_cast<double>(running) / n);
  }
  return DiscreteDistribution(std::move(counted.atoms), std::move(weights), std::move(cumulative));
}

DiscreteDistribution DiscreteDistribution::from_weighted(std::span<const double> values,
                                                         std::span<const double> weights) {
  if (values.empty()) fail(ErrorCode::EmptySample, "distribution has no atoms");
  if (values.size() != weights.size()) {
    fail(ErrorCode::ShapeMismatch, "atom and weight lists differ in length");
  }
  require_finite(values);
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorCode::InvalidArgument, "weights must be nonnegative");
  }
  const double total = compensated_sum(weights);
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::InvalidArgument, "weights must sum to one, got " + std::to_string(total));
  }
  if (std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; })) {
    return from_sample(values);
  }

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> atoms;
  std::vector<std::vector<double>> grouped;
  for (std::size_t idx : order) {
    if (weights[idx] == 0.0) continue;
    if (!atoms.empty() && atoms.back() == values[idx]) {
      grouped.back().push_back(weights[idx]);
    } else {
      atoms.push_back(values[idx]);
      grouped.push_back({weights[idx]});
    }
  }
  if (atoms.empty()) fail(ErrorCode::InvalidArgument, "all weights are zero");

  std::vector<double> merged;
  std::vector<double> cumulative;
  merged.reserve(atoms.size());
  cumulative.reserve(atoms.size());
  CompensatedSum running;
  for (const auto& g : grouped) {
    merged.push_back(compensated_sum(g) / total);
    for (double w : g) running.add(w);
    cumulative.push_back(std::min(1.0, running.value() / total));
  }
  return DiscreteDistribution(std::move(atoms), std::move(merged), std::move(cumulative));
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  const double v[] = {value};
  return from_sample(v);
}

namespace {

// Applies a nondecreasing map to the atoms, merging any atoms that collide.
template <class Map>
DiscreteDistribution remap_monotone(const DiscreteDistribution& d, Map map) {
  std::vector<double> values;
  values.reserve(d.size());
  for (double a : d.atoms()) values.push_back(map(a));
  return DiscreteDistribution::from_weighted(values, d.weights());
}

}  // namespace

DiscreteDistribution DiscreteDistribution::shifted(double a) const {
  auto atoms = atoms_;
  for (double& x : atoms) x += a;
  if (std::adjacent_find(atoms.begin(), atoms.end()) == atoms.end() &&
      std::all_of(atoms.begin(), atoms.end(), [](double x) { return std::isfinite(x); })) {
    return DiscreteDistribution(std::move(atoms), weights_, cumulative_);
  }
  return remap_monotone(*this, [a](double x) { return x + a; });
}

DiscreteDistribution DiscreteDistribution::scaled(double h) const {
  if (!(h >= 0.0)) fail(ErrorCode::InvalidArgument, "scaling factor must be nonnegative");
  if (h == 0.0) return point_mass(0.0);
  auto atoms = atoms_;
  for (double& x : atoms) x *= h;
  if (std::adjacent_find(atoms.begin(), atoms.end()) == atoms.end() &&
      std::all_of(atoms.begin(), atoms.end(), [](double x) { return std::isfinite(x); })) {
    return DiscreteDistribution(std::move(atoms), weights_, cumulative_);
  }
  return remap_monotone(*this, [h](double x) { return x * h; });
}

double quantile(const DiscreteDistribution& d, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    fail(ErrorCode::InvalidArgument, "quantile level must lie in (0,1)");
  }
  const auto cum = d.cumulative();
  const auto it = std::lower_bound(cum.begin(), cum.end(), u);
  return d.atoms()[static_cast<std::size_t>(it - cum.begin())];
}

double cdf(const DiscreteDistribution& d, double x) noexcept {
  const auto atoms = d.atoms();
  const auto idx = static_cast<std::size_t>(std::upper_bound(atoms.begin(), atoms.end(), x) - atoms.begin());
  return idx == 0 ? 0.0 : d.cumulative()[idx - 1];
}

double cdf_left(const DiscreteDistribution& d, double x) noexcept {
  const auto atoms = d.atoms();
  const auto idx = static_cast<std::size_t>(std::lower_bound(atoms.begin(), atoms.end(), x) - atoms.begin());
  return idx == 0 ? 0.0 : d.cumulative()[idx - 1];
}

ComonotoneLaws comonotone_sum(const ComonotonePair& pair) {
  const std::size_t n = pair.factor.size();
  if (pair.f1.size() != n || pair.f2.size() != n) {
    fail(ErrorCode::ShapeMismatch, "comonotone maps must have one value per factor atom");
  }
  const auto nondecreasing = [](const std::vector<double>& f) {
    return std::is_sorted(f.begin(), f.end());
  };
  if (!nondecreasing(pair.f1) || !nondecreasing(pair.f2)) {
    fail(ErrorCode::InvalidArgument, "comonotone maps must be nondecreasing along the factor");
  }
  std::vector<double> sum(n);
  for (std::size_t k = 0; k < n; ++k) sum[k] = pair.f1[k] + pair.f2[k];
  const auto w = pair.factor.weights();
  return ComonotoneLaws{DiscreteDistribution::from_weighted(pair.f1, w),
                        DiscreteDistribution::from_weighted(pair.f2, w),
                        DiscreteDistribution::from_weighted(sum, w)};
}

double wasserstein1(const DiscreteDistribution& a, const DiscreteDistribution& b) noexcept {
  const auto xa = a.atoms();
  const auto xb = b.atoms();
  const auto ca = a.cumulative();
  const auto cb = b.cumulative();
  std::size_t i = 0;
  std::size_t j = 0;
  double previous = 0.0;
  std::vector<double> pieces;
  pieces.reserve(xa.size() + xb.size());
  // Both quantile functions are constant between merged breakpoints.
  while (i < xa.size() && j < xb.size()) {
    const double next = std::min(ca[i], cb[j]);
    pieces.push_back((next - previous) * std::abs(xa[i] - xb[j]));
    previous = next;
    if (ca[i] == next) ++i;
    if (cb[j] == next) ++j;
  }
  return compensated_sum(pieces);
}

}  // namespace riskkit
