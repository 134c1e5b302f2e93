#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "riskkit/error.hpp"

namespace riskkit {

enum class LevelKind { QuantileAlpha, ExpectileTau };

/// A probability parameter in the open interval (0,1), tagged with the role it
/// plays (quantile level alpha or expectile level tau).
class Level {
 public:
  static Level quantile(double alpha) { return Level(alpha, LevelKind::QuantileAlpha); }
  static Level expectile(double tau) { return Level(tau, LevelKind::ExpectileTau); }

  Level(double value, LevelKind kind);

  double value() const noexcept { return value_; }
  LevelKind kind() const noexcept { return kind_; }

  /// Throws InvalidArgument unless the level carries the expected role.
  void require(LevelKind expected) const;

  friend bool operator==(const Level&, const Level&) = default;

 private:
  double value_;
  LevelKind kind_;
};

/// Finite discrete law on the real line. Atoms are strictly increasing, every
/// stored weight is positive, and the weights sum to one. Immutable.
///
/// Cumulative probabilities are stored alongside the atoms; the last one is
/// exactly 1 so every level u in (0,1) maps onto an atom.
class DiscreteDistribution {
 public:
  /// Empirical law with weight 1/n per observation. Equal values are merged
  /// and their weights accumulate. Throws EmptySample on empty input.
  static DiscreteDistribution from_sample(std::span<const double> values);

  /// Law with explicit weights. Weights must be nonnegative and sum to one
  /// within 1e-9; they are renormalised and zero-weight atoms are dropped.
  static DiscreteDistribution from_weighted(std::span<const double> values,
                                            std::span<const double> weights);

  static DiscreteDistribution point_mass(double value);

  std::size_t size() const noexcept { return atoms_.size(); }
  std::span<const double> atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// cumulative()[k] = P(L <= atoms()[k]).
  std::span<const double> cumulative() const noexcept { return cumulative_; }

  double min() const noexcept { return atoms_.front(); }
  double max() const noexcept { return atoms_.back(); }

  /// Law of L + a.
  DiscreteDistribution shifted(double a) const;
  /// Law of h * L; h must be nonnegative.
  DiscreteDistribution scaled(double h) const;

 private:
  DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights,
                       std::vector<double> cumulative);

  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Left-continuous generalised inverse: the smallest atom a with
/// P(L <= a) >= u. Requires 0 < u < 1.
double quantile(const DiscreteDistribution& d, double u);

/// P(L <= x).
double cdf(const DiscreteDistribution& d, double x) noexcept;
/// P(L < x).
double cdf_left(const DiscreteDistribution& d, double x) noexcept;

/// Two comonotone losses L1 = f1(X), L2 = f2(X) on a common discrete factor X.
/// f1 and f2 list the map values at the sorted atoms of the factor and must be
/// nondecreasing along them.
struct ComonotonePair {
  DiscreteDistribution factor;
  std::vector<double> f1;
  std::vector<double> f2;
};

struct ComonotoneLaws {
  DiscreteDistribution first;
  DiscreteDistribution second;
  DiscreteDistribution sum;
};

/// Exact laws of L1, L2 and L1 + L2, the sum taken state by state on the
/// factor. Throws ShapeMismatch on length mismatch and InvalidArgument if a
/// map decreases.
ComonotoneLaws comonotone_sum(const ComonotonePair& pair);

/// Exact 1-D Wasserstein-1 distance, the integral over (0,1) of the absolute
/// difference of the two quantile functions.
double wasserstein1(const DiscreteDistribution& a, const DiscreteDistribution& b) noexcept;

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

}  // namespace riskkit
