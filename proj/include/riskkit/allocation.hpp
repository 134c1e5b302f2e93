#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskkit/core.hpp"
#include "riskkit/measures.hpp"

namespace riskkit {

/// T joint observations of m position losses. Rows carry equal weight 1/T
/// unless explicit joint weights are supplied. The portfolio loss of a row is
/// the row sum, computed once at construction.
class LossPanel {
 public:
  LossPanel(std::vector<std::string> names, std::vector<std::vector<double>> rows,
            std::optional<std::vector<double>> weights = std::nullopt);

  /// Panel from columns of equal length; positions are named p1, p2, ...
  static LossPanel from_columns(const std::vector<std::vector<double>>& columns,
                                std::optional<std::vector<double>> weights = std::nullopt);

  std::size_t periods() const noexcept { return rows_.size(); }
  std::size_t positions() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  std::span<const double> portfolio() const noexcept { return portfolio_; }
  bool equally_weighted() const noexcept { return !weights_.has_value(); }
  double row_weight(std::size_t t) const noexcept;

  std::vector<double> column(std::size_t i) const;

  DiscreteDistribution position_distribution(std::size_t i) const;
  DiscreteDistribution portfolio_distribution() const;

  /// Same panel with column i multiplied by factor.
  LossPanel with_scaled_position(std::size_t i, double factor) const;

 private:
  DiscreteDistribution distribution_of(std::span<const double> values) const;

  std::vector<std::string> names_;
  std::vector<std::vector<double>> rows_;
  std::optional<std::vector<double>> weights_;
  std::vector<double> portfolio_;
};

struct AllocationResult {
  MeasureKind measure;
  double total = 0.0;
  std::vector<double> contributions;
  double residual = 0.0;
  /// The portfolio loss has an atom at the boundary (quantile for ES,
  /// expectile for expectiles), so the Euler derivative need not exist and
  /// the returned contributions are one element of the subgradient.
  bool non_unique = false;
};

/// ES contributions with the discrete tail weighting: rows with L > q get
/// weight 1/(1-alpha), rows with L = q share the remaining tail mass in
/// proportion to their probability. Contributions add up to the exact ES.
AllocationResult es_contributions(const LossPanel& panel, Level alpha);

/// Expectile contributions
/// [tau E[L_i 1{L > e}] + (1-tau) E[L_i 1{L <= e}]] / [tau P[L > e] + (1-tau) P[L <= e]]
/// with e the portfolio expectile. Requires tau >= 1/2.
AllocationResult expectile_contributions(const LossPanel& panel, Level tau);

/// Euler contributions for an ES or expectile kind.
AllocationResult contributions(const LossPanel& panel, const MeasureKind& kind);

/// rho(L) / sum_i rho(L_i). Throws DegenerateDenominator on a zero denominator.
double diversification_index(const LossPanel& panel, const MeasureKind& kind);

/// rho(L_i | L) / rho(L_i) for ES or expectile kinds.
double marginal_diversification_index(const LossPanel& panel, std::size_t position,
                                      const MeasureKind& kind);

/// 1 - RAC(L) / sum_i RAC(L_i). Throws DegenerateDenominator unless the
/// denominator is positive.
double diversification_benefit(const LossPanel& panel, const MeasureKind& kind);

}  // namespace riskkit
