#include "riskkit/allocation.hpp"

#include <algorithm>
#include <cmath>

namespace riskkit {

LossPanel::LossPanel(std::vector<std::string> names, std::vector<std::vector<double>> rows,
                     std::optional<std::vector<double>> weights)
    : names_(std::move(names)), rows_(std::move(rows)), weights_(std::move(weights)) {
  if (names_.empty()) fail(ErrorCode::ShapeMismatch, "panel needs at least one position");
  if (rows_.empty()) fail(ErrorCode::EmptySample, "panel needs at least one row");
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    if (rows_[t].size() != names_.size()) {
      fail(ErrorCode::ShapeMismatch, "row " + std::to_string(t) + " has " + std::to_string(rows_[t].size()) +
                                         " values, expected " + std::to_string(names_.size()));
    }
    for (double v : rows_[t]) {
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "non-finite loss in row " + std::to_string(t));
    }
  }
  if (weights_) {
    if (weights_->size() != rows_.size()) fail(ErrorCode::ShapeMismatch, "one weight per row required");
    for (double w : *weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::InvalidArgument, "row weights must be positive");
    }
    if (std::abs(compensated_sum(*weights_) - 1.0) > 1e-9) {
      fail(ErrorCode::InvalidArgument, "row weights must sum to one");
    }
  }
  portfolio_.reserve(rows_.size());
  for (const auto& row : rows_) portfolio_.push_back(compensated_sum(row));
}

LossPanel LossPanel::from_columns(const std::vector<std::vector<double>>& columns,
                                  std::optional<std::vector<double>> weights) {
  if (columns.empty()) fail(ErrorCode::ShapeMismatch, "panel needs at least one position");
  const std::size_t periods = columns.front().size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].size() != periods) fail(ErrorCode::ShapeMismatch, "columns differ in length");
    names.push_back("p" + std::to_string(i + 1));
  }
  std::vector<std::vector<double>> rows(periods, std::vector<double>(columns.size()));
  for (std::size_t t = 0; t < periods; ++t) {
    for (std::size_t i = 0; i < columns.size(); ++i) rows[t][i] = columns[i][t];
  }
  return LossPanel(std::move(names), std::move(rows), std::move(weights));
}

double LossPanel::row_weight(std::size_t t) const noexcept {
  return weights_ ? (*weights_)[t] : 1.0 / static_cast<double>(rows_.size());
}

std::vector<double> LossPanel::column(std::size_t i) const {
  if (i >= positions()) fail(ErrorCode::InvalidArgument, "position index out of range");
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) out.push_back(row[i]);
  return out;
}

DiscreteDistribution LossPanel::distribution_of(std::span<const double> values) const {
  return weights_ ? DiscreteDistribution::from_weighted(values, *weights_)
                  : DiscreteDistribution::from_sample(values);
}

DiscreteDistribution LossPanel::position_distribution(std::size_t i) const {
  const auto values = column(i);
  return distribution_of(values);
}

DiscreteDistribution LossPanel::portfolio_distribution() const { return distribution_of(portfolio_); }

LossPanel LossPanel::with_scaled_position(std::size_t i, double factor) const {
  if (i >= positions()) fail(ErrorCode::InvalidArgument, "position index out of range");
  auto rows = rows_;
  for (auto& row : rows) row[i] *= factor;
  return LossPanel(names_, std::move(rows), weights_);
}

namespace {

// Contributions sum_t phi_t * L_{t,i} for a row weighting phi.
AllocationResult weighted_allocation(const LossPanel& panel, const MeasureKind& kind, double total,
                                     const std::vector<double>& phi, bool non_unique) {
  AllocationResult out{kind, total, {}, 0.0, non_unique};
  const std::size_t m = panel.positions();
  std::vector<CompensatedSum> sums(m);
  for (std::size_t t = 0; t < panel.periods(); ++t) {
    if (phi[t] == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) sums[i].add(phi[t] * panel.rows()[t][i]);
  }
  out.contributions.reserve(m);
  for (const auto& s : sums) out.contributions.push_back(s.value());
  out.residual = total - compensated_sum(out.contributions);
  return out;
}

}  // namespace

AllocationResult es_contributions(const LossPanel& panel, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  const auto dist = panel.portfolio_distribution();
  const double q = quantile(dist, alpha.value());
  const double total = expected_shortfall(dist, alpha);
  const auto losses = panel.portfolio();
  const double tail = 1.0 - alpha.value();

  // P[L > q] from the same cumulative levels the exact ES integrates over.
  const double above = 1.0 - cdf(dist, q);
  const double at = cdf(dist, q) - cdf_left(dist, q);
  const double boundary_share = std::max(0.0, tail - above) / at;

  std::vector<double> phi(panel.periods(), 0.0);
  for (std::size_t t = 0; t < panel.periods(); ++t) {
    const double w = panel.row_weight(t);
    if (losses[t] > q) {
      phi[t] = w / tail;
    } else if (losses[t] == q) {
      phi[t] = w * boundary_share / tail;
    }
  }
  return weighted_allocation(panel, MeasureKind::es(alpha), total, phi, at > 0.0 && above < tail);
}

AllocationResult expectile_contributions(const LossPanel& panel, Level tau) {
  tau.require(LevelKind::ExpectileTau);
  if (tau.value() < 0.5) fail(ErrorCode::InvalidArgument, "expectile contributions require tau >= 1/2");
  const auto dist = panel.portfolio_distribution();
  const double e = expectile(dist, tau);
  const auto losses = panel.portfolio();
  const double t_up = tau.value();
  const double t_down = 1.0 - tau.value();

  CompensatedSum norm;
  bool atom_at_e = false;
  std::vector<double> phi(panel.periods(), 0.0);
  for (std::size_t t = 0; t < panel.periods(); ++t) {
    phi[t] = panel.row_weight(t) * (losses[t] > e ? t_up : t_down);
    norm.add(phi[t]);
    atom_at_e = atom_at_e || losses[t] == e;
  }
  const double denominator = norm.value();
  for (double& p : phi) p /= denominator;

  // The ratio with L_i replaced by L reproduces the expectile itself, so the
  // total is reported from the same weighting.
  AllocationResult out = weighted_allocation(panel, MeasureKind::expectile(tau), e, phi, atom_at_e);
  return out;
}

AllocationResult contributions(const LossPanel& panel, const MeasureKind& kind) {
  switch (kind.type()) {
    case MeasureKind::Type::ES: return es_contributions(panel, *kind.level());
    case MeasureKind::Type::Expectile: return expectile_contributions(panel, *kind.level());
    default: break;
  }
  fail(ErrorCode::InvalidArgument, "risk contributions are defined for ES and expectiles only");
}

double diversification_index(const LossPanel& panel, const MeasureKind& kind) {
  CompensatedSum standalone;
  for (std::size_t i = 0; i < panel.positions(); ++i) {
    standalone.add(evaluate(panel.position_distribution(i), kind));
  }
  const double denominator = standalone.value();
  if (denominator == 0.0) {
    fail(ErrorCode::DegenerateDenominator, "sum of standalone measures is zero");
  }
  return evaluate(panel.portfolio_distribution(), kind) / denominator;
}

double marginal_diversification_index(const LossPanel& panel, std::size_t position,
                                      const MeasureKind& kind) {
  if (position >= panel.positions()) fail(ErrorCode::InvalidArgument, "position index out of range");
  const double standalone = evaluate(panel.position_distribution(position), kind);
  if (standalone == 0.0) fail(ErrorCode::DegenerateDenominator, "standalone measure is zero");
  return contributions(panel, kind).contributions[position] / standalone;
}

double diversification_benefit(const LossPanel& panel, const MeasureKind& kind) {
  CompensatedSum standalone;
  for (std::size_t i = 0; i < panel.positions(); ++i) {
    standalone.add(risk_adjusted_capital(panel.position_distribution(i), kind));
  }
  const double denominator = standalone.value();
  if (!(denominator > 0.0)) {
    fail(ErrorCode::DegenerateDenominator, "sum of standalone risk-adjusted capital is not positive");
  }
  return 1.0 - risk_adjusted_capital(panel.portfolio_distribution(), kind) / denominator;
}

}  // namespace riskkit
