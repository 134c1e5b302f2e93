#pragma once

#include <optional>
#include <string>

#include "riskkit/core.hpp"

namespace riskkit {

/// Which risk measure to evaluate. VaR and ES carry a quantile level, the
/// expectile an expectile level; Mean and Variance carry none.
class MeasureKind {
 public:
  enum class Type { Variance, VaR, ES, Expectile, Mean };

  static MeasureKind variance() { return MeasureKind(Type::Variance, std::nullopt); }
  static MeasureKind mean() { return MeasureKind(Type::Mean, std::nullopt); }
  static MeasureKind var(Level alpha);
  static MeasureKind es(Level alpha);
  static MeasureKind expectile(Level tau);

  Type type() const noexcept { return type_; }
  /// Present for VaR, ES and Expectile.
  const std::optional<Level>& level() const noexcept { return level_; }

  std::string name() const;

 private:
  MeasureKind(Type type, std::optional<Level> level) : type_(type), level_(level) {}

  Type type_;
  std::optional<Level> level_;
};

struct ExpectileSolverConfig {
  /// Bound on |g(l)| at the returned root. Unset means 1e-12 times the atom
  /// scale max(1, max |atom|).
  std::optional<double> abs_tolerance;
  int max_iterations = 200;
};

double mean(const DiscreteDistribution& d);
double variance(const DiscreteDistribution& d);

/// Inf-quantile at alpha.
double value_at_risk(const DiscreteDistribution& d, Level alpha);

/// ES as the integrated quantile function (1/(1-alpha)) * int_alpha^1 q_u du,
/// evaluated exactly on the piecewise-constant quantile function.
double expected_shortfall(const DiscreteDistribution& d, Level alpha);

/// ES through the tail conditional expectation plus the correction for an
/// atom at the quantile. Agrees with expected_shortfall up to rounding.
double expected_shortfall_conditional(const DiscreteDistribution& d, Level alpha);

/// Unique root of g(l) = tau E[(L-l)+] - (1-tau) E[(l-L)+].
///
/// g is continuous, strictly decreasing and linear between consecutive atoms,
/// so the atom interval holding the sign change is located by bisection over
/// the atom index and the root is then solved in closed form on that piece.
/// Throws NoConvergence if the closed-form root misses the tolerance and the
/// fallback bisection on l does not recover within max_iterations.
double expectile(const DiscreteDistribution& d, Level tau, const ExpectileSolverConfig& cfg = {});

/// g(l) from above, for diagnostics and tests.
double expectile_identity_gap(const DiscreteDistribution& d, double tau, double l);

/// Dispatches on the kind.
double evaluate(const DiscreteDistribution& d, const MeasureKind& kind);

/// rho(L) - E[L].
double risk_adjusted_capital(const DiscreteDistribution& d, const MeasureKind& kind);

}  // namespace riskkit
