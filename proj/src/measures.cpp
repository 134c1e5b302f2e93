#include "riskkit/measures.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace riskkit {

MeasureKind MeasureKind::var(Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  return MeasureKind(Type::VaR, alpha);
}

MeasureKind MeasureKind::es(Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  return MeasureKind(Type::ES, alpha);
}

MeasureKind MeasureKind::expectile(Level tau) {
  tau.require(LevelKind::ExpectileTau);
  return MeasureKind(Type::Expectile, tau);
}

std::string MeasureKind::name() const {
  switch (type_) {
    case Type::Variance: return "variance";
    case Type::Mean: return "mean";
    case Type::VaR: return "var";
    case Type::ES: return "es";
    case Type::Expectile: return "expectile";
  }
  return "unknown";
}

double mean(const DiscreteDistribution& d) {
  const auto atoms = d.atoms();
  const auto weights = d.weights();
  std::vector<double> terms(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) terms[k] = weights[k] * atoms[k];
  return compensated_sum(terms);
}

double variance(const DiscreteDistribution& d) {
  const double mu = mean(d);
  const auto atoms = d.atoms();
  const auto weights = d.weights();
  std::vector<double> terms(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double dev = atoms[k] - mu;
    terms[k] = weights[k] * dev * dev;
  }
  return compensated_sum(terms);
}

double value_at_risk(const DiscreteDistribution& d, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  return quantile(d, alpha.value());
}

namespace {

double es_integrated(const DiscreteDistribution& d, double alpha) {
  const auto atoms = d.atoms();
  const auto cum = d.cumulative();
  // Weighted mean of the tail quantiles over the segment widths of (alpha, 1),
  // measured from the first tail atom.
  CompensatedSum excess;
  CompensatedSum width;
  std::optional<double> base;
  double lower = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double from = std::max(lower, alpha);
    const double to = cum[k];
    if (to > from) {
      if (!base) base = atoms[k];
      excess.add((atoms[k] - *base) * (to - from));
      width.add(to - from);
    }
    lower = to;
  }
  return *base + excess.value() / width.value();
}

double es_conditional(const DiscreteDistribution& d, double alpha) {
  const double q = quantile(d, alpha);
  const auto atoms = d.atoms();
  const auto weights = d.weights();
  const auto first = static_cast<std::size_t>(std::lower_bound(atoms.begin(), atoms.end(), q) - atoms.begin());
  std::vector<double> mass(weights.begin() + static_cast<std::ptrdiff_t>(first), weights.end());
  std::vector<double> moment;
  for (std::size_t k = first; k < atoms.size(); ++k) moment.push_back(weights[k] * atoms[k]);
  // P[L >= q] through the complement keeps the cumulative levels consistent
  // with the integrated form.
  const double tail_probability = first == 0 ? 1.0 : 1.0 - d.cumulative()[first - 1];
  const double tail_mean = compensated_sum(moment) / compensated_sum(mass);
  return tail_mean + (tail_mean - q) * (tail_probability / (1.0 - alpha) - 1.0);
}

}  // namespace

double expected_shortfall(const DiscreteDistribution& d, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  const double value = es_integrated(d, alpha.value());
#ifndef NDEBUG
  const double check = es_conditional(d, alpha.value());
  const double scale = std::max({1.0, std::abs(d.min()), std::abs(d.max())});
  assert(std::abs(value - check) <= 1e-10 * scale);
#endif
  return value;
}

double expected_shortfall_conditional(const DiscreteDistribution& d, Level alpha) {
  alpha.require(LevelKind::QuantileAlpha);
  return es_conditional(d, alpha.value());
}

double expectile_identity_gap(const DiscreteDistribution& d, double tau, double l) {
  const auto atoms = d.atoms();
  const auto weights = d.weights();
  std::vector<double> terms;
  terms.reserve(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k] > l) {
      terms.push_back(tau * weights[k] * (atoms[k] - l));
    } else if (atoms[k] < l) {
      terms.push_back(-(1.0 - tau) * weights[k] * (l - atoms[k]));
    }
  }
  return compensated_sum(terms);
}

double expectile(const DiscreteDistribution& d, Level tau_level, const ExpectileSolverConfig& cfg) {
  tau_level.require(LevelKind::ExpectileTau);
  if (cfg.max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  if (cfg.abs_tolerance && !(*cfg.abs_tolerance > 0.0)) {
    fail(ErrorCode::InvalidArgument, "abs_tolerance must be positive");
  }
  const double tau = tau_level.value();
  const auto atoms = d.atoms();
  const auto weights = d.weights();
  const std::size_t n = atoms.size();
  if (n == 1) return atoms[0];

  const double scale = std::max({1.0, std::abs(d.min()), std::abs(d.max())});
  const double tolerance = cfg.abs_tolerance.value_or(1e-12 * scale);

  // Prefix sums of weight and first moment: below[k] covers atoms 0..k-1.
  std::vector<double> mass_below(n + 1, 0.0);
  std::vector<double> moment_below(n + 1, 0.0);
  {
    CompensatedSum w;
    CompensatedSum m;
    for (std::size_t k = 0; k < n; ++k) {
      w.add(weights[k]);
      m.add(weights[k] * atoms[k]);
      mass_below[k + 1] = w.value();
      moment_below[k + 1] = m.value();
    }
  }
  const double total_moment = moment_below[n];
  // g at atom k: atoms above k pull up with weight tau, atoms below pull down.
  const auto g_at_atom = [&](std::size_t k) {
    const double a = atoms[k];
    const double up_mass = 1.0 - mass_below[k + 1];
    const double up_moment = total_moment - moment_below[k + 1];
    const double down_mass = mass_below[k];
    const double down_moment = moment_below[k];
    return tau * (up_moment - a * up_mass) - (1.0 - tau) * (a * down_mass - down_moment);
  };

  // g(atoms[0]) >= 0 >= g(atoms[n-1]); find lo with g(lo) > 0 >= g(lo+1).
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  if (g_at_atom(lo) <= 0.0) return atoms[lo];
  if (g_at_atom(hi) >= 0.0) return atoms[hi];
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double g = g_at_atom(mid);
    if (g == 0.0) return atoms[mid];
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // On (atoms[lo], atoms[hi]) the atoms 0..lo lie below l and lo+1.. above.
  const double down_mass = mass_below[lo + 1];
  const double down_moment = moment_below[lo + 1];
  const double up_mass = 1.0 - down_mass;
  const double up_moment = total_moment - down_moment;
  double root = (tau * up_moment + (1.0 - tau) * down_moment) / (tau * up_mass + (1.0 - tau) * down_mass);
  root = std::clamp(root, atoms[lo], atoms[hi]);
  if (std::abs(expectile_identity_gap(d, tau, root)) <= tolerance) return root;

  double left = atoms[lo];
  double right = atoms[hi];
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double mid = 0.5 * (left + right);
    const double g = expectile_identity_gap(d, tau, mid);
    if (std::abs(g) <= tolerance) return mid;
    if (g > 0.0) {
      left = mid;
    } else {
      right = mid;
    }
  }
  std::ostringstream msg;
  msg << "expectile solver did not reach |g| <= " << tolerance << " within " << cfg.max_iterations
      << " iterations";
  fail(ErrorCode::NoConvergence, msg.str());
}

double evaluate(const DiscreteDistribution& d, const MeasureKind& kind) {
  switch (kind.type()) {
    case MeasureKind::Type::Variance: return variance(d);
    case MeasureKind::Type::Mean: return mean(d);
    case MeasureKind::Type::VaR: return value_at_risk(d, *kind.level());
    case MeasureKind::Type::ES: return expected_shortfall(d, *kind.level());
    case MeasureKind::Type::Expectile: return expectile(d, *kind.level());
  }
  fail(ErrorCode::InvalidArgument, "unknown measure kind");
}

double risk_adjusted_capital(const DiscreteDistribution& d, const MeasureKind& kind) {
  return evaluate(d, kind) - mean(d);
}

}  // namespace riskkit
