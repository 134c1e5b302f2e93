#include <algorithm>
#include <cmath>

#include "riskkit/backtest.hpp"

namespace riskkit {

namespace {

// Visits every composition of `total` into parts.size() parts, each part at
// least `minimum`, in lexicographic order. Returns false if visit stopped it.
bool compositions(std::vector<int>& parts, std::size_t pos, int remaining, int minimum,
                  const std::function<bool(const std::vector<int>&)>& visit) {
  if (pos + 1 == parts.size()) {
    if (remaining < minimum) return true;
    parts[pos] = remaining;
    return visit(parts);
  }
  const auto left = static_cast<int>(parts.size() - pos - 1);
  for (int v = minimum; v <= remaining - left * minimum; ++v) {
    parts[pos] = v;
    if (!compositions(parts, pos + 1, remaining - v, minimum, visit)) return false;
  }
  return true;
}

bool nondecreasing_maps(std::vector<double>& map, std::size_t pos, std::size_t from,
                        const std::vector<double>& values,
                        const std::function<bool(const std::vector<double>&)>& visit) {
  if (pos == map.size()) return visit(map);
  for (std::size_t k = from; k < values.size(); ++k) {
    map[pos] = values[k];
    if (!nondecreasing_maps(map, pos + 1, k, values, visit)) return false;
  }
  return true;
}

std::vector<std::vector<double>> all_maps(std::size_t length, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::vector<double>> out;
  std::vector<double> map(length);
  nondecreasing_maps(map, 0, 0, values, [&](const std::vector<double>& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

double scale_of(std::initializer_list<double> xs) {
  double s = 1.0;
  for (double x : xs) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

std::size_t enumerate_joint_laws(const JointGrid& grid,
                                 const std::function<bool(const LossPanel&)>& visit) {
  if (grid.values1.empty() || grid.values2.empty()) {
    fail(ErrorCode::InvalidArgument, "joint grid needs values for both positions");
  }
  if (grid.denominator < 1) fail(ErrorCode::InvalidArgument, "grid denominator must be positive");

  const std::size_t n2 = grid.values2.size();
  std::vector<int> table(grid.values1.size() * n2, 0);
  std::size_t visited = 0;
  compositions(table, 0, grid.denominator, 0, [&](const std::vector<int>& cells) {
    std::vector<std::vector<double>> rows;
    std::vector<double> weights;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] == 0) continue;
      rows.push_back({grid.values1[c / n2], grid.values2[c % n2]});
      weights.push_back(static_cast<double>(cells[c]) / grid.denominator);
    }
    ++visited;
    return visit(LossPanel({"L1", "L2"}, std::move(rows), std::move(weights)));
  });
  return visited;
}

ComonotoneCounterexample find_expectile_comonotone_counterexample(Level tau, const ComonotoneGrid& grid) {
  tau.require(LevelKind::ExpectileTau);
  if (grid.factor_size < 2 || grid.map_values.empty()) {
    fail(ErrorCode::InvalidArgument, "comonotone grid needs at least two factor atoms and one map value");
  }
  if (grid.denominator < static_cast<int>(grid.factor_size)) {
    fail(ErrorCode::InvalidArgument, "grid denominator too small for strictly positive factor weights");
  }

  const auto maps = all_maps(grid.factor_size, grid.map_values);
  std::vector<double> atoms(grid.factor_size);
  for (std::size_t k = 0; k < atoms.size(); ++k) atoms[k] = static_cast<double>(k);

  std::optional<ComonotoneCounterexample> found;
  std::size_t searched = 0;
  std::vector<int> parts(grid.factor_size, 0);
  compositions(parts, 0, grid.denominator, 1, [&](const std::vector<int>& w) {
    std::vector<double> weights;
    for (int k : w) weights.push_back(static_cast<double>(k) / grid.denominator);
    const auto factor = DiscreteDistribution::from_weighted(atoms, weights);
    for (const auto& f1 : maps) {
      for (const auto& f2 : maps) {
        ++searched;
        ComonotonePair pair{factor, f1, f2};
        const auto laws = comonotone_sum(pair);
        const double e1 = expectile(laws.first, tau);
        const double e2 = expectile(laws.second, tau);
        const double es = expectile(laws.sum, tau);
        const double gap = es - e1 - e2;
        if (std::abs(gap) > 1e-6) {
          found = ComonotoneCounterexample{std::move(pair), e1, e2, es, gap, searched};
          return false;
        }
      }
    }
    return true;
  });
  if (!found) {
    fail(ErrorCode::NotFound, "no comonotone expectile counterexample on the grid after " +
                                  std::to_string(searched) + " pairs");
  }
  return *found;
}

JointGrid default_var_search_grid() { return JointGrid{{0.0, 10.0}, {0.0, 10.0}, 100}; }

VarSuperadditivityExample find_var_superadditivity_example(Level alpha, const JointGrid& grid) {
  alpha.require(LevelKind::QuantileAlpha);
  std::optional<VarSuperadditivityExample> found;
  std::size_t searched = 0;
  enumerate_joint_laws(grid, [&](const LossPanel& panel) {
    ++searched;
    const double v1 = value_at_risk(panel.position_distribution(0), alpha);
    const double v2 = value_at_risk(panel.position_distribution(1), alpha);
    const double vs = value_at_risk(panel.portfolio_distribution(), alpha);
    if (vs - (v1 + v2) > 1e-12 * scale_of({v1, v2, vs})) {
      found = VarSuperadditivityExample{panel, v1, v2, vs, searched};
      return false;
    }
    return true;
  });
  if (!found) {
    fail(ErrorCode::NotFound,
         "no VaR superadditivity example on the grid after " + std::to_string(searched) + " laws");
  }
  return *found;
}

}  // namespace riskkit
