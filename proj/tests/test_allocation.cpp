#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "riskkit/allocation.hpp"

using namespace riskkit;

namespace {

LossPanel bernoulli_panel() {
  return LossPanel({"a", "b"}, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

LossPanel random_panel(std::mt19937_64& gen, std::size_t max_t, std::size_t max_m) {
  std::uniform_int_distribution<std::size_t> t_size(1, max_t);
  std::uniform_int_distribution<std::size_t> m_size(1, max_m);
  std::uniform_int_distribution<int> coarse(-3, 6);
  std::normal_distribution<double> fine(0.0, 2.0);
  const auto t = t_size(gen);
  const auto m = m_size(gen);
  const bool ties = gen() % 2 == 0;
  std::vector<std::vector<double>> columns(m, std::vector<double>(t));
  for (auto& c : columns) {
    for (auto& x : c) x = ties ? coarse(gen) : fine(gen);
  }
  if (gen() % 3 == 0) {
    std::vector<double> w(t);
    for (auto& x : w) x = 1.0 + static_cast<double>(gen() % 9);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return LossPanel::from_columns(columns, w);
  }
  return LossPanel::from_columns(columns);
}

// Brute-force ES contributions: walk rows sorted by portfolio loss from the
// top, handing out tail mass 1 - alpha until it is used up.
std::vector<double> es_contribution_oracle(const LossPanel& p, double alpha) {
  std::vector<std::size_t> order(p.periods());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p.portfolio()[a] > p.portfolio()[b]; });
  std::vector<long double> out(p.positions(), 0.0L);
  long double left = 1.0L - alpha;
  // Group equal losses so they share the boundary mass proportionally.
  for (std::size_t k = 0; k < order.size() && left > 0;) {
    std::size_t j = k;
    long double mass = 0.0L;
    while (j < order.size() && p.portfolio()[order[j]] == p.portfolio()[order[k]]) mass += p.row_weight(order[j++]);
    const long double take = std::min(mass, left);
    for (std::size_t r = k; r < j; ++r) {
      const long double w = take * p.row_weight(order[r]) / mass;
      for (std::size_t i = 0; i < p.positions(); ++i) out[i] += w * p.rows()[order[r]][i];
    }
    left -= take;
    k = j;
  }
  std::vector<double> result;
  for (auto v : out) result.push_back(static_cast<double>(v / (1.0L - alpha)));
  return result;
}

}  // namespace

TEST(LossPanel, ValidatesShape) {
  EXPECT_THROW(LossPanel({"a", "b"}, {{1, 2}, {3}}), RiskError);
  EXPECT_THROW(LossPanel({"a"}, {}), RiskError);
  EXPECT_THROW(LossPanel({"a"}, {{1}, {2}}, std::vector<double>{0.5, 0.6}), RiskError);
  EXPECT_THROW(LossPanel({"a"}, {{1}, {2}}, std::vector<double>{1.0, 0.0}), RiskError);
  const LossPanel p({"a", "b"}, {{1, 2}, {3, 4}});
  EXPECT_EQ(p.periods(), 2u);
  EXPECT_EQ(p.positions(), 2u);
  EXPECT_EQ(p.portfolio()[1], 7.0);
}

TEST(EsContributions, SinglePositionAndLinearSplit) {
  std::vector<double> l(100);
  std::iota(l.begin(), l.end(), 1.0);
  const auto single = LossPanel::from_columns({l});
  const auto r1 = es_contributions(single, Level::quantile(0.95));
  EXPECT_NEAR(r1.contributions[0], r1.total, 1e-12);
  EXPECT_EQ(r1.total, 98.0);

  std::vector<double> l1, l2;
  for (double x : l) {
    l1.push_back(0.3 * x);
    l2.push_back(0.7 * x);
  }
  const auto r = es_contributions(LossPanel::from_columns({l1, l2}), Level::quantile(0.95));
  EXPECT_NEAR(r.contributions[0], 29.4, 1e-12);
  EXPECT_NEAR(r.contributions[1], 68.6, 1e-12);
  EXPECT_NEAR(r.total, 98.0, 1e-12);
}

TEST(EsContributions, MatchOracleAndAddUp) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> level(0.05, 0.99);
  for (int rep = 0; rep < 300; ++rep) {
    const auto p = random_panel(gen, 60, 4);
    const double a = level(gen);
    const auto r = es_contributions(p, Level::quantile(a));
    const auto expected = es_contribution_oracle(p, a);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.positions(); ++i) {
      EXPECT_NEAR(r.contributions[i], expected[i], 1e-9 * std::max(1.0, std::abs(expected[i])));
      sum += r.contributions[i];
    }
    const double total = expected_shortfall(p.portfolio_distribution(), Level::quantile(a));
    EXPECT_NEAR(r.total, total, 1e-10 * std::max(1.0, std::abs(total)));
    EXPECT_LE(std::abs(r.residual), 1e-10 * std::max(1.0, std::abs(r.total)));
    EXPECT_NEAR(sum, r.total, 1e-10 * std::max(1.0, std::abs(r.total)));
  }
}

TEST(EsContributions, FlagsBoundaryAtoms) {
  // Portfolio {0, 1, 1, 2}: at alpha = 0.6 the quantile 1 carries part of the tail.
  EXPECT_TRUE(es_contributions(bernoulli_panel(), Level::quantile(0.6)).non_unique);
  // At 0.75 the tail is exactly the top row.
  EXPECT_FALSE(es_contributions(bernoulli_panel(), Level::quantile(0.75)).non_unique);
}

TEST(ExpectileContributions, Examples) {
  const auto p = bernoulli_panel();
  const auto r = expectile_contributions(p, Level::expectile(0.8));
  const double e = expectile(p.portfolio_distribution(), Level::expectile(0.8));
  // Ratio formula evaluated by hand: rows with L > e are (1,0),(0,1),(1,1) when e < 1.
  double num_a = 0, num_b = 0, den = 0;
  for (const auto& row : p.rows()) {
    const double w = 0.25 * ((row[0] + row[1] > e) ? 0.8 : 0.2);
    num_a += w * row[0];
    num_b += w * row[1];
    den += w;
  }
  EXPECT_NEAR(r.contributions[0], num_a / den, 1e-12);
  EXPECT_NEAR(r.contributions[1], num_b / den, 1e-12);
  EXPECT_NEAR(r.contributions[0] + r.contributions[1], e, 1e-12);

  const auto coin = LossPanel::from_columns({{0, 1}, {0, 1}});
  const auto same = expectile_contributions(coin, Level::expectile(0.7));
  EXPECT_NEAR(same.contributions[0], same.total / 2, 1e-12);
  EXPECT_NEAR(same.contributions[1], same.total / 2, 1e-12);

  const auto single = LossPanel::from_columns({{0, 3, 5, 5, 9}});
  const auto one = expectile_contributions(single, Level::expectile(0.9));
  EXPECT_NEAR(one.contributions[0], one.total, 1e-12);

  EXPECT_THROW(expectile_contributions(p, Level::expectile(0.4)), RiskError);
}

TEST(ExpectileContributions, FullAllocationOnRandomPanels) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> level(0.5, 0.99);
  for (int rep = 0; rep < 300; ++rep) {
    const auto p = random_panel(gen, 80, 5);
    const auto r = expectile_contributions(p, Level::expectile(level(gen)));
    const double sum = std::accumulate(r.contributions.begin(), r.contributions.end(), 0.0);
    EXPECT_NEAR(sum, r.total, 1e-10 * std::max(1.0, std::abs(r.total)));
  }
}

TEST(Diversification, ComonotoneAndHedged) {
  std::vector<double> l{1, 5, 2, 8, 3, 9, 4, 7, 6, 10};
  std::vector<double> twice;
  for (double x : l) twice.push_back(2 * x);
  const auto es = MeasureKind::es(Level::quantile(0.8));
  const auto como = LossPanel::from_columns({l, twice});
  EXPECT_NEAR(diversification_index(como, es), 1.0, 1e-12);
  EXPECT_NEAR(diversification_benefit(como, es), 0.0, 1e-12);
  EXPECT_NEAR(marginal_diversification_index(como, 0, es), 1.0, 1e-12);
  EXPECT_NEAR(marginal_diversification_index(como, 1, es), 1.0, 1e-12);

  std::vector<double> neg;
  for (double x : l) neg.push_back(-x);
  EXPECT_NEAR(diversification_benefit(LossPanel::from_columns({l, neg}), es), 1.0, 1e-12);

  const auto single = LossPanel::from_columns({l});
  EXPECT_NEAR(diversification_index(single, es), 1.0, 1e-12);
  EXPECT_NEAR(marginal_diversification_index(single, 0, es), 1.0, 1e-12);
}

TEST(Diversification, IndependentBernoulliPanelExactValues) {
  // Sum law {0: 1/4, 1: 1/2, 2: 1/4}. F(1) = 3/4, so the quantile function is 2
  // on (3/4, 1) and ES_0.75(sum) = 2; each marginal has ES_0.75 = 1.
  const auto p = bernoulli_panel();
  const auto es = MeasureKind::es(Level::quantile(0.75));
  const auto law = oracle::normalise({0, 1, 1, 2}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(oracle::es_minimisation(law, 0.75), 2.0, 1e-15);
  EXPECT_NEAR(diversification_index(p, es), 1.0, 1e-12);
  EXPECT_NEAR(diversification_benefit(p, es), 0.0, 1e-12);
  // Contribution of position a: E[a | top row] = 1; standalone 1.
  EXPECT_NEAR(marginal_diversification_index(p, 0, es), 1.0, 1e-12);
  // At alpha = 0.5 diversification shows up: ES(sum) = 1.5, ES(a) = ES(b) = 1.
  const auto half = MeasureKind::es(Level::quantile(0.5));
  EXPECT_NEAR(diversification_index(p, half), 0.75, 1e-12);
  EXPECT_NEAR(diversification_benefit(p, half), 0.5, 1e-12);
}

TEST(Diversification, DegenerateDenominators) {
  const auto zero = LossPanel::from_columns({{0, 0, 0}, {0, 0, 0}});
  const auto es = MeasureKind::es(Level::quantile(0.5));
  try {
    diversification_index(zero, es);
    ADD_FAILURE();
  } catch (const RiskError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
  EXPECT_THROW(diversification_benefit(zero, es), RiskError);
  EXPECT_THROW(marginal_diversification_index(zero, 0, es), RiskError);
}

TEST(Diversification, BenefitIsOneMinusIndexForCentredPositions) {
  std::mt19937_64 gen(43);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(40));
    for (auto& c : cols) {
      for (auto& x : c) x = n01(gen);
      const double m = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
      for (auto& x : c) x -= m;
    }
    const auto p = LossPanel::from_columns(cols);
    const auto es = MeasureKind::es(Level::quantile(0.9));
    EXPECT_NEAR(diversification_benefit(p, es), 1.0 - diversification_index(p, es), 1e-12);
  }
}

TEST(Diversification, MarginalIndexBelowTotalMeansScalingUpHelps) {
  std::mt19937_64 gen(44);
  std::normal_distribution<double> n01;
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::vector<double>> cols(3, std::vector<double>(50));
    for (auto& c : cols) {
      for (auto& x : c) x = 1.0 + n01(gen);
    }
    const auto p = LossPanel::from_columns(cols);
    for (const auto& kind : {MeasureKind::es(Level::quantile(0.9)), MeasureKind::expectile(Level::expectile(0.9))}) {
      const double di = diversification_index(p, kind);
      for (std::size_t i = 0; i < 3; ++i) {
        if (marginal_diversification_index(p, i, kind) < di) {
          ++checked;
          EXPECT_LT(diversification_index(p.with_scaled_position(i, 1.001), kind), di);
        }
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Diversification, ExpectileIndexForLinearAndNonlinearComonotoneColumns) {
  // Factor uniform on {0, 1, 2}; f1 = (0, 1, 1) and f2 = (0, 0, 1) are both
  // nondecreasing in it, f3 = 3 f1 + 1 is linear in f1.
  const std::vector<double> f1{0, 1, 1}, f2{0, 0, 1}, f3{1, 4, 4};
  const auto kind = MeasureKind::expectile(Level::expectile(0.8));
  EXPECT_NEAR(diversification_index(LossPanel::from_columns({f1, f3}), kind), 1.0, 1e-12);
  const double di = diversification_index(LossPanel::from_columns({f1, f2}), kind);
  EXPECT_NEAR(di, 1.5 / (8.0 / 9.0 + 2.0 / 3.0), 1e-12);
  EXPECT_GT(std::abs(di - 1.0), 1e-6);
}
