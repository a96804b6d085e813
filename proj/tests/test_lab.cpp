#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "walkabout/error.hpp"
#include "walkabout/lab.hpp"
#include "walkabout/report.hpp"

using namespace walkabout;
using namespace walkabout::lab;

namespace {

StarCurveParams small_stars() {
  StarCurveParams p;
  p.n = 500;
  p.d = 20;
  p.t = 10;
  p.budgets = {0, 10, 2000};
  p.trials = 12;
  p.seed = 3;
  return p;
}

}  // namespace

TEST(Regime, Guards) {
  const auto ok = check_regime(100000, 50, 1);
  EXPECT_FALSE(ok.violated());
  EXPECT_NEAR(ok.d_floor, 4 * std::log(100000.0), 1e-9);
  EXPECT_NEAR(ok.t_ceiling, 100000 / (10.0 * 2500), 1e-9);
  const auto bad = check_regime(4000, 40, 10);
  EXPECT_TRUE(bad.violated());
  EXPECT_TRUE(bad.d_ok);
  EXPECT_FALSE(bad.t_ok);
  EXPECT_FALSE(bad.message().empty());
}

TEST(LabPsi, DefaultsToDOverTClamped) {
  EXPECT_DOUBLE_EQ(lab_psi(std::nullopt, 40, 10), 0.8);
  EXPECT_DOUBLE_EQ(lab_psi(0.3, 40, 10), 0.3);
  EXPECT_DOUBLE_EQ(lab_psi(std::nullopt, 5, 10), 0.5);
}

TEST(Stars, ZeroBudgetFindsNothingAndCurveIsMonotone) {
  const auto r = star_discovery_curve(small_stars());
  EXPECT_TRUE(r.monotone);
  EXPECT_EQ(r.curve.size(), all_crawlers().size() * 3);
  for (const auto& pt : r.curve) {
    EXPECT_EQ(pt.trials, 12u);
    if (pt.budget == 0) {
      EXPECT_EQ(pt.fraction_found, 0.0) << pt.strategy;
    }
    if (pt.budget == 2000) {
      EXPECT_GE(pt.fraction_found, 0.9) << pt.strategy;
    }
    EXPECT_DOUBLE_EQ(pt.predicted_mean, 8.0 * pt.budget / 200.0);
  }
  for (const auto& t : r.trials) EXPECT_LE(t.queries_used, t.budget);
}

TEST(Stars, SameSeedSameBytesAcrossJobCounts) {
  auto p = small_stars();
  p.jobs = 1;
  const std::string a = to_json(star_discovery_curve(p)).dump();
  p.jobs = 3;
  const std::string b = to_json(star_discovery_curve(p)).dump();
  EXPECT_EQ(a, b);
  p.seed = 4;
  EXPECT_NE(a, to_json(star_discovery_curve(p)).dump());
}

TEST(Stars, CsvHasFixedHeader) {
  auto p = small_stars();
  p.trials = 2;
  p.strategies = {CrawlerKind::BFS};
  std::ostringstream os;
  const auto r = star_discovery_curve(p);
  write_trials_csv(os, r.trials);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "strategy,arm,trial,budget,found,observed,queries,estimate,truth");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 6u);
}

TEST(Distinguish, FullCrawlIsExactOnBothArms) {
  DistinguishParams p;
  p.n = 150;
  p.d = 10;
  p.t = 5;
  p.budget = 10 * 150 * 10;
  p.trials = 16;
  p.seed = 2;
  const auto r = indistinguishability_experiment(p);
  EXPECT_EQ(r.decorated.accuracy, 1.0);
  EXPECT_EQ(r.undecorated.accuracy, 1.0);
  for (const auto& t : r.trials) EXPECT_EQ(*t.estimate, *t.truth);
  EXPECT_FALSE(r.indistinguishable);
}

TEST(Distinguish, ArmsBalancedAndOrderRatioNearTwo) {
  DistinguishParams p;
  p.n = 300;
  p.d = 20;
  p.t = 10;
  p.trials = 120;
  p.order_samples = 200;
  p.seed = 5;
  const auto r = indistinguishability_experiment(p);
  EXPECT_EQ(r.decorated.trials + r.undecorated.trials, 120u);
  EXPECT_NEAR(static_cast<double>(r.decorated.trials), 60.0, 3 * std::sqrt(30.0));
  EXPECT_NEAR(r.order_ratio, 2.0, 0.15);
  EXPECT_EQ(r.budget, 10u);
  EXPECT_TRUE(r.indistinguishable);
}

TEST(Distinguish, AverageDegreeEstimatorRuns) {
  DistinguishParams p;
  p.n = 200;
  p.d = 16;
  p.t = 8;
  p.trials = 6;
  p.estimator = LabEstimator::AvgDegree;
  p.seed = 8;
  const auto r = indistinguishability_experiment(p);
  for (const auto& t : r.trials) {
    ASSERT_TRUE(t.estimate.has_value());
    EXPECT_GT(*t.estimate, 0.0);
    EXPECT_LE(t.queries_used, r.budget);
  }
  EXPECT_EQ(lab_estimator_from_string(to_string(LabEstimator::AvgDegree)), LabEstimator::AvgDegree);
}

TEST(Biased, GapMatchesStarredFraction) {
  BiasedParams p;
  p.n = 400;
  p.d = 20;
  p.t = 10;
  p.budgets = {10};
  p.trials = 40;
  p.seed = 7;
  const auto r = biased_function_experiment(p);
  EXPECT_NEAR(r.mean_gap, r.expected_gap, 0.02);
  EXPECT_EQ(r.center_requirement, static_cast<std::size_t>(std::ceil(std::log(10.0) / 0.04)));
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_TRUE(r.points[0].below_requirement);
}

TEST(Biased, EasyRegimeSucceeds) {
  BiasedParams p;
  p.n = 300;
  p.d = 20;
  p.t = 10;
  p.epsilon = 0.5;
  p.budgets = {1000000};
  p.trials = 40;
  p.seed = 1;
  const auto r = biased_function_experiment(p);
  EXPECT_GE(r.points[0].success_rate, 0.95);
  EXPECT_NEAR(r.max_gap_deviation, 0.0, 1e-12);
}

TEST(Biased, RejectsEpsilonAboveHalf) {
  BiasedParams p;
  p.epsilon = 0.6;
  EXPECT_THROW(biased_function_experiment(p), Error);
}

TEST(Observed, SingleQueryObservesNothing) {
  ObservedParams p;
  p.n = 2000;
  p.d = 10;
  p.q = 1;
  p.trials = 30;
  const auto r = observed_vertex_audit(p);
  EXPECT_EQ(r.p_observed, 0.0);
  EXPECT_EQ(r.edge_bound_rate, 1.0);
  EXPECT_DOUBLE_EQ(r.observed_bound, 0.0);
}

TEST(Observed, BoundFormulas) {
  ObservedParams p;
  p.n = 5000;
  p.d = 10;
  p.psi = 0.5;
  p.q = 10;
  p.trials = 20;
  p.trials_per_graph = 10;
  const auto r = observed_vertex_audit(p);
  EXPECT_NEAR(r.observed_bound, 45 * 110.25 / 5000, 1e-12);
  EXPECT_NEAR(r.edge_bound, 100 * 100 * 10 / 5000.0, 1e-12);
  EXPECT_EQ(r.trials.size(), 20u);
  EXPECT_LE(r.p_observed, 1.0);
}

TEST(MixingTrend, DecoratedWithinFactor) {
  DecoratedMixingParams p;
  p.n = 150;
  p.d = 12;
  p.ts = {3, 6};
  const auto rows = decorated_mixing_trend(p);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_GE(row.tau_decorated, row.tau_base);
    EXPECT_LE(row.ratio, 12.0);
    EXPECT_FALSE(row.lower_estimate);
    EXPECT_GT(row.decorated_vertices, row.base_vertices);
  }
}

TEST(MixingTrend, SmallerPsiMixesSlower) {
  PsiMixingParams p;
  p.n = 150;
  p.d = 12;
  p.psis = {0.8, 0.2, 0.05};
  p.seeds = 2;
  const auto rows = psi_mixing_trend(p);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.increasing);
    EXPECT_EQ(row.taus.size(), 3u);
  }
}

TEST(Chernoff, SmallInstanceBelowBound) {
  ChernoffParams p;
  p.n = 200;
  p.d = 12;
  p.cs = {20, 50};
  p.trials = 200;
  const auto r = chernoff_check(p);
  EXPECT_NEAR(r.mu, 0.5, 1e-12);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.empirical, row.bound);
    EXPECT_EQ(row.steps, static_cast<std::size_t>(row.c) * r.t_mix);
  }
}
