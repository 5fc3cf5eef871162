#include "startail/montecarlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace startail;

TEST(Wilson, ContainsPointAndStaysInUnitInterval) {
  for (std::uint64_t trials : {1U, 7U, 100U, 12345U})
    for (std::uint64_t hits = 0; hits <= trials; hits += std::max<std::uint64_t>(1, trials / 9)) {
      const auto ci = wilson_interval(hits, trials);
      const double ph = static_cast<double>(hits) / static_cast<double>(trials);
      ASSERT_LE(ci.lo, ph);
      ASSERT_GE(ci.hi, ph);
      ASSERT_GE(ci.lo, 0.0);
      ASSERT_LE(ci.hi, 1.0);
    }
  EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
}

TEST(Wilson, KnownValue) {
  // 50 of 100 at z = 1.96: centre 0.5, half-width 0.0961685
  const auto ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.lo, 0.4038315, 1e-7);
  EXPECT_NEAR(ci.hi, 0.5961685, 1e-7);
  EXPECT_EQ(wilson_interval(0, 10).lo, 0.0);
  EXPECT_GT(wilson_interval(0, 10).hi, 0.0);
}

TEST(McTail, ThresholdZero) {
  const auto est = mc_tail(5, 0.3, 2, 0.0, 500, 3);
  EXPECT_EQ(est.point, 1.0);
  EXPECT_EQ(est.hits, 500U);
}

TEST(McTail, TriangleHalf) {
  const auto est = mc_tail(3, 0.5, 2, 1.0, 1000000, 11, 0);
  const double se = std::sqrt(0.25 / 1e6);
  EXPECT_NEAR(est.point, 0.5, 3 * se);
  EXPECT_LE(est.ci95.lo, 0.5 + 3 * se);
  EXPECT_GE(est.ci95.hi, 0.5 - 3 * se);
}

TEST(McTail, CompleteGraph) {
  const auto est = mc_tail(6, 1.0, 3, max_star_count<double>(6, 3), 100, 1);
  EXPECT_EQ(est.point, 1.0);
}

TEST(McTail, WorkerCountInvariant) {
  const auto a = mc_tail(12, 0.3, 2, 60.0, 20000, 99, 1);
  const auto b = mc_tail(12, 0.3, 2, 60.0, 20000, 99, 4);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.ci95.lo, b.ci95.lo);
}

TEST(McTail, BelowResolutionFlag) {
  const auto est = mc_tail(10, 0.01, 2, 200.0, 1000, 1);
  EXPECT_TRUE(est.below_resolution());
  EXPECT_THROW(mc_tail(5, 0.5, 2, 1.0, 0, 1), std::invalid_argument);
}

TEST(Estimator, Parse) {
  EXPECT_EQ(parse_estimator("exact"), Estimator::exact);
  EXPECT_EQ(parse_estimator("mc"), Estimator::mc);
  EXPECT_EQ(parse_estimator("auto"), Estimator::automatic);
  EXPECT_THROW(parse_estimator("fast"), std::invalid_argument);
}

TEST(Sweep, SinglePoint) {
  SweepGrid g;
  g.n = {5};
  g.p = {0.3};
  const auto rows = run_sweep(g);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_EQ(rows[0].estimator, "exact_rational");
}

TEST(Sweep, ExactRowsMatchOracle) {
  SweepGrid g;
  g.n = {4};
  g.p = {0.25, 0.5, 0.75};
  g.estimator = Estimator::exact;
  const auto rows = run_sweep(g);
  ASSERT_EQ(rows.size(), 3U);
  for (const auto& row : rows) {
    const auto d = exact_star_distribution(4, row.p, 2);
    EXPECT_EQ(row.estimator, "exact_rational");
    EXPECT_DOUBLE_EQ(row.tail, to_double(*d.exact_tail(row.threshold)));
    EXPECT_DOUBLE_EQ(row.mu, star_mean<double>(4, row.p, 2));
  }
}

TEST(Sweep, ExactTailsMonotoneInPAtFixedThreshold) {
  // stochastic domination; the sweep thresholds move with mu, so fix x here
  for (double x : {1.0, 4.0, 9.0}) {
    double last = 0.0;
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double tail = exact_star_distribution(4, p, 2).tail(x);
      ASSERT_GE(tail, last) << x << " " << p;
      last = tail;
    }
  }
}

TEST(Sweep, GridOrder) {
  SweepGrid g;
  g.n = {5, 6};
  g.p = {0.2, 0.4};
  g.eps = {0.5, 1.0};
  const auto rows = run_sweep(g);
  ASSERT_EQ(rows.size(), 8U);
  EXPECT_EQ(rows[1].eps, 1.0);
  EXPECT_EQ(rows[2].p, 0.4);
  EXPECT_EQ(rows[4].n, 6U);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].index, i);
}

TEST(Sweep, RejectsMalformedGrids) {
  SweepGrid g;
  EXPECT_THROW(run_sweep(g), std::invalid_argument);
  g.n = {5};
  g.p = {1.5};
  EXPECT_THROW(run_sweep(g), std::invalid_argument);
  g.p = {0.5};
  g.r = {1};
  EXPECT_THROW(run_sweep(g), std::invalid_argument);
  g.r = {2};
  g.n = {30};
  g.estimator = Estimator::exact;
  EXPECT_THROW(run_sweep(g), BudgetExceeded);
}

TEST(Sweep, CsvIsDeterministicAcrossRunsAndWorkers) {
  SweepGrid g;
  g.n = {5, 20};
  g.p = {0.1, 0.3};
  g.eps = {1.0};
  g.replicates = 3000;
  g.seed = 7;
  const auto a = sweep_csv(run_sweep(g, 1));
  const auto b = sweep_csv(run_sweep(g, 1));
  const auto c = sweep_csv(run_sweep(g, 4));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "index,n,p,r,eps,mu,sigma2,Lambda,threshold,estimator,tail,ci_lo,ci_hi,hits,"
            "replicates,M,Phi,Phi_eps,Psi,upper_bound,upper_bound_log,markov,planting_log,"
            "appendix_best_log");
}

TEST(Sweep, MonteCarloRowsCarryIntervals) {
  SweepGrid g;
  g.n = {20};
  g.p = {0.2};
  g.estimator = Estimator::mc;
  g.replicates = 2000;
  const auto rows = run_sweep(g);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_EQ(rows[0].estimator, "mc");
  EXPECT_EQ(rows[0].replicates, 2000U);
  EXPECT_LE(rows[0].ci_lo, rows[0].tail);
  EXPECT_GE(rows[0].ci_hi, rows[0].tail);
}

TEST(FormatReal, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(kNaN), "nan");
  EXPECT_EQ(format_real(-kInf), "-inf");
  EXPECT_EQ(format_real(3.0), "3");
}
