#include "startail/constructions.hpp"
#include "startail/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace startail;

TEST(ClusterConstants, Values) {
  const ClusterConstants two(2);
  EXPECT_EQ(two.x0, 128U);
  EXPECT_EQ(two.n0, 384U);
  EXPECT_EQ(two.budget_factor, BigInt(147456));
  const ClusterConstants three(3);
  EXPECT_EQ(three.x0, 3456U);
  EXPECT_EQ(three.n0, 13824U);
}

TEST(Cluster, BipartiteExample) {
  const auto c = build_cluster_graph(10000, 2, 1000);
  EXPECT_EQ(c.case_label, ClusterCase::bipartite);
  EXPECT_EQ(c.y, 8U);
  EXPECT_EQ(c.z, 63U);
  EXPECT_EQ(c.edge_count(), 504U);
  EXPECT_EQ(c.proof_star_lower_bound, BigInt(1764));
  EXPECT_EQ(c.stars, BigInt(8 * 1953 + 63 * 28));
  ASSERT_TRUE(c.graph.has_value());
  EXPECT_EQ(c.graph->vertex_count(), 10000U);
  EXPECT_EQ(BigInt(count_stars(*c.graph, 2)), c.stars);
  EXPECT_TRUE(c.within_budget);
  EXPECT_TRUE(c.side_conditions);
  EXPECT_EQ(c.to_json()["case"], "i");
}

TEST(Cluster, SmallNExample) {
  const auto c = build_cluster_graph(100, 2, 10);
  EXPECT_EQ(c.case_label, ClusterCase::complete_n0);
  EXPECT_EQ(c.vertices, 100U);
  EXPECT_EQ(c.edge_count(), 4950U);
  EXPECT_EQ(c.to_json()["case"], "ii");
}

TEST(Cluster, SmallXExample) {
  const auto c = build_cluster_graph(400, 2, 50);
  EXPECT_EQ(c.case_label, ClusterCase::small_x);
  EXPECT_EQ(c.vertices, 384U);
  ASSERT_TRUE(c.graph.has_value());
  EXPECT_EQ(c.graph->vertex_count(), 400U);
  EXPECT_EQ(c.graph->edge_count(), 384U * 383U / 2);
  EXPECT_GE(count_stars(*c.graph, 2), 50U);
}

TEST(Cluster, LargeXUsesCompleteGraph) {
  // x > n^3 / n0^2 = 400^3 / 147456 ~ 434
  const auto c = build_cluster_graph(400, 2, 435);
  EXPECT_EQ(c.case_label, ClusterCase::complete_n);
  EXPECT_EQ(c.to_json()["case"], "iii");
  EXPECT_EQ(build_cluster_graph(400, 2, 434).case_label, ClusterCase::bipartite);
}

TEST(Cluster, RejectsInfeasibleTargets) {
  EXPECT_THROW(build_cluster_graph(5, 2, 0), std::invalid_argument);
  EXPECT_THROW(build_cluster_graph(5, 2, 31), std::invalid_argument);
  EXPECT_NO_THROW(build_cluster_graph(5, 2, 30));
}

TEST(Cluster, InvariantsOverGrid) {
  for (std::uint64_t r : {2U, 3U})
    for (std::uint64_t n : {5U, 9U, 40U, 383U, 384U, 385U, 1000U, 5000U, 10000U}) {
      const double full = max_star_count<double>(n, r);
      for (double xf = 1; xf <= full; xf = std::max(xf + 1, std::ceil(xf * 1.7))) {
        const auto x = static_cast<std::uint64_t>(xf);
        const auto c = build_cluster_graph(n, r, x);
        ASSERT_TRUE(c.enough_stars) << r << " " << n << " " << x;
        ASSERT_TRUE(c.within_budget) << r << " " << n << " " << x;
        ASSERT_TRUE(c.side_conditions) << r << " " << n << " " << x;
        ASSERT_LE(c.vertices, n);
        ASSERT_LE(static_cast<double>(c.edge_count()), c.edge_budget * (1 + 1e-12));
        if (c.graph && c.edge_count() <= 200000)
          ASSERT_EQ(BigInt(count_stars(*c.graph, r)), c.stars);
      }
    }
}

TEST(Planting, Examples) {
  EXPECT_EQ(cluster_lower_bound(7, 1.0, 2, 20).value, 1.0);
  const auto b = cluster_lower_bound(10000, 0.01, 2, 1000);
  EXPECT_EQ(b.edges, 504U);
  EXPECT_NEAR(b.log_value, -1008 * std::log(10.0), 1e-9);
  EXPECT_EQ(cluster_lower_bound_exact(3, Rational(1, 2), 2, 1), Rational(1, 8));
  EXPECT_LE(cluster_lower_bound_exact(3, Rational(1, 2), 2, 1),
            *exact_star_distribution(3, Probability(Rational(1, 2)), 2).exact_tail(1));
}

TEST(Planting, BelowExactTail) {
  for (std::uint64_t n = 3; n <= 6; ++n) {
    const auto census = star_census(n, 2);
    for (int k = 1; k <= 9; ++k) {
      const Rational p(k, 10);
      const auto d = census.distribution(Probability(p));
      const auto full = max_star_count<std::uint64_t>(n, 2);
      for (std::uint64_t x = 1; x <= full; ++x)
        ASSERT_LE(cluster_lower_bound_exact(n, p, 2, x), *d.exact_tail(static_cast<double>(x)))
            << n << " " << k << " " << x;
    }
  }
}

TEST(Planting, MonotoneInP) {
  for (std::uint64_t x : {1U, 50U, 400U}) {
    double last = -kInf;
    for (double p = 0.05; p <= 1.0; p += 0.05) {
      const double v = cluster_lower_bound(30, p, 2, x).log_value;
      ASSERT_GE(v, last);
      last = v;
    }
  }
}

TEST(Disjoint, Examples) {
  EXPECT_NEAR(disjoint_lower_bound(3, 0.1, 2, 1).factor, 0.029403, 1e-15);
  EXPECT_NEAR(disjoint_lower_bound(3, 1e-9, 2, 0).factor, 1.0, 1e-12);
  const auto b = disjoint_lower_bound(3, 0.1, 2, 1);
  EXPECT_EQ(b.log_multiplier, -1.0);
  EXPECT_NEAR(b.log_bound, std::log(0.029403) - 1.0, 1e-12);
  EXPECT_EQ(disjoint_lower_bound(3, 0.1, 2, 4).log_factor, -kInf);
  EXPECT_FALSE(disjoint_lower_bound(100, 0.5, 2, 1).p_in_range);
  EXPECT_TRUE(disjoint_lower_bound(100, 1e-3, 2, 1).p_in_range);
}

TEST(Disjoint, DiagnosticRatioAgainstOracle) {
  const auto d = exact_star_distribution(3, Probability(Rational(1, 10)), 2);
  const double mu = star_mean<double>(3, 0.1, 2);
  const auto from = static_cast<std::uint64_t>(std::ceil(2 * mu));
  double sum = 0.0;
  for (std::uint64_t m = from; m <= 3; ++m) sum += disjoint_lower_bound(3, 0.1, 2, m).factor;
  const double tail = d.tail(static_cast<double>(from));
  EXPECT_GT(sum, 0.0);
  EXPECT_LE(sum, tail * std::exp(UnspecifiedConstants{}.b));
}

TEST(Appendix, EdgeTermExample) {
  UnspecifiedConstants k;
  k.beta_edges = 2.0;  // brings t = 1 into sigma <= t <= beta mu
  const auto low = appendix_lower_bounds(3, 0.5, 2, 1.0, 0.1, k);
  const double expected = -chernoff_phi(4.0 / 3.0) * 0.5625 / 1.875;
  EXPECT_NEAR(low.edges.log_value, expected, 1e-12);
  EXPECT_TRUE(low.edges.in_range);
  ASSERT_TRUE(low.best_log.has_value());
  EXPECT_GE(*low.best_log, expected);
  EXPECT_FALSE(low.chernoff.in_range);
}

TEST(Appendix, SmallDeviationEdgeTermTendsToOne) {
  const auto low = appendix_lower_bounds(3, 0.5, 2, 1e-9, 0.1);
  EXPECT_NEAR(low.edges.value, 1.0, 1e-12);
}

TEST(Appendix, RangeFlags) {
  const auto dense = appendix_lower_bounds(50, 0.3, 2, 5.0, 0.1);
  EXPECT_FALSE(dense.chernoff.in_range);
  const auto sparse = appendix_lower_bounds(1000, 1e-5, 2, 1.0, 0.1);
  EXPECT_TRUE(sparse.chernoff.in_range);
  EXPECT_FALSE(sparse.edges.in_range);
  UnspecifiedConstants big_n0;
  big_n0.n0 = 1e9;
  const auto none = appendix_lower_bounds(1000, 1e-5, 2, 1.0, 0.1, big_n0);
  EXPECT_FALSE(none.best.has_value());
  EXPECT_TRUE(none.to_json()["best"].is_null());
}
