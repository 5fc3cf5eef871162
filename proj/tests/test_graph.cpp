#include "startail/graph.hpp"
#include "startail/oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace startail;

namespace {

Graph triangle() { return Graph::complete(3); }

}  // namespace

TEST(Graph, RejectsLoopsDuplicatesAndOutOfRange) {
  EXPECT_THROW(Graph(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 3}}), std::invalid_argument);
}

TEST(Graph, NormalizesAndIndexesEdges) {
  const Graph g(4, {{3, 1}, {0, 2}, {2, 1}});
  ASSERT_EQ(g.edge_count(), 3U);
  EXPECT_EQ(g.edges()[0], (Edge{0, 2}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
  EXPECT_EQ(g.edges()[2], (Edge{1, 3}));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_EQ(g.degree(1), 2U);
  EXPECT_EQ(g.max_degree(), 2U);
  EXPECT_THROW(g.edge_index(0, 3), std::out_of_range);
}

TEST(Graph, DegreeMatchesIncidentEdges) {
  ref::for_each_graph(5, [](std::uint64_t, const Graph& g) {
    std::vector<std::size_t> deg(5, 0);
    for (const auto& e : g.edges()) {
      ++deg[e.u];
      ++deg[e.v];
    }
    ASSERT_EQ(g.degrees(), deg);
  });
}

TEST(Sampling, ExtremeProbabilitiesAreDeterministic) {
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    EXPECT_EQ(sample_gnp(5, 0.0, seed).edge_count(), 0U);
    EXPECT_EQ(sample_gnp(5, 1.0, seed), Graph::complete(5));
  }
}

TEST(Sampling, RejectsInvalidProbability) {
  EXPECT_THROW(sample_gnp(4, -0.1, 1), std::invalid_argument);
  EXPECT_THROW(sample_gnp(4, 1.5, 1), std::invalid_argument);
}

TEST(Sampling, SameSeedSameGraph) {
  EXPECT_EQ(sample_gnp(30, 0.3, 42), sample_gnp(30, 0.3, 42));
  EXPECT_NE(sample_gnp(30, 0.3, 42), sample_gnp(30, 0.3, 43));
  const auto g = sample_gnp(30, 0.3, 42);
  EXPECT_EQ(sample_gnp_degrees(30, 0.3, 42), g.degrees());
}

TEST(Sampling, GoldenEdgeList) {
  // frozen output of the counter-based sampler; a change here breaks every
  // recorded sweep
  const auto text = to_edge_list(sample_gnp(6, 0.5, 2024));
  EXPECT_EQ(text, "6 10\n0 1\n0 2\n0 4\n0 5\n1 3\n1 4\n1 5\n2 4\n2 5\n3 4\n");
  EXPECT_EQ(parse_edge_list(text), sample_gnp(6, 0.5, 2024));
  // degrees 4,4,3,2,4,3
  EXPECT_EQ(count_stars(sample_gnp(6, 0.5, 2024), 2), 25U);
}

TEST(Sampling, MeanEdgeCountMatchesBinomial) {
  constexpr int kSeeds = 100000;
  double sum = 0.0;
  for (int s = 0; s < kSeeds; ++s) sum += static_cast<double>(sample_gnp(4, 0.5, s).edge_count());
  const double mean = sum / kSeeds;
  const double se = std::sqrt(6 * 0.25 / kSeeds);
  EXPECT_NEAR(mean, 3.0, 3.0 * se);
}

TEST(Stars, SpecExamples) {
  EXPECT_EQ(count_stars(Graph::star(3), 2), 3U);
  EXPECT_EQ(count_stars(Graph(5), 2), 0U);
  EXPECT_EQ(count_stars(Graph(5), 1), 0U);
  EXPECT_EQ(count_stars(triangle(), 2), 3U);
  EXPECT_THROW(count_stars(triangle(), 0), std::invalid_argument);
}

TEST(Stars, DegreeFormulaMatchesCopyEnumeration) {
  for (std::size_t n = 1; n <= 6; ++n)
    ref::for_each_graph(n, [&](std::uint64_t mask, const Graph& g) {
      for (std::size_t r = 1; r <= 4; ++r)
        ASSERT_EQ(count_stars(g, r), ref::enumerate_star_copies(g, r))
            << "n=" << n << " mask=" << mask << " r=" << r;
    });
}

TEST(Packing, SpecExamples) {
  const auto hub = greedy_star_packing(Graph::star(5), 2);
  ASSERT_EQ(hub.size(), 2U);
  for (const auto& s : hub.stars) EXPECT_EQ(s.center, 0U);
  EXPECT_EQ(greedy_star_packing(triangle(), 2).size(), 1U);
  EXPECT_EQ(greedy_star_packing(Graph(4), 1).size(), 0U);

  EXPECT_EQ(packing_upper_bound(Graph::star(5), 2), 2U);
  EXPECT_EQ(packing_upper_bound(triangle(), 2), 3U);
  EXPECT_EQ(packing_upper_bound(Graph(4), 3), 0U);
}

TEST(Packing, GreedyOrderIsLowestIndexedEdges) {
  const auto packing = greedy_star_packing(Graph::star(5), 2);
  ASSERT_EQ(packing.size(), 2U);
  EXPECT_EQ(packing.stars[0].leaves, (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(packing.stars[1].leaves, (std::vector<Vertex>{3, 4}));
}

TEST(Packing, GreedyIsValidAndMaximal) {
  for (std::size_t n = 2; n <= 6; ++n)
    ref::for_each_graph(n, [&](std::uint64_t, const Graph& g) {
      for (std::size_t k = 1; k <= 3; ++k) {
        const auto packing = greedy_star_packing(g, k);
        ASSERT_TRUE(is_valid_packing(g, packing));
        std::vector<std::size_t> unused = g.degrees();
        for (const auto& s : packing.stars)
          for (auto leaf : s.leaves) {
            --unused[s.center];
            --unused[leaf];
          }
        for (auto u : unused) ASSERT_LT(u, k);
      }
    });
}

TEST(Packing, GreedyExactUpperChain) {
  for (std::size_t n = 2; n <= 6; ++n)
    ref::for_each_graph(n, [&](std::uint64_t mask, const Graph& g) {
      if (g.edge_count() > 10) return;
      for (std::size_t k = 1; k <= 3; ++k) {
        const auto greedy = greedy_star_packing(g, k).size();
        const auto exact = exact_max_star_packing(g, k);
        ASSERT_LE(greedy, exact) << "mask=" << mask;
        ASSERT_LE(exact, packing_upper_bound(g, k)) << "mask=" << mask;
        if (n <= 5) {
          ASSERT_EQ(exact, ref::brute_max_packing(g, k)) << "mask=" << mask;
        }
      }
    });
}

TEST(Packing, InvalidPackingDetected) {
  StarPacking p;
  p.k = 2;
  p.stars.push_back({0, {1, 2}});
  p.stars.push_back({0, {2, 3}});
  EXPECT_FALSE(is_valid_packing(Graph::star(4), p));
}

TEST(Removal, SpecExamples) {
  const Graph hub = Graph::star(5);
  const auto after = remove_center_incident_edges(hub, greedy_star_packing(hub, 2));
  EXPECT_EQ(after.vertex_count(), 6U);
  EXPECT_EQ(after.edge_count(), 0U);

  StarPacking at0;
  at0.k = 2;
  at0.stars.push_back({0, {1, 2}});
  const auto rest = remove_center_incident_edges(triangle(), at0);
  ASSERT_EQ(rest.edge_count(), 1U);
  EXPECT_TRUE(rest.has_edge(1, 2));

  EXPECT_EQ(remove_center_incident_edges(triangle(), StarPacking{}), triangle());
}

TEST(Removal, RejectsForeignPacking) {
  StarPacking bad;
  bad.k = 1;
  bad.stars.push_back({0, {3}});
  EXPECT_THROW(remove_center_incident_edges(triangle(), bad), std::invalid_argument);
}

TEST(Removal, NeverIncreasesDegreesAndClearsCenters) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = sample_gnp(9, 0.4, seed);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto packing = greedy_star_packing(g, k);
      const auto h = remove_center_incident_edges(g, packing);
      for (Vertex v = 0; v < 9; ++v) ASSERT_LE(h.degree(v), g.degree(v));
      for (const auto& s : packing.stars) ASSERT_EQ(h.degree(s.center), 0U);
    }
  }
}

TEST(EdgeList, FormatAndParse) {
  const Graph g(4, {{2, 3}, {0, 1}});
  EXPECT_EQ(to_edge_list(g), "4 2\n0 1\n2 3\n");
  EXPECT_EQ(parse_edge_list("4 2\n0 1\n2 3\n"), g);
  EXPECT_THROW(parse_edge_list("4 2\n0 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_edge_list("4 1\n0 1\n2 3\n"), std::invalid_argument);
  EXPECT_THROW(parse_edge_list("x"), std::invalid_argument);
  EXPECT_THROW(parse_edge_list("3 1\n0 0\n"), std::invalid_argument);
}
