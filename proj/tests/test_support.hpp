#pragma once
// Test-only brute-force references, written independently of the library
// algorithms they check.

#include "startail/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace startail::ref {

// Copies of K_{1,r} by explicit enumeration of (center, leaf subset) pairs
// over all vertex subsets, without using degrees.
inline std::uint64_t enumerate_star_copies(const Graph& g, std::size_t r) {
  const std::size_t n = g.vertex_count();
  std::uint64_t count = 0;
  for (Vertex c = 0; c < n; ++c) {
    for (std::uint32_t s = 0; s < (1U << n); ++s) {
      if (static_cast<std::size_t>(__builtin_popcount(s)) != r || (s >> c & 1U)) continue;
      bool ok = true;
      for (Vertex v = 0; v < n && ok; ++v)
        if ((s >> v & 1U) && !g.has_edge(c, v)) ok = false;
      if (ok) ++count;
    }
  }
  return count;
}

// Largest edge-disjoint K_{1,k} packing by exhaustive search over star
// choices: each step either stops or adds a star with the next center.
inline std::uint64_t brute_max_packing(const Graph& g, std::size_t k) {
  const auto edges = g.edges();
  std::vector<bool> used(edges.size(), false);
  std::uint64_t best = 0;
  std::function<void(Vertex, std::uint64_t)> dfs = [&](Vertex from, std::uint64_t size) {
    best = std::max(best, size);
    for (Vertex c = from; c < g.vertex_count(); ++c) {
      std::vector<std::size_t> free;
      for (auto w : g.neighbors(c)) {
        const auto idx = g.edge_index(c, w);
        if (!used[idx]) free.push_back(idx);
      }
      if (free.size() < k) continue;
      const std::size_t f = free.size();
      for (std::uint32_t s = 0; s < (1U << f); ++s) {
        if (static_cast<std::size_t>(__builtin_popcount(s)) != k) continue;
        for (std::size_t i = 0; i < f; ++i)
          if (s >> i & 1U) used[free[i]] = true;
        dfs(c, size + 1);  // the same center may take further stars
        for (std::size_t i = 0; i < f; ++i)
          if (s >> i & 1U) used[free[i]] = false;
      }
    }
  };
  dfs(0, 0);
  return best;
}

// X_D by trying all 2^m edge subsets.
inline std::uint64_t brute_bounded_star_count(const Graph& g, std::size_t r, double cap) {
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  const auto limit = static_cast<std::size_t>(std::floor(cap));
  std::uint64_t best = 0;
  for (std::uint64_t s = 0; s < (1ULL << m); ++s) {
    std::vector<std::size_t> deg(g.vertex_count(), 0);
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(s >> i & 1ULL)) continue;
      if (++deg[edges[i].u] > limit || ++deg[edges[i].v] > limit) ok = false;
    }
    if (!ok) continue;
    std::uint64_t stars = 0;
    for (auto d : deg) stars += binomial_u64(d, r);
    best = std::max(best, stars);
  }
  return best;
}

// All graphs on n vertices, bit k of the mask = k-th lexicographic pair.
template <typename F>
void for_each_graph(std::size_t n, F&& f) {
  std::vector<Edge> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) pairs.push_back({u, v});
  for (std::uint64_t mask = 0; mask < (1ULL << pairs.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1ULL) edges.push_back(pairs[k]);
    f(mask, Graph(n, std::move(edges)));
  }
}

}  // namespace startail::ref
