#pragma once
// Simple undirected graphs on labeled vertices [0, n), seeded G(n,p)
// sampling, K_{1,r} counting and edge-disjoint star packings.

#include "startail/common.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace startail {

using Vertex = std::uint32_t;

// Unordered pair stored with u < v; ordering is lexicographic.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adjacency_(n) {}

  // Validates endpoints, rejects loops and duplicates; edges may come in
  // any order and orientation.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    for (auto& e : edges) {
      if (e.u == e.v) throw std::invalid_argument("self-loop in edge list");
      if (e.u >= n || e.v >= n)
        throw std::invalid_argument("edge endpoint outside [0, n)");
      e = make_edge(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw std::invalid_argument("duplicate edge in edge list");
    edges_ = std::move(edges);
    build();
  }

  static Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
  }

  // Hub 0 joined to leaves 1..leaves.
  static Graph star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
    return Graph(leaves + 1, std::move(edges));
  }

  // Parts [0, y) and [y, y+z), embedded in a host of n >= y+z vertices.
  static Graph complete_bipartite(std::size_t y, std::size_t z,
                                  std::size_t n = 0) {
    n = std::max(n, y + z);
    std::vector<Edge> edges;
    edges.reserve(y * z);
    for (Vertex a = 0; a < y; ++a)
      for (Vertex b = 0; b < z; ++b)
        edges.push_back({a, static_cast<Vertex>(y + b)});
    return Graph(n, std::move(edges));
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  // Ascending neighbor order.
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_);
    for (std::size_t v = 0; v < n_; ++v) d[v] = adjacency_[v].size();
    return d;
  }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (const auto& a : adjacency_) best = std::max(best, a.size());
    return best;
  }

  bool has_edge(Vertex a, Vertex b) const {
    return a != b && a < n_ && b < n_ && index_.contains(key(make_edge(a, b)));
  }

  // Position of the edge in edges(); throws when absent.
  std::size_t edge_index(Vertex a, Vertex b) const {
    const auto it = index_.find(key(make_edge(a, b)));
    if (a == b || it == index_.end())
      throw std::out_of_range("edge not present in graph");
    return it->second;
  }

  // Subgraph on the same vertex set keeping edges where keep(e) is true.
  template <typename Pred>
  Graph filter_edges(Pred&& keep) const {
    Graph out;
    out.n_ = n_;
    for (const auto& e : edges_)
      if (keep(e)) out.edges_.push_back(e);
    out.build();
    return out;
  }

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  std::uint64_t key(const Edge& e) const {
    return (static_cast<std::uint64_t>(e.u) << 32U) | e.v;
  }

  void build() {
    adjacency_.assign(n_, {});
    index_.clear();
    index_.reserve(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
      index_.emplace(key(e), static_cast<std::uint32_t>(i));
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

// Pair index of (u, v), u < v, in lexicographic order of all C(n,2) pairs.
inline std::uint64_t pair_index(std::uint64_t n, Vertex u, Vertex v) {
  return static_cast<std::uint64_t>(u) * (2 * n - u - 1) / 2 + (v - u - 1);
}

namespace detail {
template <typename OnEdge>
void for_each_sampled_pair(std::size_t n, double p, std::uint64_t seed,
                           OnEdge&& on_edge) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("edge probability outside [0, 1]");
  if (p == 0.0) return;
  std::uint64_t counter = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++counter)
      if (p == 1.0 || counter_uniform(seed, counter) < p) on_edge(u, v);
}
}  // namespace detail

// Pair k (lexicographic index) is present iff counter_uniform(seed, k) < p.
inline Graph sample_gnp(std::size_t n, double p, std::uint64_t seed) {
  std::vector<Edge> edges;
  detail::for_each_sampled_pair(n, p, seed,
                                [&](Vertex u, Vertex v) { edges.push_back({u, v}); });
  return Graph(n, std::move(edges));
}

// Degree sequence of sample_gnp(n, p, seed) without materializing the graph.
inline std::vector<std::size_t> sample_gnp_degrees(std::size_t n, double p,
                                                   std::uint64_t seed) {
  std::vector<std::size_t> deg(n, 0);
  detail::for_each_sampled_pair(n, p, seed, [&](Vertex u, Vertex v) {
    ++deg[u];
    ++deg[v];
  });
  return deg;
}

inline std::uint64_t count_stars_from_degrees(std::span<const std::size_t> degrees,
                                              std::size_t r) {
  if (r == 0) throw std::invalid_argument("star arm count must be >= 1");
  std::uint64_t total = 0;
  for (auto d : degrees) total += binomial_u64(d, r);
  return total;
}

// Number of (center, r-leaf-set) copies of K_{1,r}: sum of C(deg(v), r).
inline std::uint64_t count_stars(const Graph& g, std::size_t r) {
  return count_stars_from_degrees(g.degrees(), r);
}

struct Star {
  Vertex center = 0;
  std::vector<Vertex> leaves;  // ascending
  bool operator==(const Star&) const = default;
};

struct StarPacking {
  std::size_t k = 1;
  std::vector<Star> stars;
  std::size_t size() const { return stars.size(); }
  bool empty() const { return stars.empty(); }
  bool operator==(const StarPacking&) const = default;
};

// Every star has k distinct leaves joined to its center in g, and no edge
// is used twice across the packing.
inline bool is_valid_packing(const Graph& g, const StarPacking& packing) {
  std::unordered_set<std::size_t> used;
  for (const auto& s : packing.stars) {
    if (s.leaves.size() != packing.k) return false;
    for (auto leaf : s.leaves) {
      if (!g.has_edge(s.center, leaf)) return false;
      if (!used.insert(g.edge_index(s.center, leaf)).second) return false;
    }
  }
  return true;
}

// Scans centers in ascending order and repeatedly takes the k
// lowest-indexed unused incident edges while at least k remain. The result
// is maximal: afterwards no vertex keeps k unused incident edges.
inline StarPacking greedy_star_packing(const Graph& g, std::size_t k) {
  if (k == 0) throw std::invalid_argument("star arm count must be >= 1");
  StarPacking packing;
  packing.k = k;
  std::vector<bool> used(g.edge_count(), false);
  std::vector<Vertex> free_leaves;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) < k) continue;
    free_leaves.clear();
    for (auto w : g.neighbors(v))
      if (!used[g.edge_index(v, w)]) free_leaves.push_back(w);
    for (std::size_t start = 0; start + k <= free_leaves.size(); start += k) {
      Star s;
      s.center = v;
      s.leaves.assign(free_leaves.begin() + static_cast<std::ptrdiff_t>(start),
                      free_leaves.begin() + static_cast<std::ptrdiff_t>(start + k));
      for (auto w : s.leaves) used[g.edge_index(v, w)] = true;
      packing.stars.push_back(std::move(s));
    }
  }
  return packing;
}

// Sum over vertices of floor(deg(v)/k). Stars centered at v use k distinct
// edges at v, so this bounds every edge-disjoint packing.
inline std::uint64_t packing_upper_bound(const Graph& g, std::size_t k) {
  if (k == 0) throw std::invalid_argument("star arm count must be >= 1");
  std::uint64_t total = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) total += g.degree(v) / k;
  return total;
}

// Deletes every edge incident to a center of the packing.
inline Graph remove_center_incident_edges(const Graph& g,
                                          const StarPacking& packing) {
  std::vector<bool> is_center(g.vertex_count(), false);
  for (const auto& s : packing.stars) {
    if (s.center >= g.vertex_count())
      throw std::invalid_argument("packing center outside the graph");
    for (auto leaf : s.leaves)
      if (!g.has_edge(s.center, leaf))
        throw std::invalid_argument("packing references an edge absent from the graph");
    is_center[s.center] = true;
  }
  return g.filter_edges(
      [&](const Edge& e) { return !is_center[e.u] && !is_center[e.v]; });
}

// "n m" then m lines "u v" with u < v in ascending lexicographic order.
inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

inline Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0)
    throw std::invalid_argument("edge list: bad header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1;
    long long v = -1;
    if (!(in >> u >> v) || u < 0 || v < 0)
      throw std::invalid_argument("edge list: truncated or malformed edge line");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("edge list: trailing content");
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

}  // namespace startail
