#pragma once
// Exhaustive ground truth at tiny scale: exact star-count laws over all
// graphs on n vertices, exact bounded star counts X_D, exact maximum star
// packings N_k, and exact tails of Z_C for indicator families.

#include "startail/common.hpp"
#include "startail/graph.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace startail {

// Thrown when an exhaustive oracle is asked for an instance beyond its
// enumeration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxEnumeratedPairs = 24;
inline constexpr std::size_t kMaxSearchEdges = 20;
inline constexpr std::size_t kMaxGroundSet = 20;
inline constexpr std::size_t kMaxFamily = 12;

// Finite law of a nonnegative integer random variable. `mass` is always
// populated; `exact` holds the same law in rationals when it was derived
// from an exactly representable probability.
struct Distribution {
  std::map<std::uint64_t, double> mass;
  std::optional<std::map<std::uint64_t, Rational>> exact;

  static Distribution from_exact(std::map<std::uint64_t, Rational> law) {
    Distribution d;
    for (auto it = law.begin(); it != law.end();) {
      if (it->second == 0) {
        it = law.erase(it);
      } else {
        d.mass[it->first] = to_double(it->second);
        ++it;
      }
    }
    d.exact = std::move(law);
    return d;
  }

  static Distribution from_mass(std::map<std::uint64_t, double> law) {
    Distribution d;
    for (const auto& [v, w] : law)
      if (w != 0.0) d.mass[v] = w;
    return d;
  }

  bool is_exact() const { return exact.has_value(); }

  double total_mass() const {
    double s = 0.0;
    for (const auto& [v, w] : mass) s += w;
    return s;
  }

  double probability(std::uint64_t value) const {
    const auto it = mass.find(value);
    return it == mass.end() ? 0.0 : it->second;
  }

  // Pr(X >= x).
  double tail(double x) const {
    if (exact) return to_double(*exact_tail(x));
    double s = 0.0;
    for (const auto& [v, w] : mass)
      if (static_cast<double>(v) >= x) s += w;
    return s;
  }

  std::optional<Rational> exact_tail(double x) const {
    if (!exact) return std::nullopt;
    Rational s = 0;
    for (const auto& [v, w] : *exact)
      if (static_cast<double>(v) >= x) s += w;
    return s;
  }

  std::optional<Rational> exact_mean() const {
    if (!exact) return std::nullopt;
    Rational s = 0;
    for (const auto& [v, w] : *exact) s += w * v;
    return s;
  }

  std::optional<Rational> exact_variance() const {
    if (!exact) return std::nullopt;
    Rational m1 = 0;
    Rational m2 = 0;
    for (const auto& [v, w] : *exact) {
      m1 += w * v;
      m2 += w * BigInt(v) * BigInt(v);
    }
    return m2 - m1 * m1;
  }

  double mean() const {
    if (exact) return to_double(*exact_mean());
    double s = 0.0;
    for (const auto& [v, w] : mass) s += w * static_cast<double>(v);
    return s;
  }

  double variance() const {
    if (exact) return to_double(*exact_variance());
    const double m = mean();
    double s = 0.0;
    for (const auto& [v, w] : mass) {
      const double d = static_cast<double>(v) - m;
      s += w * d * d;
    }
    return s;
  }

  // {"support": [[value, numerator, denominator], ...]} in rational mode,
  // {"support": [[value, probability], ...]} otherwise (17 significant
  // digits). Integers of any size are written as bare JSON numbers.
  std::string to_json() const {
    std::string out = "{\"support\": [";
    bool first = true;
    if (exact) {
      for (const auto& [v, w] : *exact) {
        if (!first) out += ", ";
        first = false;
        out += "[" + std::to_string(v) + ", " +
               boost::multiprecision::numerator(w).str() + ", " +
               boost::multiprecision::denominator(w).str() + "]";
      }
    } else {
      char buf[40];
      for (const auto& [v, w] : mass) {
        if (!first) out += ", ";
        first = false;
        std::snprintf(buf, sizeof buf, "%.17g", w);
        out += "[" + std::to_string(v) + ", " + buf + "]";
      }
    }
    out += "]}";
    return out;
  }
};

// Graph on n vertices whose edge set is the set bits of `mask`, bit k
// standing for the k-th pair in lexicographic order.
inline Graph graph_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Edge> edges;
  std::uint64_t k = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v, ++k)
      if ((mask >> k) & 1U) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

// counts[value][k] = number of graphs on n vertices with k edges whose
// statistic equals value. Under G(n,p) every such graph has probability
// p^k (1-p)^(pairs-k), so one census serves every p.
struct GraphCensus {
  std::size_t n = 0;
  std::size_t pairs = 0;
  std::map<std::uint64_t, std::vector<std::uint64_t>> counts;

  Distribution distribution(const Probability& p) const {
    if (p.is_exact()) {
      const Rational q = *p.exact();
      std::vector<Rational> weight(pairs + 1);
      for (std::size_t k = 0; k <= pairs; ++k)
        weight[k] = ipow(q, k) * ipow(Rational(1) - q, pairs - k);
      std::map<std::uint64_t, Rational> law;
      for (const auto& [value, by_edges] : counts) {
        Rational s = 0;
        for (std::size_t k = 0; k <= pairs; ++k)
          if (by_edges[k] != 0) s += weight[k] * by_edges[k];
        law[value] = s;
      }
      return Distribution::from_exact(std::move(law));
    }
    const double q = p.value();
    std::vector<double> weight(pairs + 1);
    for (std::size_t k = 0; k <= pairs; ++k)
      weight[k] = std::pow(q, static_cast<double>(k)) *
                  std::pow(1.0 - q, static_cast<double>(pairs - k));
    std::map<std::uint64_t, double> law;
    for (const auto& [value, by_edges] : counts) {
      double s = 0.0;
      for (std::size_t k = 0; k <= pairs; ++k)
        s += weight[k] * static_cast<double>(by_edges[k]);
      law[value] = s;
    }
    return Distribution::from_mass(std::move(law));
  }

  std::uint64_t graphs() const {
    std::uint64_t s = 0;
    for (const auto& [v, by_edges] : counts)
      for (auto c : by_edges) s += c;
    return s;
  }
};

inline std::size_t checked_pairs(std::size_t n) {
  const std::size_t pairs = n * (n > 0 ? n - 1 : 0) / 2;
  if (pairs > kMaxEnumeratedPairs)
    throw BudgetExceeded("graph enumeration needs C(n,2) <= 24, got n=" +
                         std::to_string(n));
  return pairs;
}

// Star-count census over all 2^C(n,2) graphs. Masks are visited in Gray
// code order so each step toggles one edge and updates X in O(1); the mask
// range is split across workers and merged by integer addition.
inline GraphCensus star_census(std::size_t n, std::size_t r, unsigned workers = 1) {
  if (r == 0) throw std::invalid_argument("star arm count must be >= 1");
  const std::size_t pairs = checked_pairs(n);
  std::vector<Edge> pair_of;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) pair_of.push_back({u, v});
  const std::uint64_t max_x = n * binomial_u64(n > 0 ? n - 1 : 0, r);
  std::vector<std::uint64_t> grow(n + 1);  // C(d, r-1)
  for (std::size_t d = 0; d <= n; ++d) grow[d] = binomial_u64(d, r - 1);

  const std::uint64_t total = std::uint64_t{1} << pairs;
  const std::size_t chunks = std::min<std::uint64_t>(resolve_workers(workers) * 4, total);
  const auto partial = parallel_map(chunks, workers, [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    std::vector<std::uint64_t> table((max_x + 1) * (pairs + 1), 0);
    std::uint64_t mask = lo ^ (lo >> 1U);
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t k = 0; k < pairs; ++k)
      if ((mask >> k) & 1U) {
        ++deg[pair_of[k].u];
        ++deg[pair_of[k].v];
      }
    std::uint64_t x = count_stars_from_degrees(deg, r);
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (i != lo) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(i));
        mask ^= std::uint64_t{1} << bit;
        const auto [a, b] = pair_of[bit];
        if ((mask >> bit) & 1U) {
          x += grow[deg[a]] + grow[deg[b]];
          ++deg[a];
          ++deg[b];
        } else {
          --deg[a];
          --deg[b];
          x -= grow[deg[a]] + grow[deg[b]];
        }
      }
      ++table[x * (pairs + 1) + static_cast<std::size_t>(std::popcount(mask))];
    }
    return table;
  });

  GraphCensus census;
  census.n = n;
  census.pairs = pairs;
  for (std::uint64_t x = 0; x <= max_x; ++x) {
    std::vector<std::uint64_t> by_edges(pairs + 1, 0);
    bool any = false;
    for (const auto& table : partial)
      for (std::size_t k = 0; k <= pairs; ++k) {
        by_edges[k] += table[x * (pairs + 1) + k];
        any = any || by_edges[k] != 0;
      }
    if (any) census.counts.emplace(x, std::move(by_edges));
  }
  return census;
}

// Census of an arbitrary graph statistic; materializes every graph.
template <typename Statistic>
GraphCensus graph_census(std::size_t n, Statistic&& statistic, unsigned workers = 1) {
  const std::size_t pairs = checked_pairs(n);
  const std::uint64_t total = std::uint64_t{1} << pairs;
  const std::size_t chunks = std::min<std::uint64_t>(resolve_workers(workers) * 4, total);
  const auto partial = parallel_map(chunks, workers, [&](std::size_t c) {
    std::map<std::uint64_t, std::vector<std::uint64_t>> local;
    for (std::uint64_t mask = total * c / chunks; mask < total * (c + 1) / chunks; ++mask) {
      const std::uint64_t value = statistic(graph_from_mask(n, mask));
      auto& row = local[value];
      if (row.empty()) row.assign(pairs + 1, 0);
      ++row[static_cast<std::size_t>(std::popcount(mask))];
    }
    return local;
  });
  GraphCensus census;
  census.n = n;
  census.pairs = pairs;
  for (const auto& local : partial)
    for (const auto& [value, row] : local) {
      auto& dst = census.counts[value];
      if (dst.empty()) dst.assign(pairs + 1, 0);
      for (std::size_t k = 0; k <= pairs; ++k) dst[k] += row[k];
    }
  return census;
}

// Exact law of the K_{1,r} count in G(n,p), C(n,2) <= 24.
inline Distribution exact_star_distribution(std::size_t n, const Probability& p,
                                            std::size_t r, unsigned workers = 1) {
  return star_census(n, r, workers).distribution(p);
}

inline double exact_variance_bruteforce(std::size_t n, const Probability& p,
                                        std::size_t r) {
  return exact_star_distribution(n, p, r).variance();
}

// X_D(G): the largest K_{1,r} count over edge-subgraphs H of G with
// maximum degree at most floor(D). Branch and bound over edges with the
// monotone bound sum_v C(min(deg_H(v) + free_v, floor(D)), r).
inline std::uint64_t exact_bounded_star_count(const Graph& g, std::size_t r, double cap) {
  if (r == 0) throw std::invalid_argument("star arm count must be >= 1");
  if (!(cap >= 0.0)) throw std::invalid_argument("degree cap must be >= 0");
  const double floor_cap = std::floor(cap);
  if (floor_cap >= static_cast<double>(g.max_degree())) return count_stars(g, r);
  if (g.edge_count() > kMaxSearchEdges)
    throw BudgetExceeded("bounded star search needs at most 20 edges");
  const auto limit = static_cast<std::size_t>(floor_cap);
  const std::size_t n = g.vertex_count();
  const auto edges = g.edges();
  std::vector<std::size_t> deg(n, 0);
  std::vector<std::size_t> free = g.degrees();
  std::vector<std::uint64_t> value_at(limit + 1);
  for (std::size_t d = 0; d <= limit; ++d) value_at[d] = binomial_u64(d, r);
  std::uint64_t best = 0;

  std::function<void(std::size_t, std::uint64_t)> search = [&](std::size_t i,
                                                               std::uint64_t current) {
    best = std::max(best, current);
    if (i == edges.size()) return;
    std::uint64_t bound = 0;
    for (std::size_t v = 0; v < n; ++v) bound += value_at[std::min(deg[v] + free[v], limit)];
    if (bound <= best) return;
    const auto [a, b] = edges[i];
    --free[a];
    --free[b];
    if (deg[a] < limit && deg[b] < limit) {
      const std::uint64_t gain = (value_at[deg[a] + 1] - value_at[deg[a]]) +
                                 (value_at[deg[b] + 1] - value_at[deg[b]]);
      ++deg[a];
      ++deg[b];
      search(i + 1, current + gain);
      --deg[a];
      --deg[b];
    }
    search(i + 1, current);
    ++free[a];
    ++free[b];
  };
  search(0, 0);
  return best;
}

// A maximum edge-disjoint K_{1,k} packing. Each edge is handed to one of
// its endpoints (leaving an edge unassigned never helps) and vertex v then
// centers floor(a_v / k) stars; branch and bound over the 2^m hand-outs,
// seeded with the greedy packing.
inline StarPacking exact_max_star_packing_witness(const Graph& g, std::size_t k) {
  if (k == 0) throw std::invalid_argument("star arm count must be >= 1");
  StarPacking greedy = greedy_star_packing(g, k);
  if (k > g.max_degree() || greedy.size() == packing_upper_bound(g, k)) return greedy;
  if (g.edge_count() > kMaxSearchEdges)
    throw BudgetExceeded("star packing search needs at most 20 edges");
  const std::size_t n = g.vertex_count();
  const auto edges = g.edges();
  std::vector<std::size_t> assigned(n, 0);
  std::vector<std::size_t> free = g.degrees();
  std::vector<std::uint8_t> owner(edges.size(), 0);  // 0 -> u, 1 -> v
  std::vector<std::uint8_t> best_owner;
  std::uint64_t best = greedy.size();
  const std::uint64_t global_cap = edges.size() / k;

  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (best == global_cap) return;
    std::uint64_t bound = 0;
    for (std::size_t v = 0; v < n; ++v) bound += (assigned[v] + free[v]) / k;
    if (bound <= best) return;
    if (i == edges.size()) {
      best = bound;  // at a leaf free is all zero, so bound is the value
      best_owner = owner;
      return;
    }
    const auto [a, b] = edges[i];
    --free[a];
    --free[b];
    for (std::uint8_t side : {std::uint8_t{0}, std::uint8_t{1}}) {
      const Vertex c = side == 0 ? a : b;
      owner[i] = side;
      ++assigned[c];
      search(i + 1);
      --assigned[c];
    }
    ++free[a];
    ++free[b];
  };
  search(0);
  if (best_owner.empty()) return greedy;

  StarPacking packing;
  packing.k = k;
  std::vector<std::vector<Vertex>> hand(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [a, b] = edges[i];
    if (best_owner[i] == 0) hand[a].push_back(b);
    else hand[b].push_back(a);
  }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(hand[v].begin(), hand[v].end());
    for (std::size_t s = 0; s + k <= hand[v].size(); s += k) {
      Star star;
      star.center = v;
      star.leaves.assign(hand[v].begin() + static_cast<std::ptrdiff_t>(s),
                         hand[v].begin() + static_cast<std::ptrdiff_t>(s + k));
      packing.stars.push_back(std::move(star));
    }
  }
  return packing;
}

// N_k(G): maximum number of pairwise edge-disjoint K_{1,k} in G.
inline std::uint64_t exact_max_star_packing(const Graph& g, std::size_t k) {
  return exact_max_star_packing_witness(g, k).size();
}

// Independent 0/1 variables xi_i (i in the ground set) with Pr(xi_i = 1) =
// probabilities[i], and a family of nonempty subsets alpha (bitmasks over
// the ground set) with Y_alpha = prod_{i in alpha} xi_i.
struct IndicatorFamily {
  std::vector<double> probabilities;
  std::vector<std::uint32_t> sets;

  void validate() const {
    if (probabilities.size() > kMaxGroundSet || sets.size() > kMaxFamily)
      throw BudgetExceeded("indicator family beyond oracle budget (|S|<=20, |I|<=12)");
    for (double q : probabilities)
      if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
    const std::uint64_t universe = (std::uint64_t{1} << probabilities.size()) - 1;
    for (auto s : sets)
      if (s == 0 || (s & ~universe) != 0)
        throw std::invalid_argument("family member must be a nonempty subset of the ground set");
  }

  // sum over the family of E Y_alpha
  double expected_sum() const {
    double total = 0.0;
    for (auto s : sets) {
      double e = 1.0;
      for (std::size_t i = 0; i < probabilities.size(); ++i)
        if ((s >> i) & 1U) e *= probabilities[i];
      total += e;
    }
    return total;
  }
};

namespace detail {
// best[A] = largest |J| with J a subfamily of A whose overlap degree
// max_{beta in J} |{alpha in J : alpha meets beta}| is at most C.
inline std::vector<std::uint8_t> overlap_capped_maximum(const IndicatorFamily& family,
                                                        double cap) {
  const std::size_t m = family.sets.size();
  std::vector<std::uint32_t> meets(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (family.sets[a] & family.sets[b]) meets[a] |= 1U << b;
  const std::uint32_t subfamilies = 1U << m;
  std::vector<std::uint8_t> best(subfamilies, 0);
  for (std::uint32_t j = 1; j < subfamilies; ++j) {
    bool valid = true;
    for (std::size_t b = 0; b < m && valid; ++b)
      if ((j >> b) & 1U)
        valid = static_cast<double>(std::popcount(meets[b] & j)) <= cap;
    if (valid) {
      best[j] = static_cast<std::uint8_t>(std::popcount(j));
    } else {
      for (std::size_t b = 0; b < m; ++b)
        if ((j >> b) & 1U) best[j] = std::max(best[j], best[j & ~(1U << b)]);
    }
  }
  return best;
}
}  // namespace detail

// Z_C for one outcome of the ground variables (bit i of `outcome` = xi_i).
inline std::uint64_t zc_value(const IndicatorFamily& family, double cap,
                              std::uint32_t outcome) {
  family.validate();
  const auto best = detail::overlap_capped_maximum(family, cap);
  std::uint32_t active = 0;
  for (std::size_t a = 0; a < family.sets.size(); ++a)
    if ((family.sets[a] & outcome) == family.sets[a]) active |= 1U << a;
  return best[active];
}

// Exact Pr(Z_C >= threshold) by enumerating all outcomes of the ground set.
inline double exact_zc_tail(const IndicatorFamily& family, double cap, double threshold) {
  family.validate();
  if (!(cap > 0.0)) throw std::invalid_argument("overlap cap must be positive");
  if (threshold <= 0.0) return 1.0;
  const auto best = detail::overlap_capped_maximum(family, cap);
  const std::size_t s = family.probabilities.size();
  const std::uint32_t outcomes = 1U << s;
  std::vector<double> active_mass(std::size_t{1} << family.sets.size(), 0.0);
  for (std::uint32_t w = 0; w < outcomes; ++w) {
    double prob = 1.0;
    for (std::size_t i = 0; i < s; ++i)
      prob *= ((w >> i) & 1U) ? family.probabilities[i] : 1.0 - family.probabilities[i];
    std::uint32_t active = 0;
    for (std::size_t a = 0; a < family.sets.size(); ++a)
      if ((family.sets[a] & w) == family.sets[a]) active |= 1U << a;
    active_mass[active] += prob;
  }
  double tail = 0.0;
  for (std::size_t a = 0; a < active_mass.size(); ++a)
    if (static_cast<double>(best[a]) >= threshold) tail += active_mass[a];
  return std::min(tail, 1.0);
}

}  // namespace startail
