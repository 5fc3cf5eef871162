#pragma once
// Constructive lower bounds: the clustering gadget F (few edges, at least x
// stars) with exact case selection, the planting bound p^{|E(F)|}, the
// disjoint-approximation factor, and the three refined lower-bound
// formulas with their range flags.

#include "startail/bounds.hpp"
#include "startail/common.hpp"
#include "startail/graph.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace startail {

// Gadget parameters: x0 = 2 (4r)^r, n0 = (r+1) x0, D = n0^2.
struct ClusterConstants {
  std::uint64_t x0 = 0;
  std::uint64_t n0 = 0;
  BigInt budget_factor;

  explicit ClusterConstants(std::uint64_t r) {
    x0 = 2 * ipow<std::uint64_t>(4 * r, r);
    n0 = (r + 1) * x0;
    budget_factor = BigInt(n0) * n0;
  }
};

// Case (i) K_{y,z}; (ii) K_n because n < n0; (iii) K_n because
// x > n^{r+1}/D; (iv) K_{n0} because x < x0.
enum class ClusterCase { bipartite, complete_n0, complete_n, small_x };

inline const char* to_string(ClusterCase c) {
  switch (c) {
    case ClusterCase::bipartite: return "bipartite";
    case ClusterCase::complete_n0: return "complete_n0";
    case ClusterCase::complete_n: return "complete_n";
    case ClusterCase::small_x: return "small_x";
  }
  return "bipartite";
}

inline const char* case_numeral(ClusterCase c) {
  switch (c) {
    case ClusterCase::bipartite: return "i";
    case ClusterCase::complete_n0: return "ii";
    case ClusterCase::complete_n: return "iii";
    case ClusterCase::small_x: return "iv";
  }
  return "i";
}

// Graphs up to this many edges are materialized alongside the exact counts.
inline constexpr std::uint64_t kMaterializeEdges = 2'000'000;

struct ClusterConstruction {
  std::uint64_t n = 0;
  std::uint64_t r = 2;
  std::uint64_t x_target = 0;
  ClusterCase case_label = ClusterCase::bipartite;
  std::uint64_t y = 0;  // bipartite parts; for complete cases y = order, z = 0
  std::uint64_t z = 0;
  std::uint64_t vertices = 0;  // |V(F)|
  BigInt edges;
  BigInt stars;
  BigInt proof_star_lower_bound;  // z C(y, r) in case (i), else the star count
  BigInt budget_numerator;        // the budget is D max{x^{1/r}, x/n^{r-1}, 1}
  double edge_budget = 0.0;
  bool within_budget = false;     // exact comparison
  bool enough_stars = false;      // stars >= x_target
  bool side_conditions = true;    // 1 < y <= n/2 and 1 < z <= n/2 in case (i)
  std::optional<Graph> graph;     // absent above kMaterializeEdges

  std::uint64_t edge_count() const { return edges.convert_to<std::uint64_t>(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["n"] = n;
    out["r"] = r;
    out["x"] = x_target;
    out["case"] = case_numeral(case_label);
    out["case_label"] = to_string(case_label);
    out["y"] = y;
    out["z"] = z;
    out["vertices"] = vertices;
    out["edges"] = edges.str();
    out["stars"] = stars.str();
    out["budget"] = edge_budget;
    out["within_budget"] = within_budget;
    out["enough_stars"] = enough_stars;
    out["side_conditions"] = side_conditions;
    if (graph) out["graph"] = to_edge_list(*graph);
    else out["graph"] = nullptr;
    return out;
  }
};

namespace detail {
// |E| <= D max{x^{1/r}, x/n^{r-1}, 1}, decided in integers.
inline bool within_cluster_budget(const BigInt& e, const BigInt& d, std::uint64_t x,
                                  std::uint64_t n, std::uint64_t r) {
  if (e <= d) return true;
  if (ipow<BigInt>(e, r) <= ipow<BigInt>(d, r) * x) return true;
  return e * ipow<BigInt>(BigInt(n), r - 1) <= d * x;
}

// y = ceil(min{x^{1/r}, n} / 4), exactly.
inline std::uint64_t cluster_part(std::uint64_t x, std::uint64_t n, std::uint64_t r) {
  if (ipow<BigInt>(BigInt(n), r) <= x) return (n + 3) / 4;
  auto y = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(std::pow(static_cast<double>(x), 1.0 / r) / 4.0)));
  while (y > 1 && ipow<BigInt>(BigInt(4 * (y - 1)), r) >= x) --y;
  while (ipow<BigInt>(BigInt(4 * y), r) < x) ++y;
  return y;
}
}  // namespace detail

inline ClusterConstruction build_cluster_graph(std::uint64_t n, std::uint64_t r,
                                               std::uint64_t x,
                                               std::uint64_t materialize_limit = kMaterializeEdges) {
  if (r < 1) throw std::invalid_argument("star arm count must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const BigInt full = binomial_big(n - 1, r) * n;
  if (x == 0 || BigInt(x) > full)
    throw std::invalid_argument("x must lie in (0, n C(n-1, r)]");
  const ClusterConstants k(r);
  ClusterConstruction c;
  c.n = n;
  c.r = r;
  c.x_target = x;

  const BigInt n_big(n);
  const bool large_n = n >= k.n0;
  const bool x_above = BigInt(x) * k.budget_factor > ipow(n_big, r + 1);
  std::uint64_t order = 0;
  if (!large_n) {
    c.case_label = ClusterCase::complete_n0;
    order = n;
  } else if (x_above) {
    c.case_label = ClusterCase::complete_n;
    order = n;
  } else if (x < k.x0) {
    c.case_label = ClusterCase::small_x;
    order = k.n0;
  } else {
    c.case_label = ClusterCase::bipartite;
  }

  if (c.case_label == ClusterCase::bipartite) {
    c.y = detail::cluster_part(x, n, r);
    const BigInt num = ipow<BigInt>(BigInt(r), r) * x;
    const BigInt den = ipow<BigInt>(BigInt(c.y), r);
    c.z = ((num + den - 1) / den).convert_to<std::uint64_t>();
    c.vertices = c.y + c.z;
    c.edges = BigInt(c.y) * c.z;
    c.stars = BigInt(c.y) * binomial_big(c.z, r) + BigInt(c.z) * binomial_big(c.y, r);
    c.proof_star_lower_bound = BigInt(c.z) * binomial_big(c.y, r);
    c.side_conditions = c.y > 1 && 2 * c.y <= n && c.z > 1 && 2 * c.z <= n;
  } else {
    c.y = order;
    c.vertices = order;
    c.edges = BigInt(order) * (order - 1) / 2;
    c.stars = binomial_big(order - 1, r) * order;
    c.proof_star_lower_bound = c.stars;
  }
  c.within_budget = detail::within_cluster_budget(c.edges, k.budget_factor, x, n, r);
  c.enough_stars = c.stars >= x;
  const double xd = static_cast<double>(x);
  c.edge_budget = to_double(Rational(k.budget_factor)) *
                  std::max({std::pow(xd, 1.0 / static_cast<double>(r)),
                            xd / std::pow(static_cast<double>(n), static_cast<double>(r) - 1.0),
                            1.0});
  if (c.vertices <= n && c.edges <= materialize_limit) {
    if (c.case_label == ClusterCase::bipartite) {
      c.graph = Graph::complete_bipartite(c.y, c.z, n);
    } else {
      const Graph clique = Graph::complete(order);
      c.graph = Graph(n, std::vector<Edge>(clique.edges().begin(), clique.edges().end()));
    }
  }
  return c;
}

struct PlantingBound {
  double value = 0.0;
  double log_value = 0.0;
  std::uint64_t edges = 0;
};

// Pr(X >= x) >= Pr(F ⊆ G(n,p)) = p^{|E(F)|}
inline PlantingBound cluster_lower_bound(std::uint64_t n, double p, std::uint64_t r,
                                         std::uint64_t x) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
  const auto c = build_cluster_graph(n, r, x, 0);
  PlantingBound b;
  b.edges = c.edge_count();
  b.log_value = static_cast<double>(b.edges) * std::log(p);
  b.value = std::pow(p, static_cast<double>(b.edges));
  return b;
}

// Exact p^{|E(F)|} for rational p.
inline Rational cluster_lower_bound_exact(std::uint64_t n, const Rational& p, std::uint64_t r,
                                          std::uint64_t x) {
  const auto c = build_cluster_graph(n, r, x, 0);
  return ipow(p, c.edge_count());
}

struct DisjointBound {
  double log_factor = 0.0;  // log[C(X1, m) p^{rm} (1-p^r)^{X1-m}], X1 = n C(n-1, r)
  double factor = 0.0;
  double log_multiplier = 0.0;  // -b
  double log_bound = 0.0;       // -b + log_factor
  bool p_in_range = false;      // 0 < p <= n^{-1-1/(r+1)}
  bool m_in_range = false;      // m <= 99 max{mu, n^{1/(r+1)}}
  bool n_in_range = false;      // n >= n0

  bool in_range() const { return p_in_range && m_in_range && n_in_range; }
};

inline DisjointBound disjoint_lower_bound(std::uint64_t n, double p, std::uint64_t r,
                                          std::uint64_t m,
                                          const UnspecifiedConstants& constants = {}) {
  constants.validate();
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
  if (r < 1) throw std::invalid_argument("star arm count must be >= 1");
  const double full = max_star_count<double>(n, r);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  DisjointBound b;
  if (md > full) {
    b.log_factor = -kInf;
  } else {
    const double pr = std::pow(p, rr);
    const double rest = full - md;
    const double log_miss = rest == 0.0 ? 0.0 : (pr == 1.0 ? -kInf : rest * std::log1p(-pr));
    b.log_factor = log_binomial(full, md) + rr * md * std::log(p) + log_miss;
  }
  b.factor = std::exp(b.log_factor);
  b.log_multiplier = -constants.b;
  b.log_bound = b.log_multiplier + b.log_factor;
  const double mu = full * std::pow(p, rr);
  b.p_in_range = p <= std::pow(nd, -1.0 - 1.0 / (rr + 1.0));
  b.m_in_range = md <= 99.0 * std::max(mu, std::pow(nd, 1.0 / (rr + 1.0)));
  b.n_in_range = nd >= constants.n0;
  return b;
}

struct LowerBoundTerm {
  double log_value = 0.0;
  double value = 0.0;
  bool in_range = false;
};

struct AppendixLowerBounds {
  LowerBoundTerm refined_cluster;  // exp(-c M(t) log(1/p))
  LowerBoundTerm chernoff;         // d exp(-c phi(t/mu) mu)
  LowerBoundTerm edges;            // exp(-c phi(t/mu) mu^2 / Lambda)
  std::optional<double> best;      // max over in-range terms
  std::optional<double> best_log;

  nlohmann::ordered_json to_json() const {
    const auto term = [](const LowerBoundTerm& t) {
      return nlohmann::ordered_json{
          {"value", t.value}, {"log_value", t.log_value}, {"in_range", t.in_range}};
    };
    nlohmann::ordered_json out;
    out["refined_cluster"] = term(refined_cluster);
    out["chernoff"] = term(chernoff);
    out["edges"] = term(edges);
    if (best) {
      out["best"] = *best;
      out["best_log"] = *best_log;
    } else {
      out["best"] = nullptr;
      out["best_log"] = nullptr;
    }
    return out;
  }
};

inline AppendixLowerBounds appendix_lower_bounds(std::uint64_t n, double p, std::uint64_t r,
                                                 double t, double xi,
                                                 const UnspecifiedConstants& constants = {}) {
  constants.validate();
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  const Moments m = star_moments(n, p, r);
  if (!(p > 0.0)) throw std::invalid_argument("p outside (0, 1]");
  if (!(m.mu > 0.0)) throw std::invalid_argument("lower bounds need mu > 0");
  const double nd = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  const double sigma = std::sqrt(m.sigma2);
  const double phi = chernoff_phi(t / m.mu);
  const bool big_n = nd >= constants.n0;
  AppendixLowerBounds out;

  const auto fill = [](LowerBoundTerm& term, double lv, bool in_range) {
    term.log_value = lv;
    term.value = std::exp(lv);
    term.in_range = in_range;
  };
  fill(out.refined_cluster, -constants.c * deviation_scale(t, n, r) * std::log(1.0 / p),
       big_n && p <= 1.0 - xi && t >= sigma && m.mu + t >= 1.0 && m.mu + t <= m.max_value);
  fill(out.chernoff, std::log(constants.d) - constants.c * phi * m.mu,
       big_n && p <= std::pow(nd, -1.0 - 1.0 / (rr + 1.0)) && m.mu + t >= 1.0 &&
           m.mu + t <= 9.0 * std::max(m.mu, std::pow(nd, 1.0 / (rr + 1.0))));
  fill(out.edges, -constants.c * phi * m.mu * m.mu / variance_proxy(m.mu, n, p, r),
       big_n && xi / nd <= p && p <= 1.0 - xi && sigma <= t &&
           t <= constants.beta_edges * m.mu);

  for (const auto* term : {&out.refined_cluster, &out.chernoff, &out.edges}) {
    if (!term->in_range) continue;
    if (!out.best_log || term->log_value > *out.best_log) {
      out.best_log = term->log_value;
      out.best = term->value;
    }
  }
  return out;
}

}  // namespace startail
