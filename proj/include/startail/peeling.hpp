#pragma once
// Degree peeling G = G_J ⊇ ... ⊇ G_0 through maximal K_{1,ceil(D_j)}
// packings, three-valued certification of the packing events T and T+,
// and the deterministic sandwich X(G_0) <= X <= X(G_0) + t/2.

#include "startail/bounds.hpp"
#include "startail/common.hpp"
#include "startail/graph.hpp"
#include "startail/oracles.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace startail {

enum class EventVariant { T, Tplus };

inline const char* to_string(EventVariant v) { return v == EventVariant::T ? "T" : "Tplus"; }

struct PeelingParams {
  std::size_t r = 2;
  double D = 1.0;       // base cap; D_j = 2^j D
  double t = 1.0;
  double beta = 1.0 / 32.0;
  double gamma = 0.0;   // T+ only
  double p = 1.0;       // T+ only, through s = log(e/p^gamma)

  void validate(EventVariant variant) const {
    if (r < 2) throw std::invalid_argument("peeling needs r >= 2");
    if (!(D > 0.0) || !std::isfinite(D)) throw std::invalid_argument("D must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
    const double beta_max = variant == EventVariant::T ? 1.0 / 32.0 : 1.0 / 64.0;
    if (!(beta > 0.0 && beta <= beta_max))
      throw std::invalid_argument(variant == EventVariant::T ? "beta must lie in (0, 1/32]"
                                                             : "beta must lie in (0, 1/64]");
    if (variant == EventVariant::Tplus) {
      if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive for T+");
      if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
    }
  }

  double M(std::size_t n) const { return deviation_scale(t, n, r); }
  double Mbar(std::size_t n) const { return std::min(M(n), static_cast<double>(n)); }
  double s() const { return 1.0 - gamma * std::log(p); }
  // Scaling by 2^j is exact in binary floating point, so the ceiling is too.
  double level_cap(unsigned j) const { return std::ldexp(D, static_cast<int>(j)); }
  std::size_t level_arms(unsigned j) const {
    return static_cast<std::size_t>(std::ceil(level_cap(j)));
  }
  // Smallest J >= 0 with D_J >= Mbar.
  unsigned top_level(std::size_t n) const {
    const double target = Mbar(n);
    unsigned j = 0;
    while (level_cap(j) < target) ++j;
    return j;
  }

  double threshold(std::size_t n, unsigned j, EventVariant variant) const {
    const double dj = level_cap(j);
    const double m = M(n);
    if (variant == EventVariant::Tplus) {
      const double sv = s();
      const double tier = std::min(m, static_cast<double>(n)) /
                          std::pow(sv, 1.0 / (static_cast<double>(r) - 1.0));
      if (dj < tier) return beta * m * sv / dj;
    }
    return beta * m / dj;
  }
};

struct PeelingLevel {
  unsigned j = 0;
  double cap = 0.0;            // D_j
  std::size_t arms = 0;        // ceil(D_j)
  Graph graph;                 // G_j
  std::size_t max_degree = 0;  // Delta_j
  StarPacking packing;         // C_{j+1}, empty at j = J
  std::size_t edges_removed = 0;
};

struct PeelingTrace {
  unsigned J = 0;
  std::vector<PeelingLevel> levels;  // levels[j] holds G_j
  std::uint64_t final_star_count = 0;

  const Graph& input() const { return levels.back().graph; }
  const Graph& bottom() const { return levels.front().graph; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["J"] = J;
    out["final_star_count"] = final_star_count;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& lv : levels) {
      nlohmann::ordered_json stars = nlohmann::ordered_json::array();
      for (const auto& s : lv.packing.stars) stars.push_back({{"center", s.center}, {"leaves", s.leaves}});
      arr.push_back({{"j", lv.j},
                     {"D_j", lv.cap},
                     {"arms", lv.arms},
                     {"max_degree", lv.max_degree},
                     {"edges_removed", lv.edges_removed},
                     {"packing", stars},
                     {"graph", to_edge_list(lv.graph)}});
    }
    out["levels"] = arr;
    return out;
  }
};

inline PeelingTrace peel(const Graph& g, const PeelingParams& params) {
  PeelingTrace trace;
  const std::size_t n = g.vertex_count();
  trace.J = params.top_level(n);
  trace.levels.resize(trace.J + 1);
  for (unsigned j = 0; j <= trace.J; ++j) {
    trace.levels[j].j = j;
    trace.levels[j].cap = params.level_cap(j);
    trace.levels[j].arms = params.level_arms(j);
  }
  trace.levels[trace.J].graph = g;
  trace.levels[trace.J].max_degree = g.max_degree();
  for (unsigned j = trace.J; j-- > 0;) {
    const Graph& upper = trace.levels[j + 1].graph;
    auto& level = trace.levels[j];
    level.packing = greedy_star_packing(upper, level.arms);
    level.graph = remove_center_incident_edges(upper, level.packing);
    level.max_degree = level.graph.max_degree();
    level.edges_removed = upper.edge_count() - level.graph.edge_count();
  }
  trace.final_star_count = count_stars(trace.bottom(), params.r);
  return trace;
}

enum class Verdict { holds, fails, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

enum class CertMethod { max_degree, exact, upper_bound, greedy_witness, none };

inline const char* to_string(CertMethod m) {
  switch (m) {
    case CertMethod::max_degree: return "max_degree";
    case CertMethod::exact: return "exact";
    case CertMethod::upper_bound: return "upper_bound";
    case CertMethod::greedy_witness: return "greedy_witness";
    case CertMethod::none: return "none";
  }
  return "none";
}

struct LevelCertificate {
  unsigned j = 0;
  double cap = 0.0;
  std::size_t arms = 0;
  double threshold = 0.0;
  std::uint64_t value = 0;  // exact N, an upper bound, or a witnessed lower bound
  CertMethod method = CertMethod::none;
  Verdict verdict = Verdict::unknown;
  std::optional<StarPacking> witness;  // present when the level fails
};

struct EventCertificate {
  EventVariant variant = EventVariant::T;
  Verdict verdict = Verdict::holds;
  std::vector<LevelCertificate> levels;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["variant"] = to_string(variant);
    out["verdict"] = to_string(verdict);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& l : levels)
      arr.push_back({{"j", l.j},
                     {"D_j", l.cap},
                     {"arms", l.arms},
                     {"threshold", l.threshold},
                     {"value", l.value},
                     {"method", to_string(l.method)},
                     {"verdict", to_string(l.verdict)}});
    out["levels"] = arr;
    return out;
  }
};

// Levels with D_j > n are skipped: K_{1,ceil(D_j)} needs more than n - 1
// leaves, so N_{D_j} = 0 there and the (positive) threshold is met.
inline EventCertificate certify_event(const Graph& g, const PeelingParams& params,
                                      EventVariant variant) {
  params.validate(variant);
  EventCertificate cert;
  cert.variant = variant;
  const std::size_t n = g.vertex_count();
  const std::size_t delta = g.max_degree();
  bool any_unknown = false;
  bool any_fail = false;
  for (unsigned j = 0; params.level_cap(j) <= static_cast<double>(n); ++j) {
    LevelCertificate lc;
    lc.j = j;
    lc.cap = params.level_cap(j);
    lc.arms = params.level_arms(j);
    lc.threshold = params.threshold(n, j, variant);
    if (lc.threshold <= 1.0) {
      // N < threshold <= 1 means N = 0, i.e. no vertex of degree >= ceil(D_j)
      lc.method = CertMethod::max_degree;
      if (delta < lc.arms) {
        lc.value = 0;
        lc.verdict = Verdict::holds;
      } else {
        lc.witness = greedy_star_packing(g, lc.arms);
        lc.value = lc.witness->size();
        lc.verdict = Verdict::fails;
      }
    } else {
      std::optional<StarPacking> exact;
      try {
        exact = exact_max_star_packing_witness(g, lc.arms);
      } catch (const BudgetExceeded&) {
      }
      if (exact) {
        lc.method = CertMethod::exact;
        lc.value = exact->size();
        if (static_cast<double>(lc.value) < lc.threshold) {
          lc.verdict = Verdict::holds;
        } else {
          lc.verdict = Verdict::fails;
          lc.witness = std::move(exact);
        }
      } else {
        const std::uint64_t upper = packing_upper_bound(g, lc.arms);
        if (static_cast<double>(upper) < lc.threshold) {
          lc.method = CertMethod::upper_bound;
          lc.value = upper;
          lc.verdict = Verdict::holds;
        } else {
          StarPacking greedy = greedy_star_packing(g, lc.arms);
          lc.value = greedy.size();
          if (static_cast<double>(greedy.size()) >= lc.threshold) {
            lc.method = CertMethod::greedy_witness;
            lc.verdict = Verdict::fails;
            lc.witness = std::move(greedy);
          } else {
            lc.method = CertMethod::none;
            lc.verdict = Verdict::unknown;
          }
        }
      }
    }
    any_fail = any_fail || lc.verdict == Verdict::fails;
    any_unknown = any_unknown || lc.verdict == Verdict::unknown;
    cert.levels.push_back(std::move(lc));
  }
  cert.verdict = any_fail ? Verdict::fails : any_unknown ? Verdict::unknown : Verdict::holds;
  return cert;
}

inline EventCertificate certify_event_T(const Graph& g, const PeelingParams& params) {
  return certify_event(g, params, EventVariant::T);
}

inline EventCertificate certify_event_Tplus(const Graph& g, const PeelingParams& params) {
  return certify_event(g, params, EventVariant::Tplus);
}

// A failed check of a deterministic lemma: an implementation bug, never data.
class LemmaViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SandwichReport {
  EventCertificate certificate;
  PeelingTrace trace;
  bool asserted = false;  // checks run only when the certificate holds
  std::uint64_t star_count = 0;
  std::uint64_t bottom_star_count = 0;
  double half_t = 0.0;
  std::optional<std::uint64_t> bounded_star_count;  // X_D(G) within oracle budget

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["certificate"] = certificate.to_json();
    out["asserted"] = asserted;
    out["X"] = star_count;
    out["X_G0"] = bottom_star_count;
    out["half_t"] = half_t;
    if (bounded_star_count) out["X_D"] = *bounded_star_count;
    else out["X_D"] = nullptr;
    out["trace"] = trace.to_json();
    return out;
  }
};

// Throws LemmaViolation when a certified instance breaks the sandwich, a
// level degree bound, or the per-level removal bound.
inline SandwichReport verify_sandwich(const Graph& g, const PeelingParams& params,
                                      EventVariant variant) {
  SandwichReport rep;
  rep.certificate = certify_event(g, params, variant);
  rep.trace = peel(g, params);
  rep.star_count = count_stars(g, params.r);
  rep.bottom_star_count = rep.trace.final_star_count;
  rep.half_t = params.t / 2.0;
  if (g.edge_count() <= kMaxSearchEdges || std::floor(params.D) >= static_cast<double>(g.max_degree()))
    rep.bounded_star_count = exact_bounded_star_count(g, params.r, params.D);
  if (rep.certificate.verdict != Verdict::holds) return rep;
  rep.asserted = true;

  const auto fail = [](const std::string& what) { throw LemmaViolation(what); };
  for (const auto& lv : rep.trace.levels)
    if (static_cast<double>(lv.max_degree) > lv.cap)
      fail("level " + std::to_string(lv.j) + ": max degree exceeds D_j");
  for (unsigned j = 0; j < rep.trace.J; ++j) {
    const auto& lv = rep.trace.levels[j];
    if (lv.edges_removed > lv.packing.size() * rep.trace.levels[j + 1].max_degree)
      fail("level " + std::to_string(j) + ": removed more edges than |C| * Delta");
  }
  if (rep.bottom_star_count > rep.star_count) fail("X(G_0) exceeds X");
  if (static_cast<double>(rep.star_count - rep.bottom_star_count) > rep.half_t)
    fail("X exceeds X(G_0) + t/2");
  if (rep.bounded_star_count) {
    if (*rep.bounded_star_count < rep.bottom_star_count) fail("X_D below X(G_0)");
    if (static_cast<double>(rep.star_count) - static_cast<double>(*rep.bounded_star_count) >
        rep.half_t)
      fail("X exceeds X_D + t/2");
  }
  return rep;
}

}  // namespace startail
