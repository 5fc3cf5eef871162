#pragma once
// Naive Monte Carlo tails with Wilson intervals, and the grid sweep that
// tabulates moments, exact or sampled tails, exponents and bounds as CSV.

#include "startail/bounds.hpp"
#include "startail/common.hpp"
#include "startail/constructions.hpp"
#include "startail/graph.hpp"
#include "startail/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace startail {

inline constexpr double kWilsonZ = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

inline Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kWilsonZ) {
  if (trials == 0) throw std::invalid_argument("wilson interval needs trials >= 1");
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  // the closed form can miss the endpoints by an ulp
  return {std::min(ph, std::max(0.0, centre - half)), std::max(ph, std::min(1.0, centre + half))};
}

struct McEstimate {
  std::uint64_t replicates = 0;
  std::uint64_t hits = 0;
  double point = 0.0;
  Interval ci95;
  std::uint64_t seed = 0;
  bool below_resolution() const { return hits == 0; }
};

// Replicate i samples G(n, p) with seed ^ i.
inline McEstimate mc_tail(std::size_t n, double p, std::size_t r, double threshold,
                          std::uint64_t replicates, std::uint64_t seed, unsigned workers = 1) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (r < 1) throw std::invalid_argument("star arm count must be >= 1");
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (replicates + kBlock - 1) / kBlock;
  const auto partial = parallel_map(blocks, workers, [&](std::size_t b) {
    std::uint64_t hits = 0;
    const std::uint64_t end = std::min<std::uint64_t>(replicates, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      const auto deg = sample_gnp_degrees(n, p, seed ^ i);
      if (static_cast<double>(count_stars_from_degrees(deg, r)) >= threshold) ++hits;
    }
    return hits;
  });
  McEstimate est;
  est.replicates = replicates;
  est.seed = seed;
  for (auto h : partial) est.hits += h;
  est.point = static_cast<double>(est.hits) / static_cast<double>(replicates);
  est.ci95 = wilson_interval(est.hits, replicates);
  return est;
}

enum class Estimator { exact, mc, automatic };

inline Estimator parse_estimator(const std::string& s) {
  if (s == "exact") return Estimator::exact;
  if (s == "mc") return Estimator::mc;
  if (s == "auto") return Estimator::automatic;
  throw std::invalid_argument("estimator must be exact, mc or auto");
}

// Cartesian grid, iterated with eps fastest, then p, then r, then n.
struct SweepGrid {
  std::vector<std::uint64_t> n;
  std::vector<double> p;
  std::vector<std::uint64_t> r{2};
  std::vector<double> eps{1.0};
  std::uint64_t replicates = 10000;
  std::uint64_t seed = 1;
  Estimator estimator = Estimator::automatic;
  double xi = 0.1;  // for the lower-bound range flags
  UnspecifiedConstants constants;

  std::size_t size() const { return n.size() * p.size() * r.size() * eps.size(); }

  void validate() const {
    if (size() == 0) throw std::invalid_argument("sweep grid is empty");
    for (auto v : n)
      if (v < 2) throw std::invalid_argument("sweep grid needs n >= 2");
    for (auto v : p)
      if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("sweep grid needs p in (0, 1]");
    for (auto v : r)
      if (v < 2) throw std::invalid_argument("sweep grid needs r >= 2");
    for (auto v : eps)
      if (!(v > 0.0)) throw std::invalid_argument("sweep grid needs eps > 0");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
    constants.validate();
  }
};

inline const std::vector<std::string>& sweep_header() {
  static const std::vector<std::string> h{
      "index", "n", "p", "r", "eps", "mu", "sigma2", "Lambda", "threshold", "estimator",
      "tail", "ci_lo", "ci_hi", "hits", "replicates", "M", "Phi", "Phi_eps", "Psi",
      "upper_bound", "upper_bound_log", "markov", "planting_log", "appendix_best_log"};
  return h;
}

struct SweepRow {
  std::size_t index = 0;
  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t r = 2;
  double eps = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double lambda = 0.0;
  double threshold = 0.0;
  std::string estimator;  // exact, exact_rational, mc, none
  double tail = kNaN;
  double ci_lo = kNaN;
  double ci_hi = kNaN;
  std::uint64_t hits = 0;
  std::uint64_t replicates = 0;
  double M = 0.0;
  double Phi = 0.0;
  double Phi_eps = kNaN;
  double Psi = kNaN;
  double upper = kNaN;
  double upper_log = kNaN;
  double markov = kNaN;
  double planting_log = kNaN;
  double appendix_log = kNaN;
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {
inline std::uint64_t ceil_threshold_target(double threshold) {
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(threshold)));
}
}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepGrid& grid, unsigned workers = 1) {
  grid.validate();
  struct Point {
    std::uint64_t n, r;
    double p, eps;
  };
  std::vector<Point> points;
  for (auto n : grid.n)
    for (auto r : grid.r)
      for (auto p : grid.p)
        for (auto e : grid.eps) points.push_back({n, r, p, e});

  // Exact tails share one census per (n, r); built up front, in grid order.
  std::map<std::pair<std::uint64_t, std::uint64_t>, GraphCensus> census;
  if (grid.estimator != Estimator::mc)
    for (const auto& pt : points) {
      const auto key = std::make_pair(pt.n, pt.r);
      if (census.contains(key) || pt.n * (pt.n - 1) / 2 > kMaxEnumeratedPairs) continue;
      census.emplace(key, star_census(pt.n, pt.r, workers));
    }
  if (grid.estimator == Estimator::exact)
    for (const auto& pt : points)
      if (!census.contains({pt.n, pt.r}))
        throw BudgetExceeded("exact estimator needs C(n, 2) <= 24 for every grid point");

  return parallel_map(points.size(), workers, [&](std::size_t i) {
    const auto& pt = points[i];
    SweepRow row;
    row.index = i;
    row.n = pt.n;
    row.p = pt.p;
    row.r = pt.r;
    row.eps = pt.eps;
    const Moments m = star_moments(pt.n, pt.p, pt.r);
    row.mu = m.mu;
    row.sigma2 = m.sigma2;
    row.lambda = variance_proxy(m.mu, pt.n, pt.p, pt.r);
    row.threshold = (1.0 + pt.eps) * m.mu;
    row.M = deviation_scale(pt.eps * m.mu, pt.n, pt.r);
    row.Phi = exponent_const_eps(m);
    if (m.sigma2 > 0.0 && m.mu > 0.0) {
      row.Phi_eps = exponent_eps(m, pt.eps);
      row.Psi = exponent_psi(m, pt.eps * m.mu);
    }
    const auto it = census.find({pt.n, pt.r});
    if (it != census.end()) {
      const auto dist = it->second.distribution(Probability(pt.p));
      row.estimator = dist.is_exact() ? "exact_rational" : "exact";
      row.tail = dist.tail(row.threshold);
      row.ci_lo = row.ci_hi = row.tail;
    } else {
      const auto est = mc_tail(pt.n, pt.p, pt.r, row.threshold, grid.replicates,
                               grid.seed ^ (static_cast<std::uint64_t>(i) << 40U), 1);
      row.estimator = "mc";
      row.tail = est.point;
      row.ci_lo = est.ci95.lo;
      row.ci_hi = est.ci95.hi;
      row.hits = est.hits;
      row.replicates = est.replicates;
    }
    if (m.mu > 0.0) {
      const auto rep = pipeline_const_eps(m, pt.eps, grid.constants);
      row.upper = rep.get("total");
      row.upper_log = rep.get_log("total");
      row.markov = rep.get("markov_direct");
    }
    const auto target = detail::ceil_threshold_target(row.threshold);
    if (static_cast<double>(target) <= m.max_value && pt.p > 0.0)
      row.planting_log = cluster_lower_bound(pt.n, pt.p, pt.r, target).log_value;
    if (m.mu > 0.0) {
      const auto low =
          appendix_lower_bounds(pt.n, pt.p, pt.r, pt.eps * m.mu, grid.xi, grid.constants);
      if (low.best_log) row.appendix_log = *low.best_log;
    }
    return row;
  });
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  const auto& h = sweep_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << '\n';
  for (const auto& w : rows) {
    out << w.index << ',' << w.n << ',' << format_real(w.p) << ',' << w.r << ','
        << format_real(w.eps) << ',' << format_real(w.mu) << ',' << format_real(w.sigma2) << ','
        << format_real(w.lambda) << ',' << format_real(w.threshold) << ',' << w.estimator << ','
        << format_real(w.tail) << ',' << format_real(w.ci_lo) << ',' << format_real(w.ci_hi)
        << ',' << w.hits << ',' << w.replicates << ',' << format_real(w.M) << ','
        << format_real(w.Phi) << ',' << format_real(w.Phi_eps) << ',' << format_real(w.Psi)
        << ',' << format_real(w.upper) << ',' << format_real(w.upper_log) << ','
        << format_real(w.markov) << ',' << format_real(w.planting_log) << ','
        << format_real(w.appendix_log) << '\n';
  }
  return out.str();
}

}  // namespace startail
