#pragma once
// The independent-summand model X = sum_{i<n} C(Y_i, r), Y_i ~ Bin(n, p):
// exact law by convolution, truncated exact tails in extended precision,
// seeded sampling, the degree-chain sandwich, and bound transfer through
// the graph-side pipelines.

#include "startail/bounds.hpp"
#include "startail/common.hpp"
#include "startail/oracles.hpp"
#include "startail/peeling.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace startail {

struct IidSumModel {
  std::uint64_t n = 0;
  Probability p{0.0};
  std::uint64_t r = 2;

  void validate() const {
    if (r < 1) throw std::invalid_argument("star arm count must be >= 1");
  }
  // n C(n, r); the mean is n C(n, r) p^r
  double max_value() const {
    return binomial_real(static_cast<double>(n), r) * static_cast<double>(n);
  }
  double mean() const { return max_value() * std::pow(p.value(), static_cast<double>(r)); }
};

// Upper limit on the support size n C(n, r) of the full convolution.
inline constexpr std::uint64_t kMaxIidSupport = 10'000'000;
// Rational convolution is used only while support * atoms * n stays below
// this; denominators grow like q^{n^2}, so the cost is far above the count.
inline constexpr std::uint64_t kMaxIidExactWork = 250'000;

// Law of C(Y, r), Y ~ Bin(n, p); values Y < r collapse onto 0.
inline Distribution iid_term_law(const IidSumModel& model) {
  model.validate();
  const auto n = model.n;
  if (model.p.is_exact()) {
    const Rational& p = *model.p.exact();
    const Rational q = 1 - p;
    std::map<std::uint64_t, Rational> law;
    for (std::uint64_t y = 0; y <= n; ++y)
      law[binomial_u64(y, model.r)] += Rational(binomial_big(n, y)) * ipow(p, y) * ipow(q, n - y);
    return Distribution::from_exact(std::move(law));
  }
  const double p = model.p.value();
  std::map<std::uint64_t, double> law;
  for (std::uint64_t y = 0; y <= n; ++y) {
    double w = 0.0;
    if (p == 0.0) w = y == 0 ? 1.0 : 0.0;
    else if (p == 1.0) w = y == n ? 1.0 : 0.0;
    else
      w = std::exp(log_binomial(static_cast<double>(n), static_cast<double>(y)) +
                   static_cast<double>(y) * std::log(p) +
                   static_cast<double>(n - y) * std::log1p(-p));
    law[binomial_u64(y, model.r)] += w;
  }
  return Distribution::from_mass(std::move(law));
}

// Exact law of X by n-fold convolution of the per-term law.
inline Distribution iid_exact_distribution(const IidSumModel& model) {
  model.validate();
  const auto term = iid_term_law(model);
  const BigInt support = binomial_big(model.n, model.r) * model.n;
  if (support > kMaxIidSupport)
    throw BudgetExceeded("iid convolution support exceeds 10^7 states");
  const auto top = support.convert_to<std::uint64_t>();
  if (term.is_exact() && top * term.mass.size() * model.n <= kMaxIidExactWork) {
    std::vector<Rational> cur(top + 1);
    cur[0] = 1;
    std::uint64_t reach = 0;
    for (std::uint64_t i = 0; i < model.n; ++i) {
      std::vector<Rational> next(top + 1);
      std::uint64_t next_reach = 0;
      for (std::uint64_t v = 0; v <= reach; ++v) {
        if (cur[v] == 0) continue;
        for (const auto& [a, w] : *term.exact) {
          next[v + a] += cur[v] * w;
          next_reach = std::max(next_reach, v + a);
        }
      }
      cur = std::move(next);
      reach = next_reach;
    }
    std::map<std::uint64_t, Rational> law;
    for (std::uint64_t v = 0; v <= reach; ++v)
      if (cur[v] != 0) law[v] = cur[v];
    return Distribution::from_exact(std::move(law));
  }
  std::vector<long double> cur(top + 1, 0.0L);
  cur[0] = 1.0L;
  std::uint64_t reach = 0;
  for (std::uint64_t i = 0; i < model.n; ++i) {
    std::vector<long double> next(top + 1, 0.0L);
    std::uint64_t next_reach = 0;
    for (std::uint64_t v = 0; v <= reach; ++v) {
      if (cur[v] == 0.0L) continue;
      for (const auto& [a, w] : term.mass) {
        next[v + a] += cur[v] * static_cast<long double>(w);
        next_reach = std::max(next_reach, v + a);
      }
    }
    cur = std::move(next);
    reach = next_reach;
  }
  std::map<std::uint64_t, double> law;
  for (std::uint64_t v = 0; v <= reach; ++v)
    if (cur[v] != 0.0L) law[v] = static_cast<double>(cur[v]);
  return Distribution::from_mass(std::move(law));
}

// Budget for iid_exact_tail, in (summand, state, atom) updates.
inline constexpr double kMaxIidTailWork = 1.5e9;

struct IidTail {
  long double value = 0.0L;
  double log_value = 0.0;
};

// Pr(X >= threshold) by convolution truncated at ceil(threshold), with
// every larger value absorbed into one bucket; long double keeps tails
// far below the double range. nullopt when the work exceeds the budget.
inline std::optional<IidTail> iid_exact_tail(const IidSumModel& model, double threshold) {
  model.validate();
  if (threshold <= 0.0) return IidTail{1.0L, 0.0};
  if (threshold > model.max_value()) return IidTail{0.0L, -kInf};
  const double p = model.p.value();
  if (p == 0.0) return IidTail{0.0L, -kInf};
  const auto cap = static_cast<std::uint64_t>(std::ceil(threshold));
  std::vector<std::pair<std::uint64_t, long double>> atoms;
  for (std::uint64_t y = 0; y <= model.n; ++y) {
    long double w = 0.0L;
    if (p == 1.0) w = y == model.n ? 1.0L : 0.0L;
    else
      w = std::exp(static_cast<long double>(
                       log_binomial(static_cast<double>(model.n), static_cast<double>(y))) +
                   static_cast<long double>(y) * std::log(static_cast<long double>(p)) +
                   static_cast<long double>(model.n - y) * std::log1p(-static_cast<long double>(p)));
    if (w == 0.0L) continue;
    const BigInt value = binomial_big(y, model.r);
    const std::uint64_t v = value >= cap ? cap : value.convert_to<std::uint64_t>();
    if (!atoms.empty() && atoms.back().first == v) atoms.back().second += w;
    else atoms.emplace_back(v, w);
  }
  std::sort(atoms.begin(), atoms.end());
  const double work = static_cast<double>(model.n) * static_cast<double>(cap + 1) *
                      static_cast<double>(atoms.size());
  if (work > kMaxIidTailWork) return std::nullopt;
  std::vector<long double> cur(cap + 1, 0.0L);
  cur[0] = 1.0L;
  std::vector<long double> next(cap + 1);
  for (std::uint64_t i = 0; i < model.n; ++i) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::uint64_t v = 0; v <= cap; ++v) {
      const long double here = cur[v];
      if (here == 0.0L) continue;
      for (const auto& [a, w] : atoms) next[std::min(cap, v + a)] += here * w;
    }
    std::swap(cur, next);
  }
  IidTail out;
  out.value = cur[cap];
  out.log_value = out.value > 0.0L ? static_cast<double>(std::log(out.value)) : -kInf;
  return out;
}

// Y_i = number of k < n with counter_uniform(seed, i n + k) < p.
inline std::vector<std::uint64_t> sample_iid_terms(const IidSumModel& model, std::uint64_t seed) {
  const double p = model.p.value();
  std::vector<std::uint64_t> y(model.n, 0);
  for (std::uint64_t i = 0; i < model.n; ++i)
    for (std::uint64_t k = 0; k < model.n; ++k)
      if (p == 1.0 || (p > 0.0 && counter_uniform(seed, i * model.n + k) < p)) ++y[i];
  return y;
}

inline std::uint64_t iid_value(std::span<const std::uint64_t> y, std::uint64_t r) {
  std::uint64_t s = 0;
  for (auto v : y) s += binomial_u64(v, r);
  return s;
}

struct IidSandwichReport {
  Verdict verdict = Verdict::holds;
  unsigned J = 0;
  std::uint64_t X = 0;
  std::uint64_t X_D = 0;           // sum over Y_i <= floor(D) of C(Y_i, r)
  std::vector<std::uint64_t> N;    // N_{D_j} = #{i : Y_i >= ceil(D_j)}, j < levels
  std::vector<double> thresholds;  // beta M / D_j
  double chain_binomial = 0.0;     // X_D + sum_{j<J} N_{D_j} C(floor(D_{j+1}), r)
  double chain_power = 0.0;        // X_D + 2 sum_{j<J} N_{D_j} D_j^r
  double chain_half_t = 0.0;       // X_D + t/2
  bool asserted = false;

  nlohmann::ordered_json to_json() const {
    return {{"verdict", to_string(verdict)},
            {"J", J},
            {"X", X},
            {"X_D", X_D},
            {"N", N},
            {"thresholds", thresholds},
            {"chain_binomial", chain_binomial},
            {"chain_power", chain_power},
            {"chain_half_t", chain_half_t},
            {"asserted", asserted}};
  }
};

// Certifies N_{D_j} < beta M / D_j for every j (exactly: N is a count) and,
// when certified, checks X <= chain_binomial <= chain_power <= chain_half_t.
// Throws LemmaViolation on a failed check.
inline IidSandwichReport iid_peel_and_sandwich(std::span<const std::uint64_t> y, std::uint64_t n,
                                               std::uint64_t r, double D, double t, double beta) {
  if (r < 2) throw std::invalid_argument("the degree chain needs r >= 2");
  if (!(D > 0.0 && t > 0.0)) throw std::invalid_argument("D and t must be positive");
  if (!(beta > 0.0 && beta <= 1.0 / 32.0)) throw std::invalid_argument("beta must lie in (0, 1/32]");
  for (auto v : y)
    if (v > n) throw std::invalid_argument("every Y_i must lie in [0, n]");
  PeelingParams params;
  params.r = r;
  params.D = D;
  params.t = t;
  params.beta = beta;
  IidSandwichReport rep;
  rep.J = params.top_level(n);
  rep.X = iid_value(y, r);
  const auto floor_d = static_cast<std::uint64_t>(std::floor(D));
  for (auto v : y)
    if (v <= floor_d) rep.X_D += binomial_u64(v, r);

  const double m = params.M(n);
  bool fails = false;
  const unsigned levels = std::max(rep.J, [&] {
    unsigned j = 0;
    while (params.level_cap(j) <= static_cast<double>(n)) ++j;
    return j;
  }());
  for (unsigned j = 0; j < levels; ++j) {
    const auto arms = params.level_arms(j);
    std::uint64_t count = 0;
    for (auto v : y)
      if (v >= arms) ++count;
    const double threshold = beta * m / params.level_cap(j);
    rep.N.push_back(count);
    rep.thresholds.push_back(threshold);
    if (!(static_cast<double>(count) < threshold)) fails = true;
  }
  rep.verdict = fails ? Verdict::fails : Verdict::holds;

  double extra_binomial = 0.0;
  double extra_power = 0.0;
  for (unsigned j = 0; j < rep.J; ++j) {
    const double nj = static_cast<double>(rep.N[j]);
    extra_binomial +=
        nj * binomial_real(std::floor(params.level_cap(j + 1)), r);
    extra_power += 2.0 * nj * std::pow(params.level_cap(j), static_cast<double>(r));
  }
  const double xd = static_cast<double>(rep.X_D);
  rep.chain_binomial = xd + extra_binomial;
  rep.chain_power = xd + extra_power;
  rep.chain_half_t = xd + t / 2.0;
  if (rep.verdict != Verdict::holds) return rep;
  rep.asserted = true;
  const double x = static_cast<double>(rep.X);
  if (!(x <= rep.chain_binomial)) throw LemmaViolation("iid chain: X exceeds the binomial sum");
  if (!(rep.chain_binomial <= rep.chain_power))
    throw LemmaViolation("iid chain: binomial sum exceeds the power sum");
  if (!(rep.chain_power <= rep.chain_half_t))
    throw LemmaViolation("iid chain: power sum exceeds t/2");
  return rep;
}

// Mean, variance and range of the iid model, in the form the pipelines use.
inline Moments iid_moments(const IidSumModel& model) {
  const auto term = iid_term_law(model);
  const double nd = static_cast<double>(model.n);
  return {model.n, model.p.value(), model.r, nd * term.mean(), nd * term.variance(),
          model.max_value()};
}

enum class DeviationKind { eps, t };

struct Deviation {
  DeviationKind kind = DeviationKind::eps;
  double value = 1.0;
  double gamma = 0.0;  // general pipeline only; 0 selects 1/(16r)
};

inline BoundReport iid_bound_transfer(const IidSumModel& model, const Deviation& deviation,
                                      const UnspecifiedConstants& constants = {}) {
  const Moments m = iid_moments(model);
  BoundReport rep;
  if (deviation.kind == DeviationKind::eps) {
    rep = pipeline_const_eps(m, deviation.value, constants);
  } else {
    const double gamma =
        deviation.gamma > 0.0 ? deviation.gamma : 1.0 / (16.0 * static_cast<double>(model.r));
    rep = pipeline_general(m, deviation.value, gamma, constants);
  }
  rep.label("model", "iid");
  return rep;
}

}  // namespace startail
