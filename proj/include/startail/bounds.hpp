#pragma once
// Closed-form moments and bound exponents for the K_{1,r} count, Chernoff
// style tail inequalities, and the two explicit upper-bound pipelines
// (constant relative deviation, and general deviation t with regime
// cases) evaluated with their literal constants.

#include "startail/common.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace startail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Moments

// X_{r,n,1} = n * C(n-1, r): the star count of K_n.
template <typename T = double>
T max_star_count(std::uint64_t n, std::uint64_t r) {
  if (n == 0) return T(0);
  return binomial_as<T>(n - 1, r) * T(n);
}

// mu = n * C(n-1, r) * p^r
template <typename T = double>
T star_mean(std::uint64_t n, const T& p, std::uint64_t r) {
  return max_star_count<T>(n, r) * ipow(p, r);
}

// Var X as a sum over ordered pairs of star copies sharing an edge of
// p^{|edges(a) u edges(b)|} - p^{2r}: identical copies, same-center copies
// sharing i leaves (1 <= i < r), and copies on distinct centers c, c' that
// share exactly the edge cc'.
template <typename T = double>
T star_variance(std::uint64_t n, const T& p, std::uint64_t r) {
  if (n == 0 || r == 0) return T(0);
  const T p_r = ipow(p, r);
  const T p_2r = ipow(p, 2 * r);
  T total = max_star_count<T>(n, r) * (p_r - p_2r);
  if (n - 1 >= r) {
    const T same_center = binomial_as<T>(n - 1, r) * T(n);
    for (std::uint64_t i = 1; i < r; ++i) {
      if (n - 1 - r < r - i) continue;
      total += same_center * binomial_as<T>(r, i) * binomial_as<T>(n - 1 - r, r - i) *
               (ipow(p, 2 * r - i) - p_2r);
    }
  }
  if (n >= 2) {
    const T shared = binomial_as<T>(n - 2, r - 1);
    total += T(n) * T(n - 1) * shared * shared * (ipow(p, 2 * r - 1) - p_2r);
  }
  return total;
}

// Lambda = mu * (1 + (np)^{r-1})
inline double variance_proxy(double mu, std::uint64_t n, double p, std::uint64_t r) {
  return mu * (1.0 + std::pow(static_cast<double>(n) * p, static_cast<double>(r) - 1.0));
}

// ---------------------------------------------------------------------------
// Scalar functions

// phi(x) = (1+x) log(1+x) - x, x >= 0.
inline double chernoff_phi(double x) {
  if (!(x >= 0.0)) throw std::domain_error("chernoff_phi needs x >= 0");
  if (x == kInf) return kInf;
  if (x < 1e-2) {
    // sum_{k>=2} (-1)^k x^k / (k (k-1))
    double term = x * x;
    double sum = 0.0;
    for (int k = 2; k < 14; ++k) {
      sum += ((k % 2 == 0) ? 1.0 : -1.0) * term / (k * (k - 1.0));
      term *= x;
    }
    return sum;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

// M(t) = max{t^{1/r}, t / n^{r-1}}
inline double deviation_scale(double t, std::uint64_t n, std::uint64_t r) {
  const double rr = static_cast<double>(r);
  return std::max(std::pow(t, 1.0 / rr),
                  t / std::pow(static_cast<double>(n), rr - 1.0));
}

// Moments of the count the exponents are evaluated for: the star count in
// G(n,p), or any other variable sharing its (n, p, r) parametrization.
struct Moments {
  std::uint64_t n = 0;
  double p = 0.0;
  std::uint64_t r = 2;
  double mu = 0.0;
  double sigma2 = 0.0;
  double max_value = 0.0;  // largest attainable value of the count
};

inline Moments star_moments(std::uint64_t n, double p, std::uint64_t r) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0, 1]");
  return {n, p, r, star_mean<double>(n, p, r), star_variance<double>(n, p, r),
          max_star_count<double>(n, r)};
}

// Phi = min{mu, max{mu^{1/r}, mu/n^{r-1}} log(1/p)}
inline double exponent_const_eps(const Moments& m) {
  if (!(m.p > 0.0 && m.p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
  if (m.mu == 0.0) return 0.0;
  return std::min(m.mu, deviation_scale(m.mu, m.n, m.r) * std::log(1.0 / m.p));
}

inline double exponent_const_eps(std::uint64_t n, double p, std::uint64_t r) {
  return exponent_const_eps(star_moments(n, p, r));
}

// Phi(eps) = min{phi(eps) mu^2 / sigma^2, M(eps mu) log(e/p)}
inline double exponent_eps(const Moments& m, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(m.sigma2 > 0.0)) throw std::domain_error("exponent_eps needs sigma^2 > 0");
  return std::min(chernoff_phi(eps) * m.mu * m.mu / m.sigma2,
                  deviation_scale(eps * m.mu, m.n, m.r) * (1.0 - std::log(m.p)));
}

inline double exponent_eps(std::uint64_t n, double p, std::uint64_t r, double eps) {
  return exponent_eps(star_moments(n, p, r), eps);
}

// Psi(t) = min{t^2 / sigma^2, M(t) log(e/p)}
inline double exponent_psi(const Moments& m, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(m.sigma2 > 0.0)) throw std::domain_error("exponent_psi needs sigma^2 > 0");
  return std::min(t * t / m.sigma2, deviation_scale(t, m.n, m.r) * (1.0 - std::log(m.p)));
}

inline double exponent_psi(std::uint64_t n, double p, std::uint64_t r, double t) {
  return exponent_psi(star_moments(n, p, r), t);
}

// ---------------------------------------------------------------------------
// Tail inequalities

struct TailPair {
  double first = 1.0;
  double second = 1.0;
  double log_first = 0.0;
  double log_second = 0.0;
};

inline TailPair make_tail_pair(double log_first, double log_second) {
  return {std::exp(log_first), std::exp(log_second), log_first, log_second};
}

// Pr(Z_C >= mu + t) <= exp(-phi(t/mu) mu / C) <= exp(-t^2 / (2C(mu+t)))
inline TailPair zc_tail_bound(double mu, double cap, double t) {
  if (!(mu > 0.0 && cap > 0.0 && t > 0.0))
    throw std::invalid_argument("zc_tail_bound needs mu, C, t > 0");
  return make_tail_pair(-chernoff_phi(t / mu) * mu / cap,
                        -t * t / (2.0 * cap * (mu + t)));
}

// Pr(X_D >= mu + t/2) <= exp(-phi(t/mu) mu / (16 D^{r-1}))
//                     <= exp(-min{t^2/mu, t} / (48 D^{r-1}))
inline TailPair bounded_star_tail_bound(double mu, double cap, std::uint64_t r, double t) {
  if (!(mu > 0.0 && cap > 0.0 && t > 0.0))
    throw std::invalid_argument("bounded_star_tail_bound needs mu, D, t > 0");
  const double spread = std::pow(cap, static_cast<double>(r) - 1.0);
  return make_tail_pair(-chernoff_phi(t / mu) * mu / (16.0 * spread),
                        -std::min(t * t / mu, t) / (48.0 * spread));
}

struct PackingTail {
  bool gate_ok = false;            // (e^3 np / D)^D <= n^{-8}
  double gate_log_lhs = 0.0;
  double gate_log_rhs = 0.0;
  std::optional<double> value;     // absent when the gate fails
  std::optional<double> log_value;
};

// Pr(N_{D_j} >= x) <= n^{-3} (np / (e ceil(D_j)))^{x D_j / 2} 1{D_j <= n},
// valid once the gate (e^3 np / D)^D <= n^{-8} holds.
inline PackingTail packing_tail_bound(std::uint64_t n, double p, double cap,
                                      unsigned level, double x) {
  if (n < 1 || !(p > 0.0 && p <= 1.0) || !(cap > 0.0) || !(x > 0.0))
    throw std::invalid_argument("packing_tail_bound needs n >= 1, p in (0,1], D, x > 0");
  const double nd = static_cast<double>(n);
  PackingTail out;
  out.gate_log_lhs = cap * (3.0 + std::log(nd * p / cap));
  out.gate_log_rhs = -8.0 * std::log(nd);
  out.gate_ok = out.gate_log_lhs <= out.gate_log_rhs;
  if (!out.gate_ok) return out;
  const double dj = std::ldexp(cap, static_cast<int>(level));
  if (dj > nd) {
    out.value = 0.0;
    out.log_value = -kInf;
    return out;
  }
  const double lv = -3.0 * std::log(nd) +
                    (x * dj / 2.0) * (std::log(nd * p) - 1.0 - std::log(std::ceil(dj)));
  out.log_value = lv;
  out.value = std::exp(lv);
  return out;
}

// ---------------------------------------------------------------------------
// Reports

// Constants whose existence is asserted but whose values are never fixed;
// every report carries them so that nothing is silently assumed.
struct UnspecifiedConstants {
  double c = 1.0;
  double d = 1.0;
  double b = 1.0;
  double n0 = 1.0;
  double alpha = 1.0;
  double beta_edges = 1.0;  // the deviation ceiling t <= beta mu of the edge bound

  void validate() const {
    for (double v : {c, d, b, n0, alpha, beta_edges})
      if (!(v > 0.0)) throw std::invalid_argument("constant overrides must be positive");
  }

  nlohmann::ordered_json to_json() const {
    return {{"c", c}, {"d", d}, {"b", b}, {"n0", n0}, {"alpha", alpha},
            {"beta_edges", beta_edges}};
  }
};

struct ReportScalar {
  std::string name;
  double value = 0.0;
  double log_value = 0.0;
  std::string formula;
};

class BoundReport {
 public:
  BoundReport() = default;
  explicit BoundReport(std::string kind) : kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

  void input(std::string name, double value) { inputs_.emplace_back(std::move(name), value); }

  void scalar(std::string name, double value, std::string formula) {
    const double lv = value > 0.0 ? std::log(value) : (value == 0.0 ? -kInf : kNaN);
    scalars_.push_back({std::move(name), value, lv, std::move(formula)});
  }
  // For probabilities evaluated in log space; the value may underflow.
  void log_scalar(std::string name, double log_value, std::string formula) {
    scalars_.push_back({std::move(name), std::exp(log_value), log_value, std::move(formula)});
  }
  void flag(std::string name, bool value) { flags_.emplace_back(std::move(name), value); }
  void label(std::string name, std::string value) {
    labels_.emplace_back(std::move(name), std::move(value));
  }
  void constants(const UnspecifiedConstants& c) { constants_ = c; }

  bool has(std::string_view name) const { return find(name) != nullptr; }
  double get(std::string_view name) const { return require(name).value; }
  double get_log(std::string_view name) const { return require(name).log_value; }
  bool get_flag(std::string_view name) const {
    for (const auto& [k, v] : flags_)
      if (k == name) return v;
    throw std::out_of_range("no flag " + std::string(name));
  }
  std::string get_label(std::string_view name) const {
    for (const auto& [k, v] : labels_)
      if (k == name) return v;
    throw std::out_of_range("no label " + std::string(name));
  }
  const std::vector<ReportScalar>& scalars() const { return scalars_; }

  // {"kind", "inputs", "scalars": [{"name","value","log_value","paper_eq"}],
  //  "flags", "labels", "constants"}; "paper_eq" holds the defining formula.
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind_;
    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inputs_) in[k] = v;
    j["inputs"] = in;
    nlohmann::ordered_json sc = nlohmann::ordered_json::array();
    for (const auto& s : scalars_)
      sc.push_back({{"name", s.name}, {"value", s.value}, {"log_value", s.log_value},
                    {"paper_eq", s.formula}});
    j["scalars"] = sc;
    nlohmann::ordered_json fl = nlohmann::ordered_json::object();
    for (const auto& [k, v] : flags_) fl[k] = v;
    j["flags"] = fl;
    nlohmann::ordered_json lb = nlohmann::ordered_json::object();
    for (const auto& [k, v] : labels_) lb[k] = v;
    j["labels"] = lb;
    j["constants"] = constants_.to_json();
    return j;
  }

 private:
  const ReportScalar* find(std::string_view name) const {
    for (const auto& s : scalars_)
      if (s.name == name) return &s;
    return nullptr;
  }
  const ReportScalar& require(std::string_view name) const {
    const auto* s = find(name);
    if (!s) throw std::out_of_range("no scalar " + std::string(name));
    return *s;
  }

  std::string kind_;
  std::vector<std::pair<std::string, double>> inputs_;
  std::vector<ReportScalar> scalars_;
  std::vector<std::pair<std::string, bool>> flags_;
  std::vector<std::pair<std::string, std::string>> labels_;
  UnspecifiedConstants constants_;
};

inline double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

namespace detail {
inline void add_moments(BoundReport& rep, const Moments& m) {
  rep.input("n", static_cast<double>(m.n));
  rep.input("p", m.p);
  rep.input("r", static_cast<double>(m.r));
  rep.scalar("mu", m.mu, "E X");
  rep.scalar("sigma2", m.sigma2, "Var X");
  rep.scalar("max_value", m.max_value, "X_{r,n,1} = n C(n-1,r)");
  rep.scalar("Lambda", variance_proxy(m.mu, m.n, m.p, m.r), "mu (1 + (np)^{r-1})");
}

inline void add_totals(BoundReport& rep, double log_total) {
  rep.log_scalar("total_unclamped", log_total, "sum of the two terms");
  rep.log_scalar("total", std::min(0.0, log_total), "min{1, total_unclamped}");
}

// (e^3 np / D)^D <= n^{-8}, in log space
inline bool packing_gate(std::uint64_t n, double p, double cap) {
  const double nd = static_cast<double>(n);
  return cap * (3.0 + std::log(nd * p / cap)) <= -8.0 * std::log(nd);
}
}  // namespace detail

// Constant-deviation pipeline: beta = 1/32, gamma = 1/(16r),
// A = max{e^4, 8/gamma}, s = log(e/p^gamma),
// D = A max{1, min{mu^{1/r}, n} / s^{1/(r-1)}}, M = M(eps mu), and
//   Pr(X >= (1+eps) mu) <= exp(-min{eps, eps^2} mu / (48 D^{r-1}))
//                          + n^{-2} exp(-beta M s / 2).
inline BoundReport pipeline_const_eps(const Moments& m, double eps,
                                      const UnspecifiedConstants& constants = {}) {
  constants.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(m.p > 0.0 && m.p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
  if (!(m.mu > 0.0)) throw std::invalid_argument("pipeline needs mu > 0");
  if (m.r < 2) throw std::invalid_argument("pipeline needs r >= 2");
  BoundReport rep("const_eps");
  rep.constants(constants);
  detail::add_moments(rep, m);
  rep.input("eps", eps);

  const double r = static_cast<double>(m.r);
  const double n = static_cast<double>(m.n);
  const double beta = 1.0 / 32.0;
  const double gamma = 1.0 / (16.0 * r);
  const double a = std::max(std::exp(4.0), 8.0 / gamma);
  const double s = 1.0 - gamma * std::log(m.p);
  const double cap = a * std::max(1.0, std::min(std::pow(m.mu, 1.0 / r), n) /
                                           std::pow(s, 1.0 / (r - 1.0)));
  const double t = eps * m.mu;
  const double scale = deviation_scale(t, m.n, m.r);
  const double zeta = std::min({eps, eps * eps, std::pow(eps, 1.0 / r)});
  const double pi = std::min(m.mu, deviation_scale(m.mu, m.n, m.r) * s);

  rep.scalar("t", t, "eps mu");
  rep.scalar("beta", beta, "1/32");
  rep.scalar("gamma", gamma, "1/(16r)");
  rep.scalar("A", a, "max{e^4, 8/gamma}");
  rep.scalar("s", s, "log(e/p^gamma)");
  rep.scalar("D", cap, "A max{1, min{mu^{1/r}, n} / s^{1/(r-1)}}");
  rep.scalar("M", scale, "max{t^{1/r}, t/n^{r-1}} at t = eps mu");
  rep.scalar("Mbar", std::min(scale, n), "min{M, n}");
  rep.scalar("C", 4.0 * std::pow(cap, r - 1.0), "4 D^{r-1}");
  rep.scalar("phi_eps", chernoff_phi(eps), "(1+eps) log(1+eps) - eps");
  rep.scalar("Phi", exponent_const_eps(m), "min{mu, max{mu^{1/r}, mu/n^{r-1}} log(1/p)}");
  if (m.sigma2 > 0.0) {
    rep.scalar("Phi_eps", exponent_eps(m, eps),
               "min{phi(eps) mu^2/sigma^2, M(eps mu) log(e/p)}");
    rep.scalar("Psi", exponent_psi(m, t), "min{t^2/sigma^2, M(t) log(e/p)}");
  }
  rep.scalar("zeta", zeta, "min{eps, eps^2, eps^{1/r}}");
  rep.scalar("Pi", pi, "min{mu, max{mu^{1/r}, mu/n^{r-1}} s}");

  const double log_bounded = -std::min(eps, eps * eps) * m.mu / (48.0 * std::pow(cap, r - 1.0));
  const double log_packing = -2.0 * std::log(n) - beta * scale * s / 2.0;
  rep.log_scalar("term_bounded", log_bounded,
                 "exp(-min{eps, eps^2} mu / (48 D^{r-1}))");
  rep.log_scalar("term_packing", log_packing, "n^{-2} exp(-beta M s / 2)");
  detail::add_totals(rep, log_sum_exp(log_bounded, log_packing));
  rep.log_scalar("markov", -eps / (1.0 + eps), "exp(-eps/(1+eps))");
  rep.scalar("markov_direct", 1.0 / (1.0 + eps), "1/(1+eps)");
  rep.scalar("c_zeta_Pi", constants.c * zeta * pi, "c zeta Pi");

  rep.flag("mean_deviation_at_least_one", (1.0 + eps) * m.mu >= 1.0);
  rep.flag("deviation_attainable", (1.0 + eps) * m.mu <= m.max_value);
  rep.flag("n_at_least_n0", n >= constants.n0);
  rep.flag("packing_gate", detail::packing_gate(m.n, m.p, cap));
  rep.flag("c_zeta_Pi_at_least_one", constants.c * zeta * pi >= 1.0);
  return rep;
}

inline BoundReport pipeline_const_eps(std::uint64_t n, double p, std::uint64_t r, double eps,
                                      const UnspecifiedConstants& constants = {}) {
  return pipeline_const_eps(star_moments(n, p, r), eps, constants);
}

// General-deviation pipeline: beta = 1/64, gamma' = min{gamma, 1/(16r)},
// A = max{e^4, 8 (3/gamma')^{1/(r-1)}, 8/gamma'}, s = log(e/p^{gamma'}),
// D = A max{1+np, (phi(t/mu) mu / (M s))^{1/(r-1)}}, Psi_L = phi(t/mu) mu^2 / Lambda,
//   Pr(X >= mu + t) <= exp(-phi(t/mu) mu / (16 D^{r-1}))
//                      + n^{-1} exp(-(beta/2) min{Psi_L, M s}).
// The regime cases are tested with the supplied gamma; shrinking gamma only
// weakens each case condition, so the constants use gamma'.
inline BoundReport pipeline_general(const Moments& m, double t, double gamma,
                                    const UnspecifiedConstants& constants = {}) {
  constants.validate();
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(m.p > 0.0 && m.p <= 1.0)) throw std::invalid_argument("p outside (0, 1]");
  if (!(m.mu > 0.0)) throw std::invalid_argument("pipeline needs mu > 0");
  if (m.r < 2) throw std::invalid_argument("pipeline needs r >= 2");
  BoundReport rep("general");
  rep.constants(constants);
  detail::add_moments(rep, m);
  rep.input("t", t);
  rep.input("gamma", gamma);

  const double r = static_cast<double>(m.r);
  const double n = static_cast<double>(m.n);
  const double np = n * m.p;
  const double log_n = std::log(n);
  const double scale = deviation_scale(t, m.n, m.r);
  const double phi = chernoff_phi(t / m.mu);
  const double lambda = variance_proxy(m.mu, m.n, m.p, m.r);

  // regime cases, with the supplied gamma
  const double s_case = 1.0 - gamma * std::log(m.p);
  const bool case_i = np >= gamma * log_n;
  const bool case_ii = np <= std::pow(n, -gamma);
  const double small_t = t <= std::min(m.mu, std::pow(n, r)) ? 1.0 : 0.0;
  const bool case_iii =
      t * t / m.mu >= small_t * gamma *
                          std::min(std::pow(t, 1.0 / r) * std::pow(log_n, r),
                                   scale * s_case * std::pow(log_n, r - 1.0));

  const double g = std::min(gamma, 1.0 / (16.0 * r));
  const double beta = 1.0 / 64.0;
  const double a = std::max({std::exp(4.0), 8.0 * std::pow(3.0 / g, 1.0 / (r - 1.0)), 8.0 / g});
  const double s = 1.0 - g * std::log(m.p);
  const double cap =
      a * std::max(1.0 + np, std::pow(phi * m.mu / (scale * s), 1.0 / (r - 1.0)));
  const double psi_lambda = phi * m.mu * m.mu / lambda;

  rep.scalar("beta", beta, "1/64");
  rep.scalar("gamma_used", g, "min{gamma, 1/(16r)}");
  rep.scalar("A", a, "max{e^4, 8 (3/gamma)^{1/(r-1)}, 8/gamma}");
  rep.scalar("s", s, "log(e/p^gamma)");
  rep.scalar("M", scale, "max{t^{1/r}, t/n^{r-1}}");
  rep.scalar("Mbar", std::min(scale, n), "min{M, n}");
  rep.scalar("phi_t_over_mu", phi, "phi(t/mu)");
  rep.scalar("D", cap, "A max{1+np, (phi(t/mu) mu / (M s))^{1/(r-1)}}");
  rep.scalar("C", 4.0 * std::pow(cap, r - 1.0), "4 D^{r-1}");
  rep.scalar("Psi_Lambda", psi_lambda, "phi(t/mu) mu^2 / Lambda");
  if (m.sigma2 > 0.0) rep.scalar("Psi", exponent_psi(m, t), "min{t^2/sigma^2, M(t) log(e/p)}");
  rep.scalar("M_log_e_over_p", scale * (1.0 - std::log(m.p)), "M log(e/p)");

  const double log_bounded = -phi * m.mu / (16.0 * std::pow(cap, r - 1.0));
  const double log_packing = -log_n - (beta / 2.0) * std::min(psi_lambda, scale * s);
  rep.log_scalar("term_bounded", log_bounded, "exp(-phi(t/mu) mu / (16 D^{r-1}))");
  rep.log_scalar("term_packing", log_packing, "n^{-1} exp(-(beta/2) min{Psi_Lambda, M s})");
  detail::add_totals(rep, log_sum_exp(log_bounded, log_packing));

  rep.flag("case_i", case_i);
  rep.flag("case_ii", case_ii);
  rep.flag("case_iii", case_iii);
  rep.flag("covered", case_i || case_ii || case_iii);
  rep.label("regime_case", case_i ? "i" : case_ii ? "ii" : case_iii ? "iii" : "none");
  rep.flag("deviation_attainable", m.mu + t >= 1.0 && m.mu + t <= m.max_value);
  rep.flag("n_at_least_n0", n >= constants.n0);
  rep.flag("packing_gate", detail::packing_gate(m.n, m.p, cap));
  return rep;
}

inline BoundReport pipeline_general(std::uint64_t n, double p, std::uint64_t r, double t,
                                    double gamma, const UnspecifiedConstants& constants = {}) {
  return pipeline_general(star_moments(n, p, r), t, gamma, constants);
}

// Comparison data for the simplifications of the exponent between the
// sub-Gaussian term and the clustered term.
struct RegimeRecord {
  double t_sq_over_var = 0.0;          // t^2 / sigma^2
  double phi_mu_sq_over_var = 0.0;     // phi(t/mu) mu^2 / sigma^2
  double phi_mu_sq_over_lambda = 0.0;  // phi(t/mu) mu^2 / Lambda
  double m_log_e_over_p = 0.0;         // M(t) log(e/p)
  // When t <= mu: phi(t/mu) mu^2/sigma^2 lies in [lower, upper].
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  bool small_deviation = false;  // t <= mu
  bool large_deviation = false;  // t >= mu, t^{1-1/r} >= log(n) 1{p<1/n}, p >= n^{-9}
  bool t_bounded_below = false;  // t^2/sigma^2 >= min{M, 1} and mu + t >= 1
};

inline RegimeRecord regime_simplify(std::uint64_t n, double p, std::uint64_t r, double t,
                                    double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  if (!(p > 0.0 && p <= 1.0 - xi)) throw std::invalid_argument("p must lie in (0, 1 - xi]");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const Moments m = star_moments(n, p, r);
  if (!(m.mu > 0.0 && m.sigma2 > 0.0))
    throw std::domain_error("regime_simplify needs mu, sigma^2 > 0");
  const double nd = static_cast<double>(n);
  const double rr = static_cast<double>(r);
  const double scale = deviation_scale(t, n, r);
  const double phi = chernoff_phi(t / m.mu);
  RegimeRecord rec;
  rec.t_sq_over_var = t * t / m.sigma2;
  rec.phi_mu_sq_over_var = phi * m.mu * m.mu / m.sigma2;
  rec.phi_mu_sq_over_lambda = phi * m.mu * m.mu / variance_proxy(m.mu, n, p, r);
  rec.m_log_e_over_p = scale * (1.0 - std::log(p));
  rec.bracket_upper = rec.t_sq_over_var;
  rec.bracket_lower = rec.t_sq_over_var / 3.0 * std::min(1.0, m.mu / t);
  rec.small_deviation = t <= m.mu;
  rec.large_deviation = t >= m.mu &&
                        std::pow(t, 1.0 - 1.0 / rr) >= std::log(nd) * (p < 1.0 / nd ? 1.0 : 0.0) &&
                        p >= std::pow(nd, -9.0);
  rec.t_bounded_below = rec.t_sq_over_var >= std::min(scale, 1.0) && m.mu + t >= 1.0;
  return rec;
}

}  // namespace startail
