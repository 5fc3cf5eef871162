#include "startail/bounds.hpp"
#include "startail/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace startail;

TEST(Moments, MeanExamples) {
  EXPECT_DOUBLE_EQ(star_mean<double>(4, 0.5, 2), 3.0);
  EXPECT_DOUBLE_EQ(star_mean<double>(3, 1.0, 2), 3.0);
  EXPECT_EQ(star_mean<double>(2, 0.7, 2), 0.0);
  EXPECT_EQ(star_mean<Rational>(4, Rational(1, 2), 2), Rational(3));
}

TEST(Moments, VarianceExamples) {
  EXPECT_EQ(star_variance<Rational>(3, Rational(1, 2), 2), Rational(15, 16));
  EXPECT_DOUBLE_EQ(star_variance<double>(3, 0.5, 2), 0.9375);
  EXPECT_NEAR(star_variance<double>(5, 0.5, 2), exact_variance_bruteforce(5, 0.5, 2), 1e-12);
  EXPECT_EQ(star_variance<double>(6, 0.0, 3), 0.0);
}

TEST(Moments, VarianceMatchesBruteForceExactly) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t r : {2U, 3U})
      for (int k = 1; k <= 9; ++k) {
        const Rational p(k, 10);
        const auto d = exact_star_distribution(n, Probability(p), r);
        ASSERT_EQ(star_variance<Rational>(n, p, r), *d.exact_variance()) << n << r << k;
        ASSERT_NEAR(star_variance<double>(n, k / 10.0, r), d.variance(), 1e-12);
      }
}

TEST(Moments, VarianceWindowAgainstLambda) {
  double lo = 1e300;
  double hi = 0.0;
  for (std::uint64_t n = 5; n <= 200; n += 5)
    for (double p = 0.01; p <= 0.9; p += 0.01) {
      const double mu = star_mean<double>(n, p, 2);
      const double ratio = star_variance<double>(n, p, 2) / ((1 - p) * mu * (1 + n * p));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  EXPECT_GT(lo, 0.1);
  EXPECT_LT(hi, 10.0);
}

TEST(Phi, Values) {
  EXPECT_EQ(chernoff_phi(0.0), 0.0);
  EXPECT_NEAR(chernoff_phi(1.0), 2 * std::log(2.0) - 1, 1e-15);
  EXPECT_NEAR(chernoff_phi(2.0), 3 * std::log(3.0) - 2, 1e-15);
  EXPECT_NEAR(chernoff_phi(1e-6), 0.5e-12, 1e-18);
  EXPECT_THROW(chernoff_phi(-0.5), std::domain_error);
}

TEST(Phi, SeriesJoinsClosedForm) {
  for (double x : {0.009, 0.0099, 0.00999}) {
    const double closed = (1 + x) * std::log1p(x) - x;
    EXPECT_NEAR(chernoff_phi(x) / closed, 1.0, 1e-9);
  }
}

TEST(Phi, Inequalities) {
  for (int i = 0; i <= 10000; ++i) {
    const double x = 1000.0 * i / 10000.0;
    const double f = chernoff_phi(x);
    ASSERT_GE(chernoff_phi(x / 2), f / 4 * (1 - 1e-12));
    ASSERT_LE(f, x * x);
    ASSERT_GE(f, std::min(x, x * x) / 3);
    if (x >= std::exp(2.0)) ASSERT_GE(f, x * std::log(x) / 2);
  }
}

TEST(DeviationScale, Examples) {
  EXPECT_DOUBLE_EQ(deviation_scale(16, 10, 2), 4.0);
  EXPECT_DOUBLE_EQ(deviation_scale(16, 2, 2), 8.0);
  EXPECT_DOUBLE_EQ(deviation_scale(1, 7, 3), 1.0);
}

TEST(Exponents, ConstEps) {
  EXPECT_EQ(exponent_const_eps(5, 1.0, 2), 0.0);
  EXPECT_NEAR(exponent_const_eps(4, 0.5, 2), std::sqrt(3.0) * std::log(2.0), 1e-12);
  EXPECT_EQ(exponent_const_eps(2, 0.3, 2), 0.0);
}

TEST(Exponents, Eps) {
  const double s2 = star_variance<double>(4, 0.5, 2);
  EXPECT_NEAR(exponent_eps(4, 0.5, 2, 1.0),
              std::min(chernoff_phi(1.0) * 9 / s2, std::sqrt(3.0) * (1 + std::log(2.0))), 1e-12);
  const double eps = 1e-6;
  const double mu = 3.0;
  EXPECT_NEAR(exponent_eps(4, 0.5, 2, eps) / (eps * eps * mu * mu / s2 / 2), 1.0, 1e-3);
  EXPECT_THROW(exponent_eps(3, 1.0, 2, 1.0), std::domain_error);
}

TEST(Exponents, Psi) {
  const double s2 = star_variance<double>(4, 0.5, 2);
  const double sigma = std::sqrt(s2);
  EXPECT_NEAR(exponent_psi(4, 0.5, 2, sigma),
              std::min(1.0, deviation_scale(sigma, 4, 2) * (1 + std::log(2.0))), 1e-12);
  EXPECT_NEAR(exponent_psi(3, 0.5, 2, 1.0), 16.0 / 15.0, 1e-12);
}

TEST(TailBounds, ZcExamples) {
  const auto a = zc_tail_bound(1, 1, 1);
  EXPECT_NEAR(a.first, std::exp(-(2 * std::log(2.0) - 1)), 1e-12);
  EXPECT_NEAR(a.second, std::exp(-0.25), 1e-12);
  const auto b = zc_tail_bound(1, 2, 1);
  EXPECT_NEAR(b.first, std::exp(-(2 * std::log(2.0) - 1) / 2), 1e-12);
  EXPECT_NEAR(b.second, std::exp(-0.125), 1e-12);
  const auto c = zc_tail_bound(3, 1, 1e-9);
  EXPECT_NEAR(c.first, 1.0, 1e-9);
  EXPECT_NEAR(c.second, 1.0, 1e-9);
}

TEST(TailBounds, ZcOrdering) {
  for (double mu : {0.1, 1.0, 7.0, 100.0})
    for (double cap : {1.0, 3.0, 10.0})
      for (double t : {1e-3, 0.5, 2.0, 50.0, 1e4})
        ASSERT_LE(zc_tail_bound(mu, cap, t).log_first, zc_tail_bound(mu, cap, t).log_second);
}

TEST(TailBounds, BoundedStars) {
  const auto b = bounded_star_tail_bound(3, 1, 2, 3);
  EXPECT_NEAR(b.log_first, -chernoff_phi(1.0) * 3 / 16, 1e-15);
  EXPECT_NEAR(b.log_second, -3.0 / 48, 1e-15);
  const auto d = bounded_star_tail_bound(3, 2, 2, 3);
  EXPECT_NEAR(d.log_first, b.log_first / 2, 1e-15);
  EXPECT_NEAR(d.log_second, b.log_second / 2, 1e-15);
}

TEST(TailBounds, PackingGate) {
  const auto pass = packing_tail_bound(10, 0.001, 8, 0, 1);
  ASSERT_TRUE(pass.gate_ok);
  EXPECT_NEAR(*pass.log_value, std::log(1e-3) + 4 * std::log(0.01 / (std::exp(1.0) * 8)), 1e-12);
  const auto fail = packing_tail_bound(10, 0.9, 8, 0, 1);
  EXPECT_FALSE(fail.gate_ok);
  EXPECT_FALSE(fail.value.has_value());
  const auto beyond = packing_tail_bound(10, 0.001, 8, 1, 1);
  ASSERT_TRUE(beyond.gate_ok);
  EXPECT_EQ(*beyond.value, 0.0);
}

TEST(Pipeline, ConstEpsReport) {
  const auto rep = pipeline_const_eps(30, 0.1, 2, 1.0);
  const double mu = star_mean<double>(30, 0.1, 2);
  EXPECT_DOUBLE_EQ(rep.get("mu"), mu);
  EXPECT_DOUBLE_EQ(rep.get("gamma"), 1.0 / 32);
  EXPECT_DOUBLE_EQ(rep.get("A"), 256.0);
  EXPECT_NEAR(rep.get("s"), 1 + std::log(10.0) / 32, 1e-15);
  EXPECT_NEAR(std::exp(rep.get_log("total_unclamped")),
              rep.get("term_bounded") + rep.get("term_packing"), 1e-12);
  EXPECT_LE(rep.get("total"), 1.0);
  EXPECT_NEAR(rep.get("markov"), std::exp(-0.5), 1e-15);
  const auto j = rep.to_json();
  EXPECT_EQ(j["kind"], "const_eps");
  EXPECT_TRUE(j["scalars"][0].contains("paper_eq"));
  EXPECT_EQ(j["constants"]["b"], 1.0);
}

TEST(Pipeline, ConstEpsAtProbabilityOne) {
  const auto rep = pipeline_const_eps(10, 1.0, 2, 1.0);
  EXPECT_DOUBLE_EQ(rep.get("s"), 1.0);
  EXPECT_DOUBLE_EQ(rep.get("D"), 256.0 * std::max(1.0, std::min(std::sqrt(360.0), 10.0)));
  EXPECT_FALSE(rep.get_flag("deviation_attainable"));
}

TEST(Pipeline, ConstEpsHugeEpsClamps) {
  const auto rep = pipeline_const_eps(8, 0.2, 2, 1e6);
  EXPECT_LE(rep.get("total"), 1.0);
  EXPECT_GE(rep.get("total"), 0.0);
}

TEST(Pipeline, DeepTailsStayInLogSpace) {
  const auto rep = pipeline_const_eps(1000000, 0.5, 2, 10.0);
  EXPECT_TRUE(std::isfinite(rep.get_log("total")));
  EXPECT_LT(rep.get_log("total"), -700.0);
}

TEST(Pipeline, GeneralRegimes) {
  const double gamma = 1.0 / 32;
  const auto dense = pipeline_general(100, 0.5, 2, 10.0, gamma);
  EXPECT_TRUE(dense.get_flag("case_i"));
  EXPECT_EQ(dense.get_label("regime_case"), "i");
  const auto sparse = pipeline_general(100, 1e-4, 2, 10.0, gamma);
  EXPECT_FALSE(sparse.get_flag("case_i"));
  EXPECT_TRUE(sparse.get_flag("case_ii"));
  EXPECT_EQ(sparse.get_label("regime_case"), "ii");
}

TEST(Pipeline, GeneralAtProbabilityOne) {
  const double mu = star_mean<double>(6, 1.0, 2);
  const auto rep = pipeline_general(6, 1.0, 2, mu, 1.0 / 32);
  EXPECT_DOUBLE_EQ(rep.get("s"), 1.0);
  const double lambda = mu * (1 + 6.0);
  EXPECT_NEAR(rep.get("Psi_Lambda"), chernoff_phi(1.0) * mu * mu / lambda, 1e-12);
}

TEST(Pipeline, RejectsDegenerateInputs) {
  EXPECT_THROW(pipeline_const_eps(2, 0.5, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(pipeline_const_eps(5, 0.5, 2, -1.0), std::invalid_argument);
  EXPECT_THROW(pipeline_general(5, 0.5, 2, 1.0, 0.0), std::invalid_argument);
  UnspecifiedConstants bad;
  bad.c = 0.0;
  EXPECT_THROW(pipeline_const_eps(5, 0.5, 2, 1.0, bad), std::invalid_argument);
}

TEST(Pipeline, ScalarsRecomputableFromInputs) {
  const auto rep = pipeline_general(40, 0.05, 3, 7.0, 1.0 / 48);
  const double mu = rep.get("mu");
  const double scale = deviation_scale(7.0, 40, 3);
  EXPECT_DOUBLE_EQ(rep.get("M"), scale);
  const double g = rep.get("gamma_used");
  const double a = std::max({std::exp(4.0), 8 * std::pow(3 / g, 0.5), 8 / g});
  EXPECT_DOUBLE_EQ(rep.get("A"), a);
  const double s = 1 - g * std::log(0.05);
  const double d = a * std::max(1 + 40 * 0.05, std::pow(chernoff_phi(7 / mu) * mu / (scale * s), 0.5));
  EXPECT_NEAR(rep.get("D"), d, 1e-9 * d);
}

TEST(Regime, Brackets) {
  const auto rec = regime_simplify(10, 0.3, 2, 2.0, 0.1);
  ASSERT_TRUE(rec.small_deviation);
  EXPECT_LE(rec.phi_mu_sq_over_var, rec.bracket_upper);
  EXPECT_GE(rec.phi_mu_sq_over_var, rec.bracket_lower);
  const double mu = star_mean<double>(10, 0.3, 2);
  const auto at_mu = regime_simplify(10, 0.3, 2, mu, 0.1);
  EXPECT_NEAR(at_mu.phi_mu_sq_over_var,
              chernoff_phi(1.0) * mu * mu / star_variance<double>(10, 0.3, 2), 1e-9);
  EXPECT_TRUE(at_mu.t_bounded_below);
  EXPECT_THROW(regime_simplify(10, 0.95, 2, 1.0, 0.1), std::invalid_argument);
}
