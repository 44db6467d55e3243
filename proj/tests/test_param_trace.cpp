// Parametric trace TR(a)(mu) = sum_k a(k, mu) and its regularized value.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "regtrace/param_trace.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;

// sum_k 1/(k^2 + r^2) = (pi/r) coth(pi r)
double coth_sum(double r) { return pi / (r * std::tanh(pi * r)); }

TEST(Multiplier, BracketDerivatives) {
  const auto a = bracket_multiplier(-1.0);
  const double xi = 0.7, mu = 1.3, u = xi * xi + mu * mu + 1.0;
  EXPECT_NEAR(a(xi, mu), 1.0 / u, 1e-15);
  EXPECT_NEAR(a(xi, mu, 0, 1), -2.0 * mu / (u * u), 1e-15);
  EXPECT_NEAR(a(xi, mu, 1, 1), 8.0 * xi * mu / (u * u * u), 1e-14);
  EXPECT_NEAR(a(xi, mu, 0, 2), -2.0 / (u * u) + 8.0 * mu * mu / (u * u * u), 1e-14);
  // huge arguments stay finite
  EXPECT_TRUE(std::isfinite(a(1e200, 1e200, 2, 3)));
}

TEST(Multiplier, Combinators) {
  const auto a = bracket_multiplier(-2.0, 2.0, 3.0);
  const auto m = mu_power_times(a, 2);
  EXPECT_NEAR(m(0.5, 1.5), 1.5 * 1.5 * a(0.5, 1.5), 1e-15);
  const auto r = reflected(m);
  EXPECT_NEAR(r(0.5, -1.5), m(0.5, 1.5), 1e-15);
  const auto l = linear_combination(2.0, a, -1.0, m);
  EXPECT_NEAR(l(0.3, 0.9), 2.0 * a(0.3, 0.9) - m(0.3, 0.9), 1e-15);
  EXPECT_NEAR(mu_derivative(a)(0.3, 0.9), a(0.3, 0.9, 0, 1), 1e-15);
  EXPECT_DOUBLE_EQ(m.order, -2.0);
}

TEST(Multiplier, FromJson) {
  const auto a = make_multiplier(nlohmann::json{{"multiplier", "bracket"}, {"s", -1.0}, {"c", 2.0}});
  EXPECT_NEAR(a(1.0, 1.0), 0.25, 1e-15);
  EXPECT_THROW(make_multiplier(nlohmann::json{{"multiplier", "nope"}}), ValidationError);
  EXPECT_THROW(make_multiplier(nlohmann::json{{"s", 1}}), ValidationError);
}

TEST(LatticeSum, MittagLefflerClosedForms) {
  const auto a = bracket_multiplier(-1.0);
  EXPECT_NEAR(lattice_sum(a, 0.0, 0), coth_sum(1.0), 1e-13);
  EXPECT_NEAR(lattice_sum(a, 2.0, 0), coth_sum(std::sqrt(5.0)), 1e-13);
  EXPECT_NEAR(lattice_sum(a, 300.0, 0), coth_sum(std::sqrt(90001.0)), 1e-15);
  // d/dmu sum_k 1/(k^2+mu^2+1) = -mu/r d/dr [(pi/r) coth(pi r)]
  const double mu = 0.8, r = std::sqrt(mu * mu + 1.0), h = 1e-5;
  const double dr = (coth_sum(r + h) - coth_sum(r - h)) / (2 * h);
  EXPECT_NEAR(lattice_sum(a, mu, 1), mu / r * dr, 1e-9);
}

TEST(TraceFunction, TraceClassDepth) {
  EXPECT_EQ(trace_function(bracket_multiplier(-1.0)).alpha, 0);
  EXPECT_EQ(trace_function(bracket_multiplier(-0.25)).alpha, 1);
  EXPECT_EQ(trace_function(bracket_multiplier(0.5)).alpha, 3);
  EXPECT_THROW(trace_function(bracket_multiplier(0.5), 1), ValidationError);
}

TEST(TraceFunction, RepresentativesDifferByPolynomials) {
  // the depth 1 representative is int_0^mu sum_k d_mu a(k, t) dt = TR(mu) - TR(0)
  const auto a = bracket_multiplier(-1.0);
  const auto t0 = trace_function(a), t1 = trace_function(a, 1);
  for (double mu : {-2.5, 0.6, 7.0}) {
    const double r = std::sqrt(mu * mu + 1.0);
    EXPECT_NEAR(t0(mu), coth_sum(r), 1e-13);
    EXPECT_NEAR(t1(mu), coth_sum(r) - coth_sum(1.0), 1e-11) << mu;
  }
  EXPECT_EQ(t1(0.0), 0.0);
}

TEST(Expansion, AnalyticBracket) {
  // pi/sqrt(mu^2+1) = pi (mu^-1 - mu^-3/2 + 3 mu^-5/8 - ...)
  const auto e = trace_expansion(bracket_multiplier(-1.0));
  EXPECT_TRUE(e.analytic);
  EXPECT_NEAR(e.plus.coefficient(-1.0, 0), pi, 1e-14);
  EXPECT_NEAR(e.plus.coefficient(-3.0, 0), -pi / 2, 1e-14);
  EXPECT_NEAR(e.plus.coefficient(-5.0, 0), 3 * pi / 8, 1e-14);
  EXPECT_NEAR(e.minus.coefficient(-1.0, 0), pi, 1e-14);
  // s = -1/4: sqrt(pi) Gamma(-1/4)/Gamma(1/4) (mu^2+1)^{1/4}
  const auto q = trace_expansion(bracket_multiplier(-0.25));
  EXPECT_NEAR(q.plus.coefficient(0.5, 0), std::sqrt(pi) * std::tgamma(-0.25) / std::tgamma(0.25), 1e-13);
}

TEST(Expansion, FittedLogTerms) {
  // int_{-L}^{L} sqrt(xi^2 + m^2) = L^2 + m^2/2 + m^2 log(2L/m) + o(1), m^2 = mu^2 + 1:
  // the class modulo polynomials has -mu^2 log mu - log mu + O(mu^-2)
  const auto e = trace_expansion(bracket_multiplier(0.5));
  EXPECT_FALSE(e.analytic);
  EXPECT_NEAR(e.plus.coefficient(2.0, 1), -1.0, 1e-6);
  EXPECT_NEAR(e.plus.coefficient(0.0, 1), -1.0, 1e-5);
  EXPECT_LT(e.fit_residual, 1e-8);
}

TEST(RegularizedTrace, InverseBracket) {
  // TR = pi/r + 2 pi/(r (e^{2 pi r} - 1)), r = sqrt(mu^2+1); pf int pi/r = 2 pi log 2
  const auto tail = [](double mu) {
    const double r = std::sqrt(mu * mu + 1.0);
    return 2 * pi / (r * std::expm1(2 * pi * r));
  };
  double s = 0.0;
  const int n = 20000;
  const double L = 12.0;
  for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * tail(L * i / n);
  const double oracle = 2 * pi * std::log(2.0) + 2.0 * s * L / (3 * n);
  EXPECT_NEAR(tr_bar(bracket_multiplier(-1.0)), oracle, 1e-10);
  EXPECT_NEAR(res_of_TR(bracket_multiplier(-1.0)), 1.0, 1e-13);
}

TEST(RegularizedTrace, VanishingCases) {
  // tr_bar of a mu-derivative is 0
  EXPECT_NEAR(derived_trace(bracket_multiplier(-1.0)), 0.0, 1e-9);
  // odd in mu
  EXPECT_NEAR(tr_bar(mu_power_times(bracket_multiplier(-2.0))), 0.0, 1e-10);
  // polynomial in mu: TR = 0 modulo polynomials
  EXPECT_EQ(tr_bar(polynomial_mu_multiplier({0.0, 0.0, 1.0})), 0.0);
  EXPECT_EQ(tr_bar(zero_multiplier()), 0.0);
}
