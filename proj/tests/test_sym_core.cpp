// Symbols, polynomials, quadrature and the log-power primitive against closed forms.

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "regtrace/generators.hpp"
#include "regtrace/log_integral.hpp"
#include "regtrace/quadrature.hpp"
#include "regtrace/sym_core.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;

TEST(Quadrature, GaussLegendreIsExactForDegree2nMinus1) {
  quad::GaussLegendre g(6);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 10);
  EXPECT_NEAR(s, 2.0 / 11.0, 1e-15);
}

TEST(Quadrature, AdaptiveOnFiniteAndInfiniteRanges) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::exp(-x); }, 0.0, INFINITY), 1.0, 1e-13);
  // default tolerance: absolute 1e-11
  EXPECT_NEAR(quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0), -1.0, 1e-11);
  EXPECT_NEAR(quad::integrate([](double x) { return 1.0 / (1.0 + x * x); }, 3.0, INFINITY),
              pi / 2 - std::atan(3.0), 1e-13);
}

TEST(Quadrature, ReportsNonConvergence) {
  const auto f = [](double x) { return 1.0 / std::sqrt(x); };
  EXPECT_THROW(quad::integrate(f, 0.0, 1.0, {0.0, 1e-15, 2}), NumericalError);
}

TEST(Polynomial, SphereIntegralsOfMonomials) {
  // int_{S^{p-1}} prod x_i^{2a_i} = 2 prod Gamma(a_i + 1/2) / Gamma(sum a_i + p/2)
  const auto oracle = [](std::vector<int> a) {
    double num = 2.0, s = 0.0;
    for (int ai : a) {
      num *= std::tgamma(ai + 0.5);
      s += ai + 0.5;
    }
    return num / std::tgamma(s);
  };
  EXPECT_NEAR(Polynomial::monomial({2}).sphere_integral(), 2.0, 1e-15);
  EXPECT_NEAR(Polynomial::monomial({2, 0}).sphere_integral(), oracle({1, 0}), 1e-14);
  EXPECT_NEAR(Polynomial::monomial({2, 2, 0}).sphere_integral(), oracle({1, 1, 0}), 1e-14);
  EXPECT_NEAR(Polynomial::monomial({4, 0, 2}).sphere_integral(), oracle({2, 0, 1}), 1e-14);
  EXPECT_NEAR(Polynomial::monomial({1, 2}).sphere_integral(), 0.0, 1e-15);
}

TEST(Polynomial, Derivative) {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const Polynomial p = x * x * y + y * 3.0;
  const double at[2] = {0.7, -1.3};
  EXPECT_NEAR(p.derivative(0)(at), 2 * 0.7 * -1.3, 1e-15);
  EXPECT_NEAR(p.derivative(1)(at), 0.49 + 3.0, 1e-15);
}

TEST(SphereIntegral, TabulatedDataOnTheCircle) {
  const auto g = AngularFunction::tabulated(2, [](Point w) { return std::exp(w[0]); }, 32);
  EXPECT_NEAR(sphere_integral(g), 2 * pi * boost::math::cyl_bessel_i(0, 1.0), 1e-12);
}

TEST(SphereIntegral, TabulatedDataOnTheTwoSphere) {
  // int_{S^2} e^{z} = 2 pi (e - 1/e)
  const auto g = AngularFunction::tabulated(3, [](Point w) { return std::exp(w[2]); }, 24);
  EXPECT_NEAR(sphere_integral(g), 2 * pi * (std::exp(1.0) - std::exp(-1.0)), 1e-11);
}

TEST(Symbol, BracketValuesAndExpansion) {
  const auto s = bracket_symbol(1, -0.5);
  for (double x : {0.0, 0.3, 1.0, 2.5, 40.0}) EXPECT_NEAR(eval(s, {x}), 1.0 / std::sqrt(1 + x * x), 1e-14) << x;
  ASSERT_FALSE(s.terms.empty());
  EXPECT_DOUBLE_EQ(s.order, -1.0);
  EXPECT_DOUBLE_EQ(s.terms[0].order, -1.0);
  // (1+x^2)^{-1/2} = |x|^{-1} - |x|^{-3}/2 + ...
  const double w[1] = {1.0};
  EXPECT_NEAR(s.terms[0].angular(w), 1.0, 1e-15);
  EXPECT_NEAR(s.terms[1].angular(w), -0.5, 1e-15);
}

TEST(Symbol, TwoDimensionalBracketWithMonomial) {
  const auto s = bracket_symbol(2, -1.0, {1, 0}, 2.0);
  for (auto [x, y] : {std::pair{0.2, 0.1}, {1.5, -0.4}, {-7.0, 3.0}})
    EXPECT_NEAR(eval(s, {x, y}), x / (2.0 + x * x + y * y), 1e-14);
}

TEST(Symbol, DifferentiateMatchesClosedForm) {
  const auto d = differentiate(bracket_symbol(1, -0.5), 0);
  for (double x : {0.1, 0.9, 3.0, 25.0}) EXPECT_NEAR(eval(d, {x}), -x * std::pow(1 + x * x, -1.5), 1e-13) << x;
  EXPECT_DOUBLE_EQ(d.order, -2.0);
}

TEST(Symbol, ProductAndLinearCombination) {
  const auto a = bracket_symbol(1, -0.5);
  const auto p = multiply(a, a);
  for (double x : {0.0, 0.7, 5.0}) EXPECT_NEAR(eval(p, {x}), 1.0 / (1 + x * x), 1e-13);
  const auto l = linear_combination(2.0, a, -1.0, p);
  for (double x : {0.3, 4.0}) EXPECT_NEAR(eval(l, {x}), 2.0 / std::sqrt(1 + x * x) - 1.0 / (1 + x * x), 1e-13);
}

TEST(Symbol, ScaleVariable) {
  const auto s = bracket_symbol(2, -1.5);
  Eigen::MatrixXd A(2, 2);
  A << 2.0, 0.5, -0.3, 1.1;
  const auto t = scale_variable(s, A);
  for (auto [x, y] : {std::pair{0.3, 0.2}, {2.0, -1.0}, {10.0, 4.0}}) {
    const double u = 2.0 * x + 0.5 * y, v = -0.3 * x + 1.1 * y;
    EXPECT_NEAR(eval(t, {x, y}), std::pow(1 + u * u + v * v, -1.5), 1e-13);
  }
}

TEST(Symbol, HomogeneousTermWithLog) {
  const auto s = hom_symbol(1, -1.0, 2, Polynomial::constant(1, 1.0), CoreKind::zero);
  EXPECT_NEAR(eval(s, {3.0}), std::pow(std::log(3.0), 2) / 3.0, 1e-14);
  EXPECT_EQ(s.logdeg, 2);
}

TEST(Symbol, RejectsBadDimension) {
  EXPECT_THROW(bracket_symbol(4, -1.0), ValidationError);
  EXPECT_THROW(make_symbol(nlohmann::json{{"generator", "unknown"}}), ValidationError);
  EXPECT_THROW(make_symbol(nlohmann::json{{"dimension", 1}}), ValidationError);
}

TEST(LogPrimitive, AgainstQuadrature) {
  for (auto [alpha, k] : {std::pair{-2.0, 1}, {-0.5, 2}, {-1.0, 3}, {1.5, 0}}) {
    const double lam = 7.0;
    const double q = quad::integrate([=](double r) { return std::pow(r, alpha) * std::pow(std::log(r), k); }, 1.0, lam);
    EXPECT_NEAR(log_power_primitive(alpha, k, lam), q, 1e-11 * std::max(1.0, std::abs(q))) << alpha << " " << k;
  }
  // int_1^inf r^{-2} log r dr = 1
  EXPECT_NEAR(log_power_primitive_constant(-2.0, 1), 1.0, 1e-15);
}

TEST(Expansion, MergesEqualEntries) {
  AsymptoticExpansion e("lambda");
  e.add(1.0, 0, 2.0);
  e.add(1.0, 0, 0.5);
  e.add(-1.0, 1, 3.0);
  EXPECT_DOUBLE_EQ(e.coefficient(1.0, 0), 2.5);
  EXPECT_NEAR(e.evaluate(4.0), 2.5 * 4.0 + 3.0 * std::log(4.0) / 4.0, 1e-14);
  EXPECT_EQ(e.max_logpow(), 1);
}
