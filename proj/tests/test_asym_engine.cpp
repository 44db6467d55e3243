// Large-lambda expansions of int B(x) Q(x, lambda) dx against closed forms.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "regtrace/asym_engine.hpp"
#include "regtrace/generators.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;

// F(lambda) = int_{|x|>1} x^{-2} (x^2+lambda^2)^{-1} dx
//           = 2/lambda^2 - (2/lambda^3)(pi/2 - atan(1/lambda))
double inverse_square_oracle(double l) { return 2.0 / (l * l) - 2.0 / (l * l * l) * (pi / 2 - std::atan(1.0 / l)); }

TEST(ExpansionLemma, InverseSquareCoefficients) {
  const auto e = bq_expansion(cutoff_power(1, -2.0), bracket_kernel(1, 1.0));
  // atan(1/l) = 1/l - 1/(3 l^3) + ...: F = 2 l^-2 - pi l^-3 + 2 l^-4 - (2/3) l^-6 + ...
  EXPECT_NEAR(e.coefficient(-2.0, 0), 2.0, 1e-10);
  EXPECT_NEAR(e.coefficient(-3.0, 0), -pi, 1e-10);
  EXPECT_NEAR(e.coefficient(-4.0, 0), 2.0, 1e-10);
  EXPECT_NEAR(e.coefficient(-5.0, 0), 0.0, 1e-10);
  EXPECT_NEAR(e.coefficient(-6.0, 0), -2.0 / 3.0, 1e-9);
}

TEST(ExpansionLemma, DirectQuadratureMatchesClosedForm) {
  const auto B = cutoff_power(1, -2.0);
  const auto Q = bracket_kernel(1, 1.0);
  for (double l : {0.5, 3.0, 10.0, 1e3}) EXPECT_NEAR(numeric_F(B, Q, l) / inverse_square_oracle(l), 1.0, 1e-11) << l;
}

TEST(ExpansionLemma, LogarithmicSymbol) {
  // 2 int_1^inf log x/(x^2+l^2) = pi log l / l + 2 sum_k (-1)^k l^{-2k-2}/(2k+1)^2
  const auto B = cutoff_power(1, 0.0, 1);
  const auto Q = bracket_kernel(1, 1.0);
  const auto e = bq_expansion(B, Q);
  EXPECT_NEAR(e.coefficient(-1.0, 1), pi, 1e-10);
  EXPECT_NEAR(e.coefficient(-1.0, 0), 0.0, 1e-10);
  EXPECT_NEAR(e.coefficient(-2.0, 0), 2.0, 1e-10);
  EXPECT_NEAR(e.coefficient(-4.0, 0), -2.0 / 9.0, 1e-9);
  const double l = 10.0;
  double series = pi * std::log(l) / l;
  for (int k = 0; k < 12; ++k) series += 2.0 * ((k % 2) ? -1.0 : 1.0) * std::pow(l, -2.0 * k - 2) / ((2 * k + 1) * (2 * k + 1));
  EXPECT_NEAR(numeric_F(B, Q, l), series, 1e-12);
}

TEST(ExpansionLemma, NonIntegerOrderInTwoDimensions) {
  // 2 pi int_1^inf r^{1/2}/(r^2+l^2) dr = 2 pi [ (pi/sqrt 2) l^{-1/2} - (2/3) l^{-2} + (2/7) l^{-4} - ... ]
  const auto e = bq_expansion(cutoff_power(2, -0.5), bracket_kernel(2, 1.0));
  EXPECT_NEAR(e.coefficient(-0.5, 0), std::sqrt(2.0) * pi * pi, 1e-8);
  EXPECT_NEAR(e.coefficient(-2.0, 0), -4.0 * pi / 3.0, 1e-9);
  EXPECT_NEAR(e.coefficient(-4.0, 0), 4.0 * pi / 7.0, 1e-8);
  EXPECT_FALSE(e.contains(-0.5, 1) && e.coefficient(-0.5, 1) != 0.0);
}

TEST(ExpansionLemma, RejectsDivergentPairs) {
  // b + q + n = 0: the integral diverges
  EXPECT_THROW(bq_expansion(cutoff_power(1, 1.0), bracket_kernel(1, 1.0)), ValidationError);
  EXPECT_THROW(bq_expansion(cutoff_power(2, -2.0), bracket_kernel(1, 1.0)), ValidationError);
}

TEST(Fit, RecoversSyntheticCoefficients) {
  std::vector<std::pair<double, double>> smp;
  for (double x : log_spaced(1e2, 1e4, 20)) smp.push_back({x, 3.0 / x - 0.5 * std::log(x) / (x * x) + 7.0 / (x * x)});
  const auto f = fit_expansion(smp, {{-1, 0}, {-2, 1}, {-2, 0}, {-3, 0}});
  EXPECT_NEAR(f.expansion.coefficient(-1.0, 0), 3.0, 1e-9);
  EXPECT_NEAR(f.expansion.coefficient(-2.0, 1), -0.5, 1e-7);
  EXPECT_NEAR(f.expansion.coefficient(-2.0, 0), 7.0, 1e-6);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_THROW(fit_expansion({{1.0, 1.0}}, {{-1, 0}}), ValidationError);
}
