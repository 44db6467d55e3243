// Partie finie, residue, Stokes defect and change of variables against
// hand-computed ball integrals.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "regtrace/generators.hpp"
#include "regtrace/reg_int.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;

TEST(PartieFinie, InverseSquareRootInOneDimension) {
  // int_{-R}^{R} (1+x^2)^{-1/2} = 2 asinh R = 2 log R + 2 log 2 + o(1)
  const auto e = ball_integral_expansion(bracket_symbol(1, -0.5));
  EXPECT_NEAR(e.coefficient(0.0, 0), 2.0 * std::log(2.0), 1e-10);
  EXPECT_NEAR(e.coefficient(0.0, 1), 2.0, 1e-14);
}

TEST(PartieFinie, CutoffPowerIsExact) {
  // int_{1<|x|<R} |x|^{-2} = 2 - 2/R; the core vanishes
  EXPECT_EQ(partie_finie(cutoff_power(1, -2.0)), 2.0);
}

TEST(PartieFinie, TwoDimensionalBrackets) {
  // int_{|x|<R} (1+|x|^2)^{-1} = pi log(1+R^2): the constant term is 0
  EXPECT_NEAR(partie_finie(bracket_symbol(2, -1.0)), 0.0, 1e-10);
  // (1+|x|^2)^{-3/2} is integrable with total mass 2 pi
  EXPECT_NEAR(partie_finie(bracket_symbol(2, -1.5)), 2.0 * pi, 1e-10);
}

TEST(PartieFinie, PolynomialsHaveZeroPartieFinie) {
  const Polynomial x = Polynomial::variable(1, 0);
  EXPECT_NEAR(partie_finie(polynomial_symbol(x * x)), 0.0, 1e-13);
  EXPECT_NEAR(partie_finie(polynomial_symbol(Polynomial::constant(1, 3.0))), 0.0, 1e-13);
}

TEST(PartieFinie, GaussianIsAnOrdinaryIntegral) {
  EXPECT_NEAR(partie_finie(gaussian_symbol(2)), pi, 1e-10);
}

TEST(Residue, RawAndNormalized) {
  EXPECT_NEAR(residue_integral(bracket_symbol(1, -0.5)), 2.0, 1e-14);
  EXPECT_NEAR(residue_integral(bracket_symbol(2, -1.0)), 2.0 * pi, 1e-13);
  EXPECT_NEAR(residue_integral(bracket_symbol(2, -1.0), ResidueNormalization::two_pi_power), 1.0 / (2.0 * pi), 1e-14);
  // no degree -p term
  EXPECT_EQ(residue_integral(bracket_symbol(2, -1.5)), 0.0);
}

TEST(Stokes, DefectOfATwoDimensionalSymbol) {
  // pf int d_1 [x1/(1+|x|^2)] = lim int_{|x|=R} x1 w1/(1+R^2) = pi
  const auto f = bracket_symbol(2, -1.0, {1, 0});
  EXPECT_NEAR(stokes_defect(f, 0), pi, 1e-12);
  EXPECT_NEAR(stokes_defect_bruteforce(f, 0), pi, 1e-7);
  EXPECT_NEAR(stokes_defect(f, 1), 0.0, 1e-12);
}

TEST(Stokes, DefectInOneDimension) {
  // pf int d_x [x (1+x^2)^{-1/2}] = lim (R - (-R))/sqrt(1+R^2) = 2
  const auto f = bracket_symbol(1, -0.5, {1});
  EXPECT_NEAR(stokes_defect(f, 0), 2.0, 1e-12);
  EXPECT_NEAR(stokes_defect_bruteforce(f, 0), 2.0, 1e-7);
}

TEST(ChangeOfVariables, OneDimensionalDilation) {
  // int_{-R}^{R} (1+a^2 x^2)^{-1/2} = (2/a) asinh(aR): pf = (2/a) log(2a)
  const double a = 3.0;
  Eigen::MatrixXd A(1, 1);
  A << a;
  const auto c = change_of_variables_check(bracket_symbol(1, -0.5), A);
  EXPECT_NEAR(c.lhs, 2.0 / a * std::log(2.0 * a), 1e-9);
  EXPECT_NEAR(c.rhs, c.lhs, 1e-9);
  EXPECT_NE(c.correction, 0.0);
}

TEST(ChangeOfVariables, RandomPlanarMatrices) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const auto f = bracket_symbol(2, -1.0, {2, 0});
  for (int i = 0; i < 5; ++i) {
    Eigen::MatrixXd A(2, 2);
    A << g(rng), g(rng), g(rng), g(rng);
    if (std::abs(A.determinant()) < 0.3) continue;
    const auto c = change_of_variables_check(f, A);
    EXPECT_NEAR(c.lhs, c.rhs, 1e-8) << A;
  }
}

TEST(ChangeOfVariables, RejectsSingularMatrix) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(change_of_variables_check(bracket_symbol(2, -1.0), A), ValidationError);
}
