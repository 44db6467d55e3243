// Heat traces, zeta functions and residues of flat model Laplacians.

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>
#include <gtest/gtest.h>

#include "regtrace/spectral.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;

TEST(Theta, DirectAndPoissonAgree) {
  for (double tau : {0.05, 0.3, 1.0, 2.0, 6.0}) EXPECT_NEAR(detail::theta_poisson(tau) / detail::theta_direct(tau), 1.0, 1e-14) << tau;
  // theta(tau) = sum_k e^{-tau k^2}; at tau = 3 three terms suffice to 1e-16
  EXPECT_NEAR(detail::theta(3.0), 1.0 + 2.0 * (std::exp(-3.0) + std::exp(-12.0) + std::exp(-27.0)), 1e-15);
}

TEST(HeatTrace, TorusAtSmallTime) {
  // side 1: Tr e^{-t Delta} = theta(4 pi^2 t)^2 = 1/(4 pi t) (1 + O(e^{-1/t}))
  const auto m = SpectralModel::torus(2, 1.0);
  EXPECT_NEAR(heat_trace(m, 1e-3), 1.0 / (4.0 * pi * 1e-3), 1e-9);
  EXPECT_NEAR(heat_trace_direct(m, 0.05) / heat_trace_poisson(m, 0.05), 1.0, 1e-13);
}

TEST(HeatTrace, CircleOfRadiusTwo) {
  // eigenvalues (k/2)^2: Tr e^{-t Delta} = theta(t/4)
  const auto m = SpectralModel::circle(2.0);
  for (double t : {0.01, 0.5, 4.0}) EXPECT_NEAR(heat_trace(m, t) / detail::theta(t / 4.0), 1.0, 1e-13) << t;
}

TEST(HeatCoefficients, LeadingCoefficientIsWeylVolume) {
  const auto c = SpectralModel::circle(1.0);
  const auto hc = heat_coefficients(c, 3);
  EXPECT_NEAR(hc.a[0], 2.0 * pi / std::sqrt(4.0 * pi), 1e-14);
  for (std::size_t j = 1; j < hc.a.size(); ++j) EXPECT_EQ(hc.a[j], 0.0);
  EXPECT_LT(hc.max_deviation, 1e-8);
  const auto t = SpectralModel::torus({1.0, 2.5});
  EXPECT_NEAR(heat_coefficients(t, 2).a[0], 2.5 / (4.0 * pi), 1e-14);
}

TEST(Zeta, CircleIsTwiceRiemann) {
  const auto m = SpectralModel::circle(1.0);
  EXPECT_NEAR(spectral_zeta(m, 1.0), pi * pi / 3.0, 1e-11);
  EXPECT_NEAR(spectral_zeta(m, 2.0), 2.0 * boost::math::zeta(4.0), 1e-11);
  // continuation across the pole at w = 1/2
  EXPECT_NEAR(spectral_zeta(m, 0.25), 2.0 * boost::math::zeta(0.5), 1e-9);
  EXPECT_NEAR(spectral_zeta(m, -0.5), 2.0 * boost::math::zeta(-1.0), 1e-9);
}

TEST(Zeta, TorusMellinAgreesWithDirectSum) {
  const auto m = SpectralModel::torus(2, 1.0);
  const double w = 2.0;
  EXPECT_NEAR(spectral_zeta(m, w) / zeta_direct_sum(m, w), 1.0, 1e-6);
}

TEST(Residue, HeatAndZetaRoutes) {
  const auto c = residue_trace_power(SpectralModel::circle(1.0), -0.5);
  EXPECT_NEAR(c.heat, 2.0, 1e-10);
  EXPECT_NEAR(c.zeta, 2.0, 1e-8);
  EXPECT_NEAR(c.density, 2.0, 1e-12);
  // torus of side L: Res(Delta^{-1}) = L^2 / (2 pi)
  const double L = 1.7;
  const auto t = residue_trace_power(SpectralModel::torus(2, L), -1.0);
  EXPECT_NEAR(t.heat, L * L / (2.0 * pi), 1e-10);
  EXPECT_NEAR(t.zeta, L * L / (2.0 * pi), 1e-8);
}

TEST(KvTrace, CircleAgainstRiemannZeta) {
  const auto m = SpectralModel::circle(1.0);
  EXPECT_NEAR(kv_trace(m, 0.25), 2.0 * boost::math::zeta(0.5), 1e-9);
  EXPECT_THROW(kv_trace(m, 0.5), ValidationError);
  EXPECT_THROW(kv_trace(m, -1.0), ValidationError);
}

TEST(Counting, SmallLambda) {
  const auto c = SpectralModel::circle(1.0);
  // 0, +-1, +-2 have k^2 <= 4
  EXPECT_EQ(eigenvalue_count(c, 4.0), 5);
  const auto t = SpectralModel::torus(2, 2.0 * pi);
  // |k|^2 <= 2: the 9 points of {-1,0,1}^2
  EXPECT_EQ(eigenvalue_count(t, 2.0), 9);
  EXPECT_NEAR(weyl_constant(c), 2.0, 1e-14);
}

TEST(Model, Validation) {
  EXPECT_THROW(SpectralModel::circle(0.0), ValidationError);
  EXPECT_THROW(SpectralModel::torus(std::vector<double>{}), ValidationError);
  EXPECT_THROW(SpectralModel::torus({1.0, -1.0}), ValidationError);
}
