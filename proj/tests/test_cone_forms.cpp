// Radial profiles, regularized fiber integration and the Thom homotopy on cones.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "regtrace/cone_forms.hpp"
#include "regtrace/generators.hpp"
#include "regtrace/quadrature.hpp"

using namespace regtrace;
using namespace regtrace::cone;
constexpr double pi = std::numbers::pi;

TEST(Profile, PartieFinieOfPowers) {
  // pf int_1^inf r^e dr = -1/(e+1); int_1^inf r^{-2} log r = 1
  EXPECT_DOUBLE_EQ(Profile::tail_power(-0.5).partie_finie(), -2.0);
  EXPECT_DOUBLE_EQ(Profile::tail_power(-2.0).partie_finie(), 1.0);
  EXPECT_DOUBLE_EQ(Profile::tail_power(-2.0, 1.0, 1).partie_finie(), 1.0);
  EXPECT_DOUBLE_EQ(Profile::tail_power(-1.0).partie_finie(), 0.0);
  EXPECT_DOUBLE_EQ(Profile::core({1.0, 2.0}).partie_finie(), 2.0);
  EXPECT_DOUBLE_EQ((Profile::tail_power(-1.0, 3.0) + Profile::tail_power(-3.0)).residue(), 3.0);
}

TEST(Profile, AntiderivativeMatchesQuadrature) {
  const Profile f = Profile::core({0, 0, 3, -1}) + Profile::tail_power(-1.5, 2.0) + Profile::tail_power(-2.5, 0.7, 1);
  const Profile F = f.antiderivative();
  for (double r : {0.4, 1.0, 2.0, 9.0}) {
    std::vector<double> br;
    if (r > 1.0) br.push_back(1.0);
    EXPECT_NEAR(F(r), quad::integrate_piecewise([&](double x) { return f(x); }, 0.0, r, br), 1e-12) << r;
  }
}

TEST(Profile, DerivativeRecordsTheJump) {
  // core 1 on [0,1), tail r^{-2}: continuous, so no atom
  const Profile f = Profile::core({1.0}) + Profile::tail_power(-2.0);
  EXPECT_EQ(f.derivative().atom(), 0.0);
  // core 0, tail r^{-2}: jump of +1 at r = 1
  const Profile g = Profile::tail_power(-2.0);
  EXPECT_EQ(g.derivative().atom(), 1.0);
  EXPECT_NEAR(g.derivative()(2.0), -2.0 / 8.0, 1e-15);
  EXPECT_THROW(g.derivative().derivative(), ValidationError);
  // the antiderivative of the derivative returns the profile up to f(0)
  EXPECT_EQ(g.derivative().antiderivative(), g);
}

TEST(ProfileSpace, TypesAndMembership) {
  EXPECT_EQ(ProfileSpace::classical(0.0).type(), SpaceType::II);
  EXPECT_EQ(ProfileSpace::classical(2.0).type(), SpaceType::II);
  EXPECT_EQ(ProfileSpace::classical(-0.5).type(), SpaceType::I);
  EXPECT_EQ(ProfileSpace::classical(0.5).type(), SpaceType::I);
  EXPECT_EQ(ProfileSpace::schwartz().type(), SpaceType::I);
  EXPECT_THROW(ProfileSpace::classical(-1.0), ValidationError);
  EXPECT_THROW(ProfileSpace::classical(-2.0), ValidationError);

  const auto I = ProfileSpace::classical(-0.5);
  EXPECT_TRUE(I.contains(Profile::tail_power(-1.5) + Profile::tail_power(-2.5)));
  EXPECT_FALSE(I.contains(Profile::tail_power(-1.0)));
  EXPECT_FALSE(I.contains(Profile::tail_power(-1.5, 1.0, 1)));
  EXPECT_FALSE(ProfileSpace::schwartz().contains(Profile::tail_power(-3.0)));
  // type II integrates by the residue, type I by the partie finie
  EXPECT_EQ(ProfileSpace::classical(0.0).integral(Profile::tail_power(-1.0, 4.0) + Profile::core({0, 1})), 4.0);
  EXPECT_EQ(I.integral(Profile::tail_power(-1.5)), 2.0);
  EXPECT_EQ(ProfileSpace::classical(0.0).compact_multiple(), 0.0);
  EXPECT_EQ(I.compact_multiple(), 1.0);
}

TEST(AmbientForm, ExteriorDerivative) {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  // d(x^2 y) = 2xy dx + x^2 dy; d(x dy - y dx) = 2 dx^dy
  const auto f = AmbientForm::function(x * x * y);
  EXPECT_EQ(f.d(), AmbientForm::monomial(2.0 * x * y, {0}) + AmbientForm::monomial(x * x, {1}));
  const auto w = AmbientForm::monomial(x, {1}) + AmbientForm::monomial(-1.0 * y, {0});
  EXPECT_EQ(w.d(), AmbientForm::monomial(Polynomial::constant(2, 2.0), {0, 1}));
  EXPECT_TRUE(f.d().d().is_zero());
}

TEST(ConeForm, DSquaredVanishes) {
  const Polynomial X = Polynomial::variable(3, 0), Y = Polynomial::variable(3, 1), Z = Polynomial::variable(3, 2);
  ConeForm w(3, 1);
  w.add_tangential(Profile::core({0, 0, 1}) + Profile::tail_power(-0.5), AmbientForm::monomial(X * Y, {2}));
  w.add_radial(Profile::core({0, 0, 2}) + Profile::tail_power(-1.5, 3.0), AmbientForm::function(Z * Z + X));
  EXPECT_TRUE(w.d().d().is_zero());
  EXPECT_EQ(w.d().degree(), 2);
}

TEST(Thom, FiberIntegrationOfTheSection) {
  const auto I = ProfileSpace::classical(-0.5);
  const Profile phi = Profile::tail_power(-1.5, 0.5);
  const Polynomial x = Polynomial::variable(2, 0);
  const auto eta = AmbientForm::function(x * x);
  EXPECT_EQ(fiber_integrate(thom_section(eta, phi, I), I), eta);
  EXPECT_THROW(thom_section(eta, Profile::tail_power(-1.5), I), ValidationError);
  // coefficients must vanish near the cone point
  ConeForm bad(2, 1);
  bad.add_radial(Profile::core({1.0}), AmbientForm::function(Polynomial::constant(2, 1.0)));
  EXPECT_THROW(fiber_integrate(bad, I), ValidationError);
}

TEST(Thom, HomotopyOperatorClosedForm) {
  // omega = chi (r^{-3/2} + r^{-5/2}) dr, phi = chi r^{-3/2}/2 in CS^{-1/2}:
  // oint f = 2 + 2/3 = 8/3, K omega(r) = int_1^r (s^{-5/2} - s^{-3/2}/3) ds
  const auto I = ProfileSpace::classical(-0.5);
  ConeForm w(2, 1);
  w.add_radial(Profile::tail_power(-1.5) + Profile::tail_power(-2.5),
               AmbientForm::function(Polynomial::constant(2, 1.0)));
  const auto K = homotopy_K(w, Profile::tail_power(-1.5, 0.5), I);
  ASSERT_EQ(K.tangential().size(), 1u);
  const auto oracle = [](double r) {
    return (2.0 / 3.0) * (1.0 - std::pow(r, -1.5)) - (2.0 / 3.0) * (1.0 - std::pow(r, -0.5));
  };
  for (double r : {1.0, 2.0, 10.0}) EXPECT_NEAR(K.tangential()[0].f(r), oracle(r), 1e-15) << r;
  EXPECT_NEAR(K.tangential()[0].f(2.0), (2.0 / 3.0) * std::pow(2.0, -1.5), 1e-15);
  EXPECT_EQ(K.tangential()[0].f(0.5), 0.0);
}

TEST(Thom, HomotopyIdentityOnSpheres) {
  const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const auto II = ProfileSpace::classical(0.0);
  ConeForm w(2, 2);
  w.add_radial(Profile::core({0, 0, 1}) + Profile::tail_power(-1.0, 2.0) + Profile::tail_power(0.0, -1.0),
               AmbientForm::monomial(x + y, {1}));
  const auto h = homotopy_identity_check(w, Profile::tail_power(-1.0), II, 40, 3);
  EXPECT_LT(h.max_error, 1e-10);
  EXPECT_EQ(h.samples, 40);
}

TEST(SymbolForms, ResidueOfExactFormsVanishes) {
  const Polynomial u = Polynomial::variable(2, 0);
  // sigma = chi xi1 |xi|^{-2} dxi2 has a degree -1 coefficient; d sigma has none at degree -2
  SymbolForm s{2, 1, {{2u, hom_symbol(2, -1.0, 0, u, CoreKind::polynomial)}}};
  EXPECT_EQ(stokes_property_check(s), 0.0);
  // a top form with residue: chi |xi|^{-2} dxi1^dxi2 gives 2 pi / (2 pi)^2
  SymbolForm top{2, 2, {{3u, cutoff_power(2, -2.0)}}};
  EXPECT_NEAR(res_form(top), 1.0 / (2.0 * pi), 1e-15);
  EXPECT_EQ(symbol_form_d(s).total_degree(), s.total_degree());
}
