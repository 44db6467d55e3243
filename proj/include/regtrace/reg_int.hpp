#pragma once

// Regularized integration of symbol expansions on R^p: the large-R expansion
// of the integral over balls, its constant term (partie finie), the residue
// integral, the change-of-variables anomaly and the Stokes defect.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "regtrace/errors.hpp"
#include "regtrace/log_integral.hpp"
#include "regtrace/quadrature.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

/// Integral over S^{p-1} of a direction-dependent quantity that need not be
/// smooth in the direction (radial integrals of cut-off data). p = 1 is the
/// two-point counting measure; p = 2 is adaptive in the angle.
inline double direction_integral(std::size_t p, const std::function<double(Point)>& g,
                                 const quad::Tolerance& tol = {}) {
  if (p == 1) {
    const double m = -1.0, pl = 1.0;
    return g(Point(&m, 1)) + g(Point(&pl, 1));
  }
  if (p == 2) {
    auto h = [&g](double th) {
      const double w[2] = {std::cos(th), std::sin(th)};
      return g(Point(w, 2));
    };
    return quad::integrate(h, 0.0, 2.0 * std::numbers::pi, tol);
  }
  return quad::SphereRule(3, 64).integrate(g);
}

namespace detail {

/// int_0^1 r^{p-1} core(r w) dr
inline double core_radial(const SymbolExpansion& sym, Point w, const quad::Tolerance& tol) {
  const std::size_t p = sym.dim;
  std::vector<double> x(p);
  auto f = [&](double r) {
    for (std::size_t i = 0; i < p; ++i) x[i] = r * w[i];
    return std::pow(r, static_cast<double>(p) - 1.0) * sym.core(x);
  };
  return quad::integrate_piecewise(f, 0.0, 1.0, sym.breaks(w), tol);
}

/// int_1^inf r^{p-1} remainder(r w) dr, in the variable u = log r so that the
/// algebraic decay becomes exponential.
inline double remainder_radial(const SymbolExpansion& sym, Point w, const quad::Tolerance& tol) {
  const std::size_t p = sym.dim;
  const double decay = sym.remainder_order + static_cast<double>(p);
  const double umax = std::isinf(decay) ? std::log(64.0) : std::min(700.0, 40.0 / -decay);
  std::vector<double> x(p);
  auto f = [&](double u) {
    const double r = std::exp(u);
    for (std::size_t i = 0; i < p; ++i) x[i] = r * w[i];
    return std::pow(r, static_cast<double>(p)) * sym.remainder(x);
  };
  std::vector<double> ub;
  for (double b : sym.breaks(w))
    if (b > 1.0) ub.push_back(std::log(b));
  return quad::integrate_piecewise(f, 0.0, umax, ub, tol);
}

}  // namespace detail

/// Large-R expansion of int_{|x| <= R} f(x) dx.
inline AsymptoticExpansion ball_integral_expansion(const SymbolExpansion& sym, const quad::Tolerance& tol = {}) {
  const double p = static_cast<double>(sym.dim);
  AsymptoticExpansion out("R", 0.0);
  if (sym.is_zero()) {
    out.add(0.0, 0, 0.0);
    return out;
  }
  if (!sym.remainder_is_zero && !(sym.remainder_order + p < 0.0))
    throw ValidationError("ball_integral_expansion: insufficient expansion depth (remainder order + p >= 0)");
  out.set_remainder_order(sym.remainder_is_zero ? kMinusInfinity : sym.remainder_order + p);

  double constant = 0.0;
  if (!sym.core_is_zero)
    constant += direction_integral(sym.dim, [&](Point w) { return detail::core_radial(sym, w, tol); }, tol);
  if (!sym.remainder_is_zero)
    constant += direction_integral(sym.dim, [&](Point w) { return detail::remainder_radial(sym, w, tol); }, tol);

  for (const auto& t : sym.terms) {
    const double s = sphere_integral(t.angular);
    if (s == 0.0) continue;
    const auto prim = log_power_primitive_expansion(t.order + p - 1.0, t.logpow, "R");
    for (const auto& e : prim.entries()) {
      if (same_order(e.exponent, 0.0) && e.logpow == 0)
        constant += s * e.coefficient;
      else
        out.add(e.exponent, e.logpow, s * e.coefficient);
    }
  }
  out.add(0.0, 0, constant);
  return out;
}

/// Constant term of the ball expansion; the ordinary integral when order + p < 0.
inline double partie_finie(const SymbolExpansion& sym, const quad::Tolerance& tol = {}) {
  return ball_integral_expansion(sym, tol).coefficient(0.0, 0);
}

enum class ResidueNormalization { raw, two_pi_power };

/// int_{S^{p-1}} f_{-p,0}, optionally divided by (2 pi)^p.
inline double residue_integral(const SymbolExpansion& sym, ResidueNormalization n = ResidueNormalization::raw) {
  const HomTerm* t = sym.find_term(-static_cast<double>(sym.dim), 0);
  if (t == nullptr) return 0.0;
  const double raw = sphere_integral(t->angular);
  if (n == ResidueNormalization::raw) return raw;
  return raw / std::pow(2.0 * std::numbers::pi, static_cast<double>(sym.dim));
}

struct ChangeOfVariables {
  double lhs = 0.0;
  double rhs = 0.0;
  double correction = 0.0;  // the sum of log-weighted sphere integrals
};

/// pf f(A x) versus |det A|^{-1} (pf f + sum_l (-1)^{l+1}/(l+1) int f_{-p,l} log^{l+1}|A^{-1} w|).
inline ChangeOfVariables change_of_variables_check(const SymbolExpansion& sym, const Eigen::MatrixXd& A,
                                                   const quad::Tolerance& tol = {}) {
  const auto p = static_cast<Eigen::Index>(sym.dim);
  if (A.rows() != p || A.cols() != p) throw ValidationError("change_of_variables_check: matrix dimension mismatch");
  const double det = A.determinant();
  if (std::abs(det) < 1e-12) throw ValidationError("change_of_variables_check: singular matrix");
  const Eigen::MatrixXd Ainv = A.inverse();

  ChangeOfVariables out;
  out.lhs = partie_finie(scale_variable(sym, A), tol);
  for (const auto& t : sym.terms) {
    if (!same_order(t.order, -static_cast<double>(sym.dim))) continue;
    const int l = t.logpow;
    auto g = AngularFunction::tabulated(
        sym.dim,
        [t, Ainv, l](Point w) {
          Eigen::VectorXd v = Ainv * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
          return t.angular(w) * std::pow(std::log(v.norm()), l + 1);
        },
        std::max(128, t.angular.quadrature_order()));
    const double sign = (l % 2 == 0) ? -1.0 : 1.0;
    out.correction += sign / (l + 1) * sphere_integral(g);
  }
  out.rhs = (partie_finie(sym, tol) + out.correction) / std::abs(det);
  return out;
}

/// Constant term of int_{|x| <= R} d f / d x_j, read off the sphere:
/// int_{S^{p-1}} f_{1-p,0}(w) w_j dw. Log terms of order 1-p contribute pure
/// powers of log R and nothing to the constant.
inline double stokes_defect(const SymbolExpansion& sym, std::size_t j) {
  if (j >= sym.dim) throw ValidationError("stokes_defect: axis out of range");
  const double p = static_cast<double>(sym.dim);
  if (!sym.remainder_is_zero && !(sym.remainder_order + p - 1.0 < 0.0))
    throw ValidationError("stokes_defect: expansion must list terms through order 1-p");
  const HomTerm* t = sym.find_term(1.0 - p, 0);
  if (t == nullptr) return 0.0;
  auto wj = AngularFunction::polynomial(Polynomial::variable(sym.dim, j));
  return sphere_integral(t->angular * wj);
}

/// The same quantity computed the long way, as pf of the derivative.
inline double stokes_defect_bruteforce(const SymbolExpansion& sym, std::size_t j, const quad::Tolerance& tol = {}) {
  return partie_finie(differentiate(sym, j), tol);
}

}  // namespace regtrace
