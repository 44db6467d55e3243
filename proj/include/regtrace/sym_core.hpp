#pragma once

// Representation and algebra of classical and log-polyhomogeneous symbols on
// R^p (x-independent). A symbol is stored as
//   f(x) = core(x)                          for |x| < 1,
//   f(x) = sum_terms b(w) r^a log^l r + rem(x)  for |x| >= 1,   r = |x|, w = x/r.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regtrace/errors.hpp"
#include "regtrace/polynomial.hpp"
#include "regtrace/quadrature.hpp"

namespace regtrace {

using Point = std::span<const double>;
using ScalarField = std::function<double(Point)>;
using PartialField = std::function<double(Point, std::size_t)>;

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();
inline constexpr double kOrderTolerance = 1e-12;

inline bool same_order(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kOrderTolerance;
}

inline double norm(Point x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// AngularFunction

/// A function on the unit sphere S^{p-1}: either a polynomial in w_1..w_p
/// restricted to the sphere (exact moments) or a callable integrated by
/// quadrature of a declared order.
class AngularFunction {
 public:
  enum class Kind { polynomial, tabulated };

  AngularFunction() = default;

  static AngularFunction polynomial(Polynomial p) {
    AngularFunction g;
    g.kind_ = Kind::polynomial;
    g.dim_ = p.nvars();
    g.poly_ = std::move(p);
    return g;
  }

  static AngularFunction constant(std::size_t dim, double c) {
    return polynomial(Polynomial::constant(dim, c));
  }

  /// `order` is the number of nodes per angular direction; it must be at
  /// least the declared smoothness of the data.
  static AngularFunction tabulated(std::size_t dim, ScalarField fn, int order = 128, int smoothness = 8) {
    if (order < smoothness)
      throw ValidationError("tabulated angular function: quadrature order below declared smoothness");
    AngularFunction g;
    g.kind_ = Kind::tabulated;
    g.dim_ = dim;
    g.fn_ = std::move(fn);
    g.order_ = order;
    g.smoothness_ = smoothness;
    return g;
  }

  Kind kind() const { return kind_; }
  bool is_polynomial() const { return kind_ == Kind::polynomial; }
  std::size_t dim() const { return dim_; }
  const Polynomial& poly() const { return poly_; }
  int quadrature_order() const { return order_; }
  int smoothness() const { return smoothness_; }

  bool is_zero() const { return is_polynomial() && poly_.is_zero(); }

  double operator()(Point w) const { return is_polynomial() ? poly_(w) : fn_(w); }

  friend AngularFunction operator*(const AngularFunction& a, const AngularFunction& b) {
    if (a.is_polynomial() && b.is_polynomial()) return polynomial(a.poly_ * b.poly_);
    return tabulated(a.dim_, [a, b](Point w) { return a(w) * b(w); },
                     std::max(a.order_, b.order_), std::max(a.smoothness_, b.smoothness_));
  }
  friend AngularFunction operator+(const AngularFunction& a, const AngularFunction& b) {
    if (a.is_polynomial() && b.is_polynomial()) return polynomial(a.poly_ + b.poly_);
    return tabulated(a.dim_, [a, b](Point w) { return a(w) + b(w); },
                     std::max(a.order_, b.order_), std::max(a.smoothness_, b.smoothness_));
  }
  friend AngularFunction operator*(double s, const AngularFunction& a) {
    if (a.is_polynomial()) return polynomial(s * a.poly_);
    return tabulated(a.dim_, [s, a](Point w) { return s * a(w); }, a.order_, a.smoothness_);
  }

 private:
  Kind kind_ = Kind::polynomial;
  std::size_t dim_ = 1;
  Polynomial poly_{1};
  ScalarField fn_;
  int order_ = 128;
  int smoothness_ = 0;
};

/// Integral over S^{p-1}. Exact for polynomial data; for tabulated data the
/// order is doubled from the declared one until two rules agree, and a
/// disagreement at the cap is reported instead of silently accepted.
inline double sphere_integral(const AngularFunction& g) {
  if (g.is_polynomial()) return g.poly().sphere_integral();
  const std::size_t p = g.dim();
  auto f = [&g](Point w) { return g(w); };
  if (p == 1) return quad::SphereRule(1, 2).integrate(f);
  const int cap = p == 2 ? 8192 : 512;
  int order = g.quadrature_order();
  double v1 = quad::SphereRule(p, order).integrate(f);
  for (; 2 * order <= cap; order *= 2) {
    const double v2 = quad::SphereRule(p, 2 * order).integrate(f);
    if (std::abs(v1 - v2) <= 1e-10 * std::max(1.0, std::abs(v2))) return v2;
    v1 = v2;
  }
  throw NumericalError("sphere_integral: quadrature order insufficient for tabulated data");
}

// ---------------------------------------------------------------------------
// HomTerm

/// b(w) r^order log^logpow r, valid for r >= 1.
struct HomTerm {
  double order = 0.0;
  int logpow = 0;
  AngularFunction angular;

  /// Value of the homogeneous formula at x != 0 (no cutoff applied).
  double value(Point x) const {
    const double r = norm(x);
    std::vector<double> w(x.begin(), x.end());
    for (double& v : w) v /= r;
    double out = angular(w) * std::pow(r, order);
    if (logpow > 0) out *= std::pow(std::log(r), logpow);
    return out;
  }
};

// ---------------------------------------------------------------------------
// SymbolExpansion

struct SymbolExpansion {
  std::size_t dim = 1;
  double order = kMinusInfinity;
  int logdeg = 0;

  ScalarField core;          // on |x| <= 1
  PartialField core_partial;  // optional analytic d/dx_j of core
  bool core_is_zero = false;

  std::vector<HomTerm> terms;  // strictly decreasing in (order, logpow)

  ScalarField remainder;           // on |x| >= 1
  PartialField remainder_partial;  // optional
  double remainder_order = kMinusInfinity;
  bool remainder_is_zero = false;

  /// Radial positions (for a given direction) where core or remainder are not
  /// smooth; used to split radial quadratures.
  std::function<std::vector<double>(Point)> radial_breaks;

  /// Radius beyond which the terms describe the symbol's true asymptotics
  /// (recorded by scale_variable; 1 otherwise).
  double validity_radius = 1.0;

  /// Named generator + parameters, when the symbol was produced by one.
  std::string generator_description;

  bool is_zero() const { return core_is_zero && remainder_is_zero && terms.empty(); }

  std::vector<double> breaks(Point w) const {
    return radial_breaks ? radial_breaks(w) : std::vector<double>{};
  }

  /// Sum of the homogeneous terms at x (no cutoff).
  double terms_value(Point x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.value(x);
    return s;
  }

  double remainder_value(Point x) const { return remainder_is_zero ? 0.0 : remainder(x); }
  double core_value(Point x) const { return core_is_zero ? 0.0 : core(x); }

  const HomTerm* find_term(double ord, int lp) const {
    for (const auto& t : terms)
      if (same_order(t.order, ord) && t.logpow == lp) return &t;
    return nullptr;
  }

  /// Checks the structural invariants; throws ValidationError on violation.
  void validate() const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& t = terms[i];
      if (t.angular.dim() != dim) throw ValidationError("symbol: angular dimension mismatch");
      if (t.logpow < 0 || t.logpow > logdeg) throw ValidationError("symbol: log power exceeds log degree");
      if (t.order > order + kOrderTolerance) throw ValidationError("symbol: term order exceeds symbol order");
      if (i > 0) {
        const auto& s = terms[i - 1];
        const bool decreasing = s.order > t.order + kOrderTolerance ||
                                (same_order(s.order, t.order) && s.logpow > t.logpow);
        if (!decreasing) throw ValidationError("symbol: terms must be strictly decreasing");
      }
      if (!(t.order > remainder_order)) throw ValidationError("symbol: remainder order must lie below the listed terms");
    }
    if (!core_is_zero && !core) throw ValidationError("symbol: missing core");
    if (!remainder_is_zero && !remainder) throw ValidationError("symbol: missing remainder");
  }
};

inline void sort_terms(std::vector<HomTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const HomTerm& a, const HomTerm& b) {
    if (!same_order(a.order, b.order)) return a.order > b.order;
    return a.logpow > b.logpow;
  });
}

/// Adds `t` to the list, merging with an existing term of the same (order, logpow).
inline void accumulate_term(std::vector<HomTerm>& terms, HomTerm t) {
  for (auto& s : terms)
    if (same_order(s.order, t.order) && s.logpow == t.logpow) {
      s.angular = s.angular + t.angular;
      return;
    }
  terms.push_back(std::move(t));
}

inline void drop_zero_terms(std::vector<HomTerm>& terms) {
  std::erase_if(terms, [](const HomTerm& t) { return t.angular.is_zero(); });
}

inline SymbolExpansion zero_symbol(std::size_t dim) {
  SymbolExpansion s;
  s.dim = dim;
  s.order = kMinusInfinity;
  s.core_is_zero = true;
  s.remainder_is_zero = true;
  s.remainder_order = kMinusInfinity;
  s.generator_description = "zero";
  return s;
}

inline double eval(const SymbolExpansion& sym, Point x) {
  if (x.size() != sym.dim) throw ValidationError("eval: dimension mismatch");
  if (sym.is_zero()) return 0.0;
  const double r = norm(x);
  if (r < 1.0) return sym.core_value(x);
  return sym.terms_value(x) + sym.remainder_value(x);
}

inline double eval(const SymbolExpansion& sym, std::initializer_list<double> x) {
  std::vector<double> v(x);
  return eval(sym, v);
}

namespace detail {

/// Central difference with one Richardson step, h = 1e-5.
inline double richardson_partial(const ScalarField& f, Point x, std::size_t j) {
  std::vector<double> y(x.begin(), x.end());
  auto diff = [&](double h) {
    y[j] = x[j] + h;
    const double fp = f(y);
    y[j] = x[j] - h;
    const double fm = f(y);
    y[j] = x[j];
    return (fp - fm) / (2.0 * h);
  };
  const double h = 1e-5;
  return (4.0 * diff(h / 2) - diff(h)) / 3.0;
}

/// Derivative of w^alpha r^a log^l r in x_j, written as angular polynomials
/// at order a - 1 (log powers l and l - 1).
inline std::vector<HomTerm> differentiate_term(const HomTerm& t, std::size_t j) {
  if (!t.angular.is_polynomial())
    throw ValidationError("differentiate: tabulated angular part has no derivative data");
  const std::size_t p = t.angular.dim();
  Polynomial same(p), lower(p);
  for (const auto& [alpha, c] : t.angular.poly().terms()) {
    int d = 0;
    for (int k : alpha) d += k;
    if (alpha[j] > 0) {
      MultiIndex m = alpha;
      m[j] -= 1;
      same.add_term(m, c * alpha[j]);
    }
    MultiIndex up = alpha;
    up[j] += 1;
    same.add_term(up, c * (t.order - d));
    if (t.logpow > 0) lower.add_term(up, c * t.logpow);
  }
  std::vector<HomTerm> out;
  if (!same.is_zero()) out.push_back({t.order - 1.0, t.logpow, AngularFunction::polynomial(same)});
  if (!lower.is_zero()) out.push_back({t.order - 1.0, t.logpow - 1, AngularFunction::polynomial(lower)});
  return out;
}

inline std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace detail

/// d/dx_j of the symbol. Terms are differentiated exactly; core and remainder
/// use their analytic partials when supplied, otherwise Richardson-extrapolated
/// central differences.
inline SymbolExpansion differentiate(const SymbolExpansion& sym, std::size_t j) {
  if (j >= sym.dim) throw ValidationError("differentiate: axis out of range");
  if (sym.is_zero()) return zero_symbol(sym.dim);

  SymbolExpansion out;
  out.dim = sym.dim;
  out.order = sym.order - 1.0;
  out.logdeg = sym.logdeg;
  out.validity_radius = sym.validity_radius;
  out.radial_breaks = sym.radial_breaks;
  out.generator_description = "d/dx" + std::to_string(j) + "(" + sym.generator_description + ")";

  for (const auto& t : sym.terms)
    for (auto& dt : detail::differentiate_term(t, j)) accumulate_term(out.terms, std::move(dt));
  drop_zero_terms(out.terms);
  sort_terms(out.terms);

  if (sym.core_is_zero) {
    out.core_is_zero = true;
  } else if (sym.core_partial) {
    out.core = [f = sym.core_partial, j](Point x) { return f(x, j); };
  } else {
    out.core = [f = sym.core, j](Point x) { return detail::richardson_partial(f, x, j); };
  }

  out.remainder_order = sym.remainder_order - 1.0;
  if (sym.remainder_is_zero) {
    out.remainder_is_zero = true;
  } else if (sym.remainder_partial) {
    out.remainder = [f = sym.remainder_partial, j](Point x) { return f(x, j); };
  } else {
    out.remainder = [f = sym.remainder, j](Point x) { return detail::richardson_partial(f, x, j); };
  }
  return out;
}

/// Pointwise product. Orders and log degrees add; products of terms below the
/// coarser remainder bound are moved into the remainder.
inline SymbolExpansion multiply(const SymbolExpansion& a, const SymbolExpansion& b) {
  if (a.dim != b.dim) throw ValidationError("multiply: dimension mismatch");
  if (a.is_zero() || b.is_zero()) return zero_symbol(a.dim);

  SymbolExpansion out;
  out.dim = a.dim;
  out.order = a.order + b.order;
  out.logdeg = a.logdeg + b.logdeg;
  out.generator_description = "(" + a.generator_description + ")*(" + b.generator_description + ")";
  const double cut = std::max(a.remainder_order + b.order, b.remainder_order + a.order);
  out.remainder_order = cut;

  std::vector<HomTerm> dropped;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      HomTerm t{ta.order + tb.order, ta.logpow + tb.logpow, ta.angular * tb.angular};
      if (t.order > cut + kOrderTolerance)
        accumulate_term(out.terms, std::move(t));
      else
        dropped.push_back(std::move(t));
    }
  drop_zero_terms(out.terms);
  sort_terms(out.terms);

  if (a.core_is_zero || b.core_is_zero) {
    out.core_is_zero = true;
  } else {
    out.core = [a, b](Point x) { return a.core(x) * b.core(x); };
    if (a.core_partial && b.core_partial)
      out.core_partial = [a, b](Point x, std::size_t j) {
        return a.core_partial(x, j) * b.core(x) + a.core(x) * b.core_partial(x, j);
      };
  }

  out.remainder_is_zero = dropped.empty() && a.remainder_is_zero && b.remainder_is_zero;
  if (!out.remainder_is_zero) {
    out.remainder = [a, b, dropped](Point x) {
      double s = 0.0;
      for (const auto& t : dropped) s += t.value(x);
      const double ta = a.terms_value(x), tb = b.terms_value(x);
      const double ra = a.remainder_value(x), rb = b.remainder_value(x);
      return s + ta * rb + ra * tb + ra * rb;
    };
  }
  if (a.radial_breaks || b.radial_breaks)
    out.radial_breaks = [a, b](Point w) { return detail::merge_breaks(a.breaks(w), b.breaks(w)); };
  return out;
}

/// alpha * a + beta * b.
inline SymbolExpansion linear_combination(double alpha, const SymbolExpansion& a, double beta,
                                          const SymbolExpansion& b) {
  if (a.dim != b.dim) throw ValidationError("linear_combination: dimension mismatch");
  SymbolExpansion out;
  out.dim = a.dim;
  if ((a.is_zero() || alpha == 0.0) && (b.is_zero() || beta == 0.0)) return zero_symbol(a.dim);
  out.order = std::max(alpha != 0.0 ? a.order : kMinusInfinity, beta != 0.0 ? b.order : kMinusInfinity);
  out.logdeg = std::max(a.logdeg, b.logdeg);
  out.generator_description = "lincomb";
  out.remainder_order = std::max(a.remainder_order, b.remainder_order);
  out.validity_radius = std::max(a.validity_radius, b.validity_radius);

  std::vector<HomTerm> moved;  // terms at or below the combined remainder bound
  auto take = [&](const SymbolExpansion& s, double c) {
    if (c == 0.0) return;
    for (const auto& t : s.terms) {
      HomTerm u{t.order, t.logpow, c * t.angular};
      if (u.order > out.remainder_order + kOrderTolerance)
        accumulate_term(out.terms, std::move(u));
      else
        moved.push_back(std::move(u));
    }
  };
  take(a, alpha);
  take(b, beta);
  drop_zero_terms(out.terms);
  sort_terms(out.terms);

  const bool az = a.core_is_zero || alpha == 0.0, bz = b.core_is_zero || beta == 0.0;
  out.core_is_zero = az && bz;
  if (!out.core_is_zero) {
    out.core = [a, b, alpha, beta, az, bz](Point x) {
      return (az ? 0.0 : alpha * a.core(x)) + (bz ? 0.0 : beta * b.core(x));
    };
    if ((az || a.core_partial) && (bz || b.core_partial))
      out.core_partial = [a, b, alpha, beta, az, bz](Point x, std::size_t j) {
        return (az ? 0.0 : alpha * a.core_partial(x, j)) + (bz ? 0.0 : beta * b.core_partial(x, j));
      };
  }
  const bool arz = a.remainder_is_zero || alpha == 0.0, brz = b.remainder_is_zero || beta == 0.0;
  out.remainder_is_zero = arz && brz && moved.empty();
  if (!out.remainder_is_zero) {
    out.remainder = [a, b, alpha, beta, arz, brz, moved](Point x) {
      double s = 0.0;
      for (const auto& t : moved) s += t.value(x);
      return s + (arz ? 0.0 : alpha * a.remainder(x)) + (brz ? 0.0 : beta * b.remainder(x));
    };
    if (moved.empty() && (arz || a.remainder_partial) && (brz || b.remainder_partial))
      out.remainder_partial = [a, b, alpha, beta, arz, brz](Point x, std::size_t j) {
        return (arz ? 0.0 : alpha * a.remainder_partial(x, j)) +
               (brz ? 0.0 : beta * b.remainder_partial(x, j));
      };
  }
  if (a.radial_breaks || b.radial_breaks)
    out.radial_breaks = [a, b](Point w) { return detail::merge_breaks(a.breaks(w), b.breaks(w)); };
  return out;
}

inline SymbolExpansion scale(const SymbolExpansion& a, double c) {
  return linear_combination(c, a, 0.0, zero_symbol(a.dim));
}

namespace detail {

/// Q(w) = P(M w) for a linear map M, computed by expanding each monomial.
inline Polynomial substitute_linear(const Polynomial& p, const Eigen::MatrixXd& m) {
  const std::size_t n = p.nvars();
  Polynomial out(n);
  for (const auto& [alpha, c] : p.terms()) {
    Polynomial prod = Polynomial::constant(n, c);
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial row(n);
      for (std::size_t k = 0; k < n; ++k) row.add_term([&] {
          MultiIndex e(n, 0);
          e[k] = 1;
          return e;
        }(), m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
      for (int r = 0; r < alpha[i]; ++r) prod = prod * row;
    }
    out += prod;
  }
  return out;
}

inline double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace detail

/// The symbol xi -> f(A xi). Terms are re-expanded exactly around the new
/// variable, using log|A xi| = log|A w| + log r; when A is a multiple of an
/// orthogonal matrix the angular parts stay polynomial.
inline SymbolExpansion scale_variable(const SymbolExpansion& sym, const Eigen::MatrixXd& A) {
  const auto p = static_cast<Eigen::Index>(sym.dim);
  if (A.rows() != p || A.cols() != p) throw ValidationError("scale_variable: matrix shape mismatch");
  const double det = A.determinant();
  if (!(std::abs(det) > 1e-14 * std::pow(std::max(1.0, A.norm()), static_cast<double>(p))))
    throw ValidationError("scale_variable: singular matrix");
  if (sym.is_zero()) return zero_symbol(sym.dim);

  const Eigen::MatrixXd ata = A.transpose() * A;
  const double c2 = ata(0, 0);
  const bool conformal = (ata - c2 * Eigen::MatrixXd::Identity(p, p)).norm() <= 1e-13 * c2;

  SymbolExpansion out;
  out.dim = sym.dim;
  out.order = sym.order;
  out.logdeg = sym.logdeg;
  out.remainder_order = sym.remainder_order;
  out.generator_description = "scaled(" + sym.generator_description + ")";
  out.validity_radius = sym.validity_radius * Eigen::MatrixXd(A.inverse()).jacobiSvd().singularValues()(0);

  for (const auto& t : sym.terms) {
    for (int i = 0; i <= t.logpow; ++i) {
      const double binom = detail::binomial(t.logpow, i);
      const int lp = t.logpow - i;  // power of log|A w|
      AngularFunction g;
      if (conformal && t.angular.is_polynomial()) {
        const double c = std::sqrt(c2);
        const double factor = binom * std::pow(c, t.order) * (lp > 0 ? std::pow(std::log(c), lp) : 1.0);
        g = AngularFunction::polynomial(factor * detail::substitute_linear(t.angular.poly(), A / c));
      } else {
        const AngularFunction base = t.angular;
        const double ord = t.order;
        g = AngularFunction::tabulated(
            sym.dim,
            [A, base, ord, binom, lp](Point w) {
              Eigen::VectorXd v = A * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
              const double n = v.norm();
              v /= n;
              const double val = base(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
              return binom * val * std::pow(n, ord) * (lp > 0 ? std::pow(std::log(n), lp) : 1.0);
            },
            std::max(base.quadrature_order(), 128), base.smoothness());
      }
      accumulate_term(out.terms, HomTerm{t.order, i, g});
    }
  }
  drop_zero_terms(out.terms);
  sort_terms(out.terms);

  auto apply = [A](Point x) {
    Eigen::VectorXd v = A * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  out.core = [sym, apply](Point x) { return eval(sym, apply(x)); };
  out.remainder = [sym, apply, terms = out.terms](Point x) {
    const auto y = apply(x);
    if (norm(y) >= 1.0) return sym.remainder_value(y);
    double t = 0.0;
    for (const auto& term : terms) t += term.value(x);
    return eval(sym, y) - t;
  };
  out.radial_breaks = [sym, A](Point w) {
    Eigen::VectorXd v = A * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    const double n = v.norm();
    v /= n;
    std::vector<double> br{1.0 / n};
    for (double b : sym.breaks(std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))))
      br.push_back(b / n);
    return br;
  };
  return out;
}

// ---------------------------------------------------------------------------
// AsymptoticExpansion

struct ExpansionEntry {
  double exponent = 0.0;
  int logpow = 0;
  double coefficient = 0.0;
};

/// Finite sum  sum c_{e,l} x^e log^l x  + O(x^{remainder_order}), aggregated by
/// (exponent, logpow) and kept sorted with the dominant entry first.
class AsymptoticExpansion {
 public:
  AsymptoticExpansion() = default;
  explicit AsymptoticExpansion(std::string variable, double remainder_order = kMinusInfinity)
      : variable_(std::move(variable)), remainder_order_(remainder_order) {}

  const std::string& variable() const { return variable_; }
  double remainder_order() const { return remainder_order_; }
  void set_remainder_order(double r) { remainder_order_ = r; }
  const std::vector<ExpansionEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void add(double exponent, int logpow, double coefficient) {
    for (auto& e : entries_)
      if (same_order(e.exponent, exponent) && e.logpow == logpow) {
        e.coefficient += coefficient;
        return;
      }
    entries_.push_back({exponent, logpow, coefficient});
    std::sort(entries_.begin(), entries_.end(), [](const ExpansionEntry& a, const ExpansionEntry& b) {
      if (!same_order(a.exponent, b.exponent)) return a.exponent > b.exponent;
      return a.logpow > b.logpow;
    });
  }

  bool contains(double exponent, int logpow) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const ExpansionEntry& e) {
      return same_order(e.exponent, exponent) && e.logpow == logpow;
    });
  }

  double coefficient(double exponent, int logpow) const {
    for (const auto& e : entries_)
      if (same_order(e.exponent, exponent) && e.logpow == logpow) return e.coefficient;
    return 0.0;
  }

  int max_logpow() const {
    int m = 0;
    for (const auto& e : entries_) m = std::max(m, e.logpow);
    return m;
  }

  double evaluate(double x) const {
    const double lx = std::log(x);
    double s = 0.0;
    for (const auto& e : entries_) s += e.coefficient * std::pow(x, e.exponent) * std::pow(lx, e.logpow);
    return s;
  }

  /// First n distinct exponents (all log powers of those exponents kept).
  AsymptoticExpansion truncated(std::size_t n) const {
    AsymptoticExpansion out(variable_, remainder_order_);
    std::vector<double> seen;
    for (const auto& e : entries_) {
      const bool known = std::any_of(seen.begin(), seen.end(), [&](double s) { return same_order(s, e.exponent); });
      if (!known) {
        if (seen.size() == n) {
          out.remainder_order_ = e.exponent;
          break;
        }
        seen.push_back(e.exponent);
      }
      out.entries_.push_back(e);
    }
    return out;
  }

  AsymptoticExpansion& operator+=(const AsymptoticExpansion& o) {
    for (const auto& e : o.entries_) add(e.exponent, e.logpow, e.coefficient);
    remainder_order_ = std::max(remainder_order_, o.remainder_order_);
    return *this;
  }

  AsymptoticExpansion scaled(double s) const {
    AsymptoticExpansion out = *this;
    for (auto& e : out.entries_) e.coefficient *= s;
    return out;
  }

 private:
  std::string variable_ = "R";
  std::vector<ExpansionEntry> entries_;
  double remainder_order_ = kMinusInfinity;
};

}  // namespace regtrace
