#pragma once

// Symbol-valued trace of parameter dependent Fourier multipliers on the circle:
// A(mu) acts on e^{ikx} by a(k, mu). For order m the mu-derivative of order
// alpha (minimal with m - alpha < -1) is trace class, and TR(A) is the class of
// its alpha-fold antiderivative modulo polynomials of degree < alpha. The
// representative used here integrates back from mu = 0 with zero constants.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regtrace/asym_engine.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/quadrature.hpp"
#include "regtrace/reg_int.hpp"
#include "regtrace/summation.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

/// a(xi, mu) with mixed partial derivatives d_xi^i d_mu^j a.
struct ParamMultiplier {
  double order = 0.0;
  std::function<double(double, double, int, int)> eval;
  std::string description;
  // set for coef * (xi^2 + mu^2 + c)^s, enables the closed-form expansion
  struct Bracket {
    double s, c, coef;
  };
  std::optional<Bracket> bracket;
  bool is_zero = false;

  double operator()(double xi, double mu, int dxi = 0, int dmu = 0) const { return eval(xi, mu, dxi, dmu); }
};

namespace detail {

inline double falling(double s, int r) {
  double v = 1.0;
  for (int i = 0; i < r; ++i) v *= s - i;
  return v;
}

inline double fact(int n) { return factorial(n); }

}  // namespace detail

/// coef * (xi^2 + mu^2 + c)^s. Mixed derivatives by Faa di Bruno for the
/// quadratic inner function:
///   d_xi^a d_mu^b f(u) = sum_{k,i} a!/(k!(a-2k)!) b!/(i!(b-2i)!) f^{(a-k+b-i)}(u) (2xi)^{a-2k} (2mu)^{b-2i}.
inline ParamMultiplier bracket_multiplier(double s, double c = 1.0, double coef = 1.0) {
  if (!(c > 0.0)) throw ValidationError("bracket_multiplier: c must be positive");
  ParamMultiplier A;
  A.order = 2.0 * s;
  A.bracket = ParamMultiplier::Bracket{s, c, coef};
  A.eval = [s, c, coef](double xi, double mu, int a, int b) {
    const double log_u = 2.0 * std::log(std::hypot(xi, std::sqrt(mu * mu + c)));
    double sum = 0.0;
    for (int k = 0; 2 * k <= a; ++k)
      for (int i = 0; 2 * i <= b; ++i) {
        const int r = a - k + b - i;
        const double w = detail::fact(a) / (detail::fact(k) * detail::fact(a - 2 * k)) * detail::fact(b) /
                         (detail::fact(i) * detail::fact(b - 2 * i));
        const double f = w * detail::falling(s, r);
        if (f == 0.0) continue;
        // in logs, so that huge xi (from the infinite tail map) cannot overflow
        const int px = a - 2 * k, pm = b - 2 * i;
        if ((px > 0 && xi == 0.0) || (pm > 0 && mu == 0.0)) continue;
        double lg = (s - r) * log_u;
        double sign = f < 0 ? -1.0 : 1.0;
        if (px > 0) {
          lg += px * (std::numbers::ln2 + std::log(std::abs(xi)));
          if (xi < 0 && px % 2) sign = -sign;
        }
        if (pm > 0) {
          lg += pm * (std::numbers::ln2 + std::log(std::abs(mu)));
          if (mu < 0 && pm % 2) sign = -sign;
        }
        sum += sign * std::exp(std::log(std::abs(f)) + lg);
      }
    return coef * sum;
  };
  A.description = nlohmann::json{{"multiplier", "bracket"}, {"s", s}, {"c", c}, {"coef", coef}}.dump();
  return A;
}

/// sum_i c_i mu^i, independent of xi.
inline ParamMultiplier polynomial_mu_multiplier(std::vector<double> coeffs) {
  ParamMultiplier A;
  int deg = -1;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) deg = static_cast<int>(i);
  A.order = deg < 0 ? kMinusInfinity : deg;
  A.is_zero = deg < 0;
  A.eval = [coeffs](double, double mu, int a, int b) {
    if (a > 0) return 0.0;
    double s = 0.0;
    for (std::size_t i = static_cast<std::size_t>(b); i < coeffs.size(); ++i)
      s += coeffs[i] * detail::falling(static_cast<double>(i), b) * std::pow(mu, static_cast<double>(i) - b);
    return s;
  };
  A.description = nlohmann::json{{"multiplier", "polynomial_mu"}, {"coefficients", coeffs}}.dump();
  return A;
}

inline ParamMultiplier zero_multiplier() {
  ParamMultiplier A;
  A.order = kMinusInfinity;
  A.is_zero = true;
  A.eval = [](double, double, int, int) { return 0.0; };
  A.description = R"({"multiplier":"zero"})";
  return A;
}

/// d_mu A.
inline ParamMultiplier mu_derivative(const ParamMultiplier& A) {
  ParamMultiplier B;
  B.order = A.order - 1.0;
  B.is_zero = A.is_zero;
  B.eval = [A](double xi, double mu, int a, int b) { return A.eval(xi, mu, a, b + 1); };
  B.description = nlohmann::json{{"multiplier", "d_mu"}, {"of", nlohmann::json::parse(A.description)}}.dump();
  return B;
}

/// mu^p A, p >= 0 integer (Leibniz rule).
inline ParamMultiplier mu_power_times(const ParamMultiplier& A, int p = 1) {
  if (p < 0) throw ValidationError("mu_power_times: power must be nonnegative");
  ParamMultiplier B;
  B.order = A.order + p;
  B.is_zero = A.is_zero;
  B.eval = [A, p](double xi, double mu, int a, int b) {
    double s = 0.0, binom = 1.0;
    for (int i = 0; i <= std::min(b, p); ++i) {
      s += binom * detail::falling(p, i) * std::pow(mu, p - i) * A.eval(xi, mu, a, b - i);
      binom = binom * (b - i) / (i + 1);
    }
    return s;
  };
  B.description = nlohmann::json{{"multiplier", "mu_power"}, {"p", p}, {"of", nlohmann::json::parse(A.description)}}.dump();
  return B;
}

/// a(xi, -mu).
inline ParamMultiplier reflected(const ParamMultiplier& A) {
  ParamMultiplier B = A;
  B.eval = [A](double xi, double mu, int a, int b) { return (b % 2 == 0 ? 1.0 : -1.0) * A.eval(xi, -mu, a, b); };
  B.description = nlohmann::json{{"multiplier", "reflected"}, {"of", nlohmann::json::parse(A.description)}}.dump();
  return B;
}

inline ParamMultiplier linear_combination(double x, const ParamMultiplier& A, double y, const ParamMultiplier& B) {
  ParamMultiplier C;
  C.order = std::max(A.is_zero ? kMinusInfinity : A.order, B.is_zero ? kMinusInfinity : B.order);
  C.is_zero = (A.is_zero || x == 0.0) && (B.is_zero || y == 0.0);
  C.eval = [x, A, y, B](double xi, double mu, int a, int b) { return x * A.eval(xi, mu, a, b) + y * B.eval(xi, mu, a, b); };
  C.description = nlohmann::json{{"multiplier", "lincomb"},
                                 {"parts", {{{"coefficient", x}, {"of", nlohmann::json::parse(A.description)}},
                                            {{"coefficient", y}, {"of", nlohmann::json::parse(B.description)}}}}}
                      .dump();
  return C;
}

/// Builds a multiplier from its JSON description.
inline ParamMultiplier make_multiplier(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("multiplier").get<std::string>();
    if (kind == "bracket") return bracket_multiplier(j.at("s").get<double>(), j.value("c", 1.0), j.value("coef", 1.0));
    if (kind == "polynomial_mu") return polynomial_mu_multiplier(j.at("coefficients").get<std::vector<double>>());
    if (kind == "zero") return zero_multiplier();
    if (kind == "d_mu") return mu_derivative(make_multiplier(j.at("of")));
    if (kind == "mu_power") return mu_power_times(make_multiplier(j.at("of")), j.value("p", 1));
    if (kind == "reflected") return reflected(make_multiplier(j.at("of")));
    if (kind == "lincomb") {
      const auto& p = j.at("parts");
      if (p.size() != 2) throw ValidationError("lincomb multiplier needs exactly two parts");
      return linear_combination(p[0].at("coefficient").get<double>(), make_multiplier(p[0].at("of")),
                                p[1].at("coefficient").get<double>(), make_multiplier(p[1].at("of")));
    }
    throw ValidationError("unknown multiplier '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed multiplier JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Lattice sums

inline constexpr int kLatticeDirect = 64;

/// sum_{k in Z} d_mu^j a(k, mu): the terms |k| < K directly, the rest by
/// Euler-Maclaurin, sum_{k>=K} h(k) = int_K^inf h + h(K)/2 - h'(K)/12 + h'''(K)/720,
/// with h(x) = f(x) + f(-x).
inline double lattice_sum(const ParamMultiplier& A, double mu, int j) {
  if (A.is_zero) return 0.0;
  if (!(A.order - j < -1.0)) throw ValidationError("lattice_sum: summand is not summable");
  const int K = kLatticeDirect;
  CompensatedSum s;
  s += A(0.0, mu, 0, j);
  for (int k = 1; k < K; ++k) s += A(k, mu, 0, j) + A(-k, mu, 0, j);
  auto h = [&](double x) { return A(x, mu, 0, j) + A(-x, mu, 0, j); };
  auto hd = [&](double x, int d) { return A(x, mu, d, j) + (d % 2 == 0 ? 1.0 : -1.0) * A(-x, mu, d, j); };
  const double M = K + 4.0 * std::abs(mu);
  // high mu-derivatives cancel inside the Faa di Bruno sum, which limits the
  // integrand to about 1e-12 relative accuracy
  const quad::Tolerance tol{1e-15 * std::abs(s.value()), 1e-11, 25};
  const double tail_int = quad::integrate(h, K, M, tol) + quad::integrate(h, M, std::numeric_limits<double>::infinity(), tol);
  s += tail_int;
  s += 0.5 * h(K);
  s += -hd(K, 1) / 12.0;
  s += hd(K, 3) / 720.0;
  return s.value();
}

// ---------------------------------------------------------------------------
// TraceFunction

/// Minimal alpha with m - alpha < -1.
inline int trace_class_depth(double m) {
  int a = 0;
  while (!(m - a < -1.0)) ++a;
  return a;
}

struct TraceFunction {
  ParamMultiplier A;
  int alpha = 0;  // ambiguity degree: the class is modulo polynomials of degree < alpha

  /// d^j/dmu^j of the representative: a Cauchy repeated integral of the
  /// lattice sum for j < alpha, the lattice sum of d_mu^j a otherwise.
  double derivative(int j, double mu) const {
    if (A.is_zero) return 0.0;
    if (j >= alpha) return lattice_sum(A, mu, j);
    const int order = alpha - j;
    auto f = [&](double t) { return std::pow(mu - t, order - 1) / detail::factorial(order - 1) * lattice_sum(A, t, alpha); };
    if (mu == 0.0) return 0.0;
    const double lo = std::min(0.0, mu), hi = std::max(0.0, mu);
    std::vector<double> br;
    for (double b = 1.0; b < std::abs(mu); b *= 8.0) br.push_back(mu > 0 ? b : -b);
    const double v = quad::integrate_piecewise(f, lo, hi, br, {1e-300, 1e-12, 25});
    return mu > 0 ? v : -v;
  }

  double operator()(double mu) const { return derivative(0, mu); }
};

/// TR(A) with the minimal depth, or a larger one when requested.
inline TraceFunction trace_function(const ParamMultiplier& A, int alpha = -1) {
  if (!A.eval) throw ValidationError("trace_function: multiplier has no derivative closures");
  TraceFunction t{A, A.is_zero ? 0 : trace_class_depth(A.order)};
  if (alpha >= 0) {
    if (alpha < t.alpha) throw ValidationError("trace_function: depth below the trace class threshold");
    t.alpha = alpha;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Expansions as mu -> +inf and mu -> -inf

struct TraceExpansion {
  AsymptoticExpansion plus{"mu"};
  AsymptoticExpansion minus{"mu"};  // in |mu| as mu -> -inf
  bool analytic = false;
  double fit_residual = 0.0;
  double fit_condition = 0.0;
};

namespace detail {

/// C(s) (mu^2 + c)^{s+1/2} with C(s) = sqrt(pi) Gamma(-s-1/2) / Gamma(-s): the
/// integral over xi, equal to the lattice sum up to exponentially small terms.
inline std::optional<AsymptoticExpansion> bracket_trace_expansion(const ParamMultiplier::Bracket& b,
                                                                  double floor_exponent) {
  const double sp = b.s + 0.5;
  if (sp >= 0.0 && std::abs(sp - std::round(sp)) < 1e-12) return std::nullopt;  // log terms
  const double C = std::sqrt(std::numbers::pi) * std::tgamma(-b.s - 0.5) / std::tgamma(-b.s);
  AsymptoticExpansion e("mu");
  double bin = 1.0;
  int i = 0;
  for (; 2.0 * sp - 2.0 * i > floor_exponent; ++i) {
    e.add(2.0 * sp - 2.0 * i, 0, b.coef * C * bin * std::pow(b.c, i));
    bin *= (sp - i) / (i + 1);
  }
  e.set_remainder_order(2.0 * sp - 2.0 * i);
  return e;
}

inline std::vector<std::pair<double, int>> trace_fit_basis(double m, int alpha, double floor_exponent) {
  std::vector<std::pair<double, int>> basis;
  auto has = [&](double e, int l) {
    for (const auto& [x, y] : basis)
      if (same_order(x, e) && y == l) return true;
    return false;
  };
  for (int j = 0; m + 1.0 - j > floor_exponent; ++j) {
    const double e = m + 1.0 - j;
    if (std::abs(e - std::round(e)) < 1e-12 && e > -1.0 - 1e-12) basis.push_back({std::round(e), 1});
    if (!has(e, 0)) basis.push_back({e, 0});
  }
  for (int k = 0; k < alpha; ++k)
    if (!has(k, 0)) basis.push_back({static_cast<double>(k), 0});
  return basis;
}

inline AsymptoticExpansion fit_side(const TraceFunction& tf, double sign, double floor_exponent, FitResult* info) {
  const auto basis = trace_fit_basis(tf.A.order, tf.alpha, floor_exponent);
  std::vector<std::pair<double, double>> samples;
  for (double mu : log_spaced(1e2, 1e4, static_cast<int>(2 * basis.size() + 4)))
    samples.push_back({mu, tf(sign * mu)});
  // representative identically zero, as for multipliers polynomial in mu alone
  if (std::all_of(samples.begin(), samples.end(), [](const auto& p) { return p.second == 0.0; }))
    return AsymptoticExpansion("mu", floor_exponent);
  auto fit = fit_expansion(samples, basis);
  if (info) *info = fit;
  AsymptoticExpansion e("mu", floor_exponent);
  for (const auto& x : fit.expansion.entries()) e.add(x.exponent, x.logpow, x.coefficient);
  return e;
}

/// Polynomial part (degree < alpha) of representative minus the class expansion.
inline void add_polynomial_part(const TraceFunction& tf, double sign, AsymptoticExpansion& e) {
  if (tf.alpha == 0) return;
  std::vector<std::pair<double, double>> samples;
  std::vector<std::pair<double, int>> basis;
  for (int k = 0; k < tf.alpha; ++k) basis.push_back({static_cast<double>(k), 0});
  for (double mu : log_spaced(20.0, 200.0, 2 * tf.alpha + 4))
    samples.push_back({mu, tf(sign * mu) - e.evaluate(mu)});
  // the difference is an exact polynomial, so an unweighted solve is fine
  Eigen::MatrixXd M(static_cast<Eigen::Index>(samples.size()), tf.alpha);
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = samples[i].second;
    for (int k = 0; k < tf.alpha; ++k) M(static_cast<Eigen::Index>(i), k) = std::pow(samples[i].first, k);
  }
  const Eigen::VectorXd c = M.colPivHouseholderQr().solve(y);
  for (int k = 0; k < tf.alpha; ++k) e.add(k, 0, c(k));
}

}  // namespace detail

/// Expansion of TR(A) at +inf and -inf. Closed form for the bracket family
/// (class modulo polynomials), least squares fit on mu in [1e2, 1e4] otherwise.
/// Log powers never exceed 1: the fit basis contains no higher ones.
inline TraceExpansion trace_expansion(const ParamMultiplier& A, double floor_exponent = -7.5) {
  TraceExpansion out;
  if (A.is_zero) {
    out.analytic = true;
    return out;
  }
  const auto tf = trace_function(A);
  if (A.bracket) {
    if (auto e = detail::bracket_trace_expansion(*A.bracket, floor_exponent)) {
      out.plus = *e;
      out.minus = *e;
      out.analytic = true;
      return out;
    }
  }
  // the window [1e2, 1e4] resolves about four orders below the leading one
  floor_exponent = std::max(floor_exponent, A.order + 1.0 - 4.5);
  FitResult info;
  out.plus = detail::fit_side(tf, 1.0, floor_exponent, &info);
  out.fit_residual = info.residual;
  out.fit_condition = info.condition;
  out.minus = detail::fit_side(tf, -1.0, floor_exponent, &info);
  out.fit_residual = std::max(out.fit_residual, info.residual);
  out.fit_condition = std::max(out.fit_condition, info.condition);
  return out;
}

/// The representative of TR(A) as a one-dimensional symbol in mu: core on
/// |mu| < 1, expansion terms from both ends, remainder representative - terms.
inline SymbolExpansion trace_symbol(const ParamMultiplier& A, double floor_exponent = -7.5) {
  if (A.is_zero) return zero_symbol(1);
  const auto tf = trace_function(A);
  auto ex = trace_expansion(A, floor_exponent);
  if (ex.analytic) {
    detail::add_polynomial_part(tf, 1.0, ex.plus);
    detail::add_polynomial_part(tf, -1.0, ex.minus);
  }
  SymbolExpansion sym;
  sym.dim = 1;
  sym.order = A.order + 1.0;
  sym.logdeg = 1;
  std::vector<std::pair<double, int>> keys;
  for (const auto* e : {&ex.plus, &ex.minus})
    for (const auto& x : e->entries()) {
      bool seen = false;
      for (const auto& [k, l] : keys) seen = seen || (same_order(k, x.exponent) && l == x.logpow);
      if (!seen) keys.push_back({x.exponent, x.logpow});
    }
  for (const auto& [k, l] : keys) {
    const double cp = ex.plus.coefficient(k, l), cm = ex.minus.coefficient(k, l);
    Polynomial p(1);
    p.add_term({0}, 0.5 * (cp + cm));
    p.add_term({1}, 0.5 * (cp - cm));
    if (!p.is_zero()) sym.terms.push_back({k, l, AngularFunction::polynomial(p)});
  }
  sort_terms(sym.terms);
  if (!sym.terms.empty()) sym.order = std::max(sym.terms.front().order, sym.order);
  sym.core = [tf](Point x) { return tf(x[0]); };
  sym.remainder = [tf, terms = sym.terms](Point x) {
    double t = 0.0;
    for (const auto& term : terms) t += term.value(x);
    return tf(x[0]) - t;
  };
  sym.remainder_order = std::max(ex.plus.remainder_order(), ex.minus.remainder_order());
  sym.generator_description = nlohmann::json{{"trace_of", nlohmann::json::parse(A.description)}}.dump();
  return sym;
}

/// The regularized trace: partie finie over R of the representative. Since
/// pf kills polynomials the value does not depend on the representative.
inline double tr_bar(const ParamMultiplier& A) {
  if (A.is_zero) return 0.0;
  return partie_finie(trace_symbol(A), {1e-11, 1e-12, 25});
}

/// pf of TR(d_mu A).
inline double derived_trace(const ParamMultiplier& A) { return tr_bar(mu_derivative(A)); }

/// Residue of the trace function, normalized by 2 pi (p = 1).
inline double res_of_TR(const ParamMultiplier& A) {
  if (A.is_zero) return 0.0;
  const auto ex = trace_expansion(A);
  return (ex.plus.coefficient(-1.0, 0) + ex.minus.coefficient(-1.0, 0)) / (2.0 * std::numbers::pi);
}

}  // namespace regtrace
