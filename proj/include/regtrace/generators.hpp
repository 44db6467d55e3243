#pragma once

// Named closed-form symbol generators. Every generator is described by a JSON
// object {"generator": name, ...parameters}; make_symbol() rebuilds the
// SymbolExpansion from that description, which is also stored on the symbol
// so that it can be serialized again.
//
//   bracket     x^beta (c + |x|^2)^s
//   hom         P(w) r^a log^l r for r >= 1; core zero or the polynomial P(x)
//   polynomial  Q(x) split into homogeneous components
//   gaussian    exp(-|x|^2)
//   lincomb     sum of coefficient * symbol
//   scaled      symbol(A x)

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regtrace/errors.hpp"
#include "regtrace/polynomial.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

using json = nlohmann::json;

namespace detail {

inline double generalized_binomial(double s, int i) {
  double b = 1.0;
  for (int k = 0; k < i; ++k) b *= (s - k) / (k + 1);
  return b;
}

inline double monomial_value(const MultiIndex& beta, Point x) {
  double v = 1.0;
  for (std::size_t k = 0; k < beta.size(); ++k) v *= std::pow(x[k], beta[k]);
  return v;
}

inline double terms_partial(const std::vector<HomTerm>& terms, Point x, std::size_t j) {
  double s = 0.0;
  for (const auto& t : terms)
    for (const auto& d : differentiate_term(t, j)) s += d.value(x);
  return s;
}

}  // namespace detail

/// x^beta (c + |x|^2)^s with `depth` listed terms. For |x| beyond
/// `switch_radius` (default 4 sqrt(c)) the remainder is summed from the
/// convergent binomial series instead of subtracting the listed terms from the
/// closed form, which would cancel catastrophically.
inline SymbolExpansion bracket_symbol(std::size_t dim, double s, MultiIndex beta = {}, double c = 1.0,
                                      int depth = 4, double switch_radius = 0.0) {
  if (dim < 1 || dim > 3) throw ValidationError("bracket: dimension must be 1, 2 or 3");
  if (beta.empty()) beta.assign(dim, 0);
  if (beta.size() != dim) throw ValidationError("bracket: monomial arity mismatch");
  if (c <= 0.0) throw ValidationError("bracket: c must be positive");
  if (depth < 1) throw ValidationError("bracket: depth must be positive");
  int bdeg = 0;
  for (int b : beta) bdeg += b;
  if (switch_radius <= 0.0) switch_radius = 4.0 * std::sqrt(c);

  SymbolExpansion sym;
  sym.dim = dim;
  sym.order = bdeg + 2.0 * s;
  sym.logdeg = 0;

  auto series_terms = [&](int from, int to) {
    std::vector<HomTerm> out;
    for (int i = from; i < to; ++i) {
      const double coef = detail::generalized_binomial(s, i) * std::pow(c, i);
      if (coef == 0.0) continue;
      out.push_back({bdeg + 2.0 * s - 2.0 * i, 0, AngularFunction::polynomial(Polynomial::monomial(beta, coef))});
    }
    return out;
  };
  sym.terms = series_terms(0, depth);
  const bool terminates = s >= 0 && std::floor(s) == s && depth > s;
  sym.remainder_order = terminates ? kMinusInfinity : bdeg + 2.0 * s - 2.0 * depth;
  const auto tail = series_terms(depth, depth + 60);

  auto f = [beta, s, c](Point x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return detail::monomial_value(beta, x) * std::pow(c + r2, s);
  };
  auto df = [beta, s, c](Point x, std::size_t j) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    double d = 0.0;
    if (beta[j] > 0) {
      MultiIndex m = beta;
      m[j] -= 1;
      d += beta[j] * detail::monomial_value(m, x) * std::pow(c + r2, s);
    }
    d += detail::monomial_value(beta, x) * s * std::pow(c + r2, s - 1.0) * 2.0 * x[j];
    return d;
  };
  sym.core = f;
  sym.core_partial = df;
  if (terminates) {
    sym.remainder_is_zero = true;
  } else {
    sym.remainder = [f, terms = sym.terms, tail, switch_radius](Point x) {
      if (norm(x) < switch_radius) {
        double t = 0.0;
        for (const auto& term : terms) t += term.value(x);
        return f(x) - t;
      }
      double t = 0.0;
      for (const auto& term : tail) t += term.value(x);
      return t;
    };
    sym.remainder_partial = [df, terms = sym.terms, tail, switch_radius](Point x, std::size_t j) {
      if (norm(x) < switch_radius) return df(x, j) - detail::terms_partial(terms, x, j);
      return detail::terms_partial(tail, x, j);
    };
  }
  sym.generator_description = json{{"generator", "bracket"}, {"dimension", dim}, {"s", s},
                                   {"monomial", beta}, {"c", c}, {"depth", depth}}.dump();
  return sym;
}

enum class CoreKind { zero, polynomial };

/// A single homogeneous term P(w) r^a log^l r for r >= 1. With CoreKind::polynomial
/// the core is P(x) (continuous across r = 1 for l = 0, zero for l > 0).
inline SymbolExpansion hom_symbol(std::size_t dim, double order, int logpow, Polynomial angular,
                                  CoreKind core = CoreKind::zero) {
  if (angular.nvars() != dim) throw ValidationError("hom: angular arity mismatch");
  if (logpow < 0) throw ValidationError("hom: negative log power");
  SymbolExpansion sym;
  sym.dim = dim;
  sym.order = order;
  sym.logdeg = logpow;
  sym.terms = {{order, logpow, AngularFunction::polynomial(angular)}};
  sym.remainder_is_zero = true;
  sym.remainder_order = kMinusInfinity;
  if (core == CoreKind::zero || logpow > 0) {
    sym.core_is_zero = true;
  } else {
    sym.core = [angular](Point x) { return angular(x); };
    sym.core_partial = [angular](Point x, std::size_t j) {
      return angular.derivative(j)(x);
    };
  }
  json ang = json::array();
  for (const auto& [e, c] : angular.terms()) ang.push_back({{"exponents", e}, {"coefficient", c}});
  sym.generator_description = json{{"generator", "hom"}, {"dimension", dim}, {"order", order},
                                   {"logpow", logpow}, {"angular", ang},
                                   {"core", core == CoreKind::zero ? "zero" : "polynomial"}}.dump();
  return sym;
}

/// chi(|x| >= 1) |x|^order log^logpow |x| with constant angular part.
inline SymbolExpansion cutoff_power(std::size_t dim, double order, int logpow = 0, double coef = 1.0) {
  return hom_symbol(dim, order, logpow, Polynomial::constant(dim, coef), CoreKind::zero);
}

/// Exact representation of a polynomial symbol.
inline SymbolExpansion polynomial_symbol(const Polynomial& q) {
  const std::size_t dim = q.nvars();
  SymbolExpansion sym;
  sym.dim = dim;
  if (q.is_zero()) return zero_symbol(dim);
  sym.order = q.degree();
  for (int d = q.degree(); d >= 0; --d) {
    Polynomial comp(dim);
    for (const auto& [e, c] : q.terms()) {
      int s = 0;
      for (int k : e) s += k;
      if (s == d) comp.add_term(e, c);
    }
    if (!comp.is_zero()) sym.terms.push_back({static_cast<double>(d), 0, AngularFunction::polynomial(comp)});
  }
  sym.core = [q](Point x) { return q(x); };
  sym.core_partial = [q](Point x, std::size_t j) { return q.derivative(j)(x); };
  sym.remainder_is_zero = true;
  json ang = json::array();
  for (const auto& [e, c] : q.terms()) ang.push_back({{"exponents", e}, {"coefficient", c}});
  sym.generator_description = json{{"generator", "polynomial"}, {"dimension", dim}, {"polynomial", ang}}.dump();
  return sym;
}

inline SymbolExpansion gaussian_symbol(std::size_t dim) {
  SymbolExpansion sym;
  sym.dim = dim;
  sym.order = kMinusInfinity;
  auto f = [](Point x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::exp(-r2);
  };
  auto df = [f](Point x, std::size_t j) { return -2.0 * x[j] * f(x); };
  sym.core = f;
  sym.core_partial = df;
  sym.remainder = f;
  sym.remainder_partial = df;
  sym.remainder_order = kMinusInfinity;
  sym.generator_description = json{{"generator", "gaussian"}, {"dimension", dim}}.dump();
  return sym;
}

namespace detail {

inline Polynomial polynomial_from_json(std::size_t dim, const json& j) {
  Polynomial p(dim);
  for (const auto& t : j) {
    MultiIndex e = t.at("exponents").get<MultiIndex>();
    const auto& c = t.at("coefficient");
    p.add_term(e, c.is_string() ? std::stod(c.get<std::string>()) : c.get<double>());
  }
  return p;
}

inline double number(const json& j) { return j.is_string() ? std::stod(j.get<std::string>()) : j.get<double>(); }

}  // namespace detail

/// Rebuilds a symbol from its generator description.
inline SymbolExpansion make_symbol(const json& spec) {
  try {
    const std::string g = spec.at("generator").get<std::string>();
    const std::size_t dim = spec.value("dimension", std::size_t{1});
    if (dim < 1 || dim > 3) throw ValidationError("symbol dimension must be 1, 2 or 3");
    if (g == "bracket") {
      MultiIndex beta = spec.value("monomial", MultiIndex{});
      return bracket_symbol(dim, detail::number(spec.at("s")), beta, spec.contains("c") ? detail::number(spec["c"]) : 1.0,
                            spec.value("depth", 4));
    }
    if (g == "hom") {
      Polynomial ang = spec.contains("angular") ? detail::polynomial_from_json(dim, spec["angular"])
                                                : Polynomial::constant(dim, 1.0);
      const std::string core = spec.value("core", std::string("zero"));
      if (core != "zero" && core != "polynomial") throw ValidationError("hom: core must be 'zero' or 'polynomial'");
      return hom_symbol(dim, detail::number(spec.at("order")), spec.value("logpow", 0), ang,
                        core == "zero" ? CoreKind::zero : CoreKind::polynomial);
    }
    if (g == "polynomial") return polynomial_symbol(detail::polynomial_from_json(dim, spec.at("polynomial")));
    if (g == "gaussian") return gaussian_symbol(dim);
    if (g == "zero") return zero_symbol(dim);
    if (g == "lincomb") {
      const auto& parts = spec.at("parts");
      if (parts.empty()) throw ValidationError("lincomb: no parts");
      SymbolExpansion acc = zero_symbol(make_symbol(parts[0].at("symbol")).dim);
      for (const auto& part : parts)
        acc = linear_combination(1.0, acc, detail::number(part.at("coefficient")), make_symbol(part.at("symbol")));
      acc.generator_description = spec.dump();
      return acc;
    }
    if (g == "scaled") {
      const auto base = make_symbol(spec.at("symbol"));
      const auto& rows = spec.at("matrix");
      Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw ValidationError("scaled: matrix must be square");
        for (std::size_t k = 0; k < rows.size(); ++k)
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = detail::number(rows[i][k]);
      }
      auto out = scale_variable(base, a);
      out.generator_description = spec.dump();
      return out;
    }
    throw ValidationError("unknown symbol generator '" + g + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed symbol JSON: ") + e.what());
  }
}

}  // namespace regtrace
