#pragma once

// Large-lambda expansion of F(lambda) = int B(x) Q(x, lambda) dx for a
// polyhomogeneous B and a kernel homogeneous of degree q in (x, lambda).
//
// With Q(x, lambda) = lambda^q Q(x/lambda, 1) the integral splits into
//   |x| <= 1        core of B against the Taylor polynomials Q_j of Q(., 1) at 0
//   |x| >= 1        each homogeneous term of B, rescaled x = lambda y, so that
//                   only int_{1/lambda}^1 of Taylor terms depends on lambda
//                   (closed form via the log-power primitive)
//   |x| >= 1        the remainder of B against the Taylor polynomials
// which produces entries at exponents q+b+n (log powers up to k+1) and q-j.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regtrace/errors.hpp"
#include "regtrace/log_integral.hpp"
#include "regtrace/quadrature.hpp"
#include "regtrace/reg_int.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

/// Kernel Q(x, lambda) with Q(r x, r lambda) = r^q Q(x, lambda).
/// taylor(j) returns h_j with Q_j(y) = |y|^j h_j(y/|y|), the degree j part of
/// the Taylor expansion of Q(., 1) at 0. taylor_tail(y, N) evaluates
/// Q(y, 1) - sum_{j<=N} Q_j(y) without cancellation near y = 0.
struct ParamKernel {
  std::size_t dim = 1;
  double degree = 0.0;
  std::function<double(Point, double)> profile;
  std::function<AngularFunction(int)> taylor;
  std::function<double(Point, int)> taylor_tail;
  std::string description;

  double unit(Point y) const { return profile(y, 1.0); }
};

/// (|x|^2 + lambda^2)^{-s}; Q_j = binom(-s, j/2) |y|^j for even j.
inline ParamKernel bracket_kernel(std::size_t n, double s) {
  if (n < 1 || n > 3) throw ValidationError("bracket_kernel: dimension must be 1, 2 or 3");
  ParamKernel k;
  k.dim = n;
  k.degree = -2.0 * s;
  k.profile = [s](Point x, double lambda) {
    double r2 = lambda * lambda;
    for (double v : x) r2 += v * v;
    return std::pow(r2, -s);
  };
  auto coef = [s](int i) {
    double b = 1.0;
    for (int m = 0; m < i; ++m) b *= (-s - m) / (m + 1);
    return b;
  };
  k.taylor = [n, coef](int j) {
    return AngularFunction::constant(n, j % 2 == 0 ? coef(j / 2) : 0.0);
  };
  k.taylor_tail = [s, coef](Point y, int N) {
    const double r2 = [&] {
      double a = 0.0;
      for (double v : y) a += v * v;
      return a;
    }();
    const int first = N / 2 + 1;
    if (r2 < 0.25) {
      double sum = 0.0, p = std::pow(r2, first);
      for (int i = first; i < first + 80; ++i, p *= r2) sum += coef(i) * p;
      return sum;
    }
    double sum = std::pow(1.0 + r2, -s), p = 1.0;
    for (int i = 0; i < first; ++i, p *= r2) sum -= coef(i) * p;
    return sum;
  };
  k.description = nlohmann::json{{"kernel", "bracket"}, {"dimension", n}, {"s", s}}.dump();
  return k;
}

/// One-dimensional kernel lambda^q g(x/lambda) for a smooth profile g. The
/// Taylor coefficients of g at 0 come from Newton divided differences on
/// Chebyshev nodes in [-h, h]; the fit is verified by sampling and rejected
/// if the tail does not decay like |y|^{N+1}.
inline ParamKernel generic_kernel_1d(double q, std::function<double(double)> g, int degree = 24, double h = 0.5) {
  const int m = degree + 1;
  std::vector<double> x(m), c(m);
  for (int i = 0; i < m; ++i) {
    x[i] = h * std::cos(std::numbers::pi * (i + 0.5) / m);
    c[i] = g(x[i]);
  }
  for (int j = 1; j < m; ++j)
    for (int i = m - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - j]);
  // Newton form to monomial coefficients.
  std::vector<double> mono(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    for (int k = m - 1; k >= 1; --k) mono[k] = mono[k - 1] - x[i] * mono[k];
    mono[0] = c[i] - x[i] * mono[0];
  }
  for (double t : {0.3 * h, -0.7 * h, 0.9 * h}) {
    double p = 0.0;
    for (int k = m - 1; k >= 0; --k) p = p * t + mono[k];
    if (std::abs(p - g(t)) > 1e-12 * std::max(1.0, std::abs(g(t))))
      throw NumericalError("generic_kernel_1d: Taylor fit of the profile is not accurate");
  }
  ParamKernel k;
  k.dim = 1;
  k.degree = q;
  k.profile = [g, q](Point xi, double lambda) { return std::pow(lambda, q) * g(xi[0] / lambda); };
  k.taylor = [mono, m](int j) {
    if (j >= m) throw ValidationError("generic_kernel_1d: Taylor order beyond the fitted degree");
    return AngularFunction::polynomial(Polynomial::monomial({j}, mono[j]));
  };
  k.taylor_tail = [g, mono, m, h](Point y, int N) {
    const double t = y[0];
    if (std::abs(t) < 0.5 * h) {
      double s = 0.0;
      for (int j = m - 1; j > N; --j) s = s * t + mono[j];
      return s * std::pow(t, N + 1);
    }
    double s = g(t);
    for (int j = 0; j <= N; ++j) s -= mono[j] * std::pow(t, j);
    return s;
  };
  k.description = nlohmann::json{{"kernel", "generic_1d"}, {"degree", q}}.dump();
  return k;
}

namespace detail {

/// int_lo^inf r^{e} log^m r G(r) dr in the variable u = log r, lo >= 1, for
/// integrands decaying like r^{decay - 1} with decay < 0 beyond the last break.
inline double log_radial(const std::function<double(double)>& G, double e, int m, double lo, double decay,
                         std::vector<double> breaks, const quad::Tolerance& tol) {
  const double u0 = std::log(lo);
  const double span = std::isinf(decay) ? std::log(64.0) : std::min(700.0, (40.0 + 5.0 * m) / -decay);
  auto f = [&](double u) {
    const double r = std::exp(u);
    return std::pow(r, e + 1.0) * std::pow(u, m) * G(r);
  };
  std::vector<double> ub;
  double last = u0;
  for (double b : breaks)
    if (b > lo) ub.push_back(std::log(b)), last = std::max(last, std::log(b));
  return quad::integrate_piecewise(f, u0, last + span, ub, tol);
}

inline double binom_int(int l, int m) { return factorial(l) / (factorial(m) * factorial(l - m)); }

}  // namespace detail

/// Default Taylor depth: smallest N with b + N + 1 > -n + 4.
inline int default_taylor_depth(double b, std::size_t n) {
  int N = 0;
  while (!(b + N + 1 > -static_cast<double>(n) + 4.0)) ++N;
  return N;
}

inline AsymptoticExpansion bq_expansion(const SymbolExpansion& B, const ParamKernel& Q, int N = -1,
                                        const quad::Tolerance& tol = {}) {
  const std::size_t n = B.dim;
  const double nd = static_cast<double>(n);
  if (Q.dim != n) throw ValidationError("bq_expansion: kernel and symbol dimensions differ");
  const double q = Q.degree;
  if (B.is_zero()) return AsymptoticExpansion("lambda");
  if (!(B.order + q + nd < 0.0)) throw ValidationError("bq_expansion: hypothesis b + q + n < 0 violated");
  if (N < 0) N = default_taylor_depth(B.order, n);
  for (const auto& t : B.terms)
    while (!(t.order + N + 1 + nd > 0.0)) ++N;

  const double rho = B.remainder_is_zero ? kMinusInfinity : B.remainder_order;
  const double rem_exp = q + std::max(rho + nd, -(N + 1.0));
  AsymptoticExpansion acc("lambda", rem_exp);
  std::vector<AngularFunction> h;
  for (int j = 0; j <= N; ++j) h.push_back(Q.taylor(j));

  std::vector<double> x(n);
  auto at = [&](double r, Point w) {
    for (std::size_t i = 0; i < n; ++i) x[i] = r * w[i];
    return Point(x);
  };

  if (!B.core_is_zero) {
    for (int j = 0; j <= N; ++j) {
      if (h[j].is_zero()) continue;
      const double cj = direction_integral(
          n,
          [&](Point w) {
            auto f = [&](double r) { return std::pow(r, nd - 1.0 + j) * B.core(at(r, w)); };
            return h[j](w) * quad::integrate_piecewise(f, 0.0, 1.0, B.breaks(w), tol);
          },
          tol);
      acc.add(q - j, 0, cj);
    }
  }

  if (!B.remainder_is_zero) {
    for (int j = 0; j <= N && rho + j + nd < 0.0 && q - j > rem_exp; ++j) {
      if (h[j].is_zero()) continue;
      const double ej = direction_integral(
          n,
          [&](Point w) {
            auto G = [&](double r) { return B.remainder(at(r, w)); };
            return h[j](w) * detail::log_radial(G, nd - 1.0 + j, 0, 1.0, rho + j + nd, B.breaks(w), tol);
          },
          tol);
      acc.add(q - j, 0, ej);
    }
  }

  for (const auto& t : B.terms) {
    const double a = t.order;
    const int l = t.logpow;
    for (int m = 0; m <= l; ++m) {
      const double bin = detail::binom_int(l, m);
      const double am = direction_integral(
          n,
          [&](Point w) {
            auto G = [&](double r) { return Q.unit(at(r, w)); };
            return t.angular(w) * detail::log_radial(G, a + nd - 1.0, m, 1.0, a + nd + q, {}, tol);
          },
          tol);
      const double dm = direction_integral(
          n,
          [&](Point w) {
            auto f = [&](double r) {
              if (r == 0.0) return 0.0;
              return std::pow(r, a + nd - 1.0) * std::pow(std::log(r), m) * Q.taylor_tail(at(r, w), N);
            };
            return t.angular(w) * quad::integrate(f, 0.0, 1.0, tol);
          },
          tol);
      acc.add(q + a + nd, l - m, bin * (am + dm));

      for (int j = 0; j <= N; ++j) {
        const double sj = sphere_integral(t.angular * h[j]);
        if (sj == 0.0) continue;
        const double beta = a + j + nd - 1.0;
        if (same_order(beta, -1.0)) {
          const double sign = ((m + 1) % 2 == 0) ? 1.0 : -1.0;
          acc.add(q - j, l + 1, bin * (-sj) * sign / (m + 1));
          continue;
        }
        const double b1 = beta + 1.0;
        const double mf = detail::factorial(m);
        for (int i = 0; i <= m; ++i) {
          const double ci = ((i % 2 == 0) ? 1.0 : -1.0) * mf / (detail::factorial(m - i) * std::pow(b1, i + 1));
          const double sign = ((m - i) % 2 == 0) ? 1.0 : -1.0;
          acc.add(q - j, l - i, bin * (-sj) * ci * sign);
        }
        const double cst = (((m + 1) % 2 == 0) ? 1.0 : -1.0) * mf / std::pow(b1, m + 1);
        acc.add(q + a + nd, l - m, bin * (-sj) * cst);
      }
    }
  }

  AsymptoticExpansion out("lambda", rem_exp);
  for (const auto& e : acc.entries())
    if (e.exponent > rem_exp + kOrderTolerance) out.add(e.exponent, e.logpow, e.coefficient);
  return out;
}

/// Direct quadrature of F(lambda); the oracle for bq_expansion.
inline double numeric_F(const SymbolExpansion& B, const ParamKernel& Q, double lambda,
                        const quad::Tolerance& tol = {1e-300, 1e-13, 25}) {
  const std::size_t n = B.dim;
  const double nd = static_cast<double>(n);
  if (Q.dim != n) throw ValidationError("numeric_F: kernel and symbol dimensions differ");
  if (B.is_zero()) return 0.0;
  if (!(B.order + Q.degree + nd < 0.0)) throw ValidationError("numeric_F: hypothesis b + q + n < 0 violated");
  if (!(lambda > 0.0)) throw ValidationError("numeric_F: lambda must be positive");
  std::vector<double> x(n);
  auto at = [&](double r, Point w) {
    for (std::size_t i = 0; i < n; ++i) x[i] = r * w[i];
    return Point(x);
  };
  return direction_integral(
      n,
      [&](Point w) {
        double s = 0.0;
        if (!B.core_is_zero) {
          auto f = [&](double r) {
            const double c = B.core(at(r, w));
            return std::pow(r, nd - 1.0) * c * Q.profile(Point(x), lambda);
          };
          s += quad::integrate_piecewise(f, 0.0, 1.0, B.breaks(w), tol);
        }
        auto G = [&](double r) {
          Point p = at(r, w);
          const double v = B.terms_value(p) + B.remainder_value(p);
          return v * Q.profile(p, lambda);
        };
        auto br = B.breaks(w);
        br.push_back(lambda);
        const double decay = B.order + Q.degree + nd;
        s += detail::log_radial(G, nd - 1.0, 0, 1.0, decay, br, tol);
        return s;
      },
      tol);
}

struct FitResult {
  AsymptoticExpansion expansion{"lambda"};
  double residual = 0.0;   // relative rms residual
  double condition = 0.0;  // of the column-normalized design matrix
};

/// Least squares fit of samples (lambda, F) in the basis lambda^e log^l lambda.
/// Columns are normalized before a column-pivoted QR.
inline FitResult fit_expansion(const std::vector<std::pair<double, double>>& samples,
                               const std::vector<std::pair<double, int>>& basis) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) throw ValidationError("fit_expansion: empty basis");
  if (m < 2 * k) throw ValidationError("fit_expansion: need at least twice as many samples as basis functions");
  Eigen::MatrixXd M(m, k);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lam = samples[i].first, ll = std::log(lam);
    if (!(lam > 0.0)) throw ValidationError("fit_expansion: sample points must be positive");
    y(i) = samples[i].second;
    for (Eigen::Index j = 0; j < k; ++j) M(i, j) = std::pow(lam, basis[j].first) * std::pow(ll, basis[j].second);
  }
  // Row weights make every sample count relative to its own size.
  Eigen::VectorXd wrow(m);
  for (Eigen::Index i = 0; i < m; ++i) wrow(i) = 1.0 / std::max(std::abs(y(i)), 1e-300);
  M = wrow.asDiagonal() * M;
  y = wrow.asDiagonal() * y;
  Eigen::VectorXd scale = M.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (scale(j) == 0.0) throw NumericalError("fit_expansion: rank deficient design matrix");
    M.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto sv = svd.singularValues();
  FitResult res;
  res.condition = sv(0) / sv(sv.size() - 1);
  if (!std::isfinite(res.condition) || res.condition > 1e14)
    throw NumericalError("fit_expansion: rank deficient design matrix");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::VectorXd c = qr.solve(y);
  res.residual = (M * c - y).norm() / std::sqrt(static_cast<double>(m));
  for (Eigen::Index j = 0; j < k; ++j) res.expansion.add(basis[j].first, basis[j].second, c(j) / scale(j));
  return res;
}

/// n log-spaced sample points in [lo, hi].
inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return v;
}

}  // namespace regtrace
