#pragma once

// Flat model manifolds with explicitly known Laplace spectra: the circle of
// radius R and the torus R^n / (L_1 Z x ... x L_n Z). Heat traces, zeta
// functions and residues are computed from the spectrum alone; the closed
// form heat coefficients are only used where a route is declared to use them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "regtrace/asym_engine.hpp"
#include "regtrace/errors.hpp"
#include "regtrace/generators.hpp"
#include "regtrace/quadrature.hpp"
#include "regtrace/reg_int.hpp"
#include "regtrace/summation.hpp"

namespace regtrace {

struct SpectralModel {
  enum class Kind { circle, torus };
  Kind kind = Kind::circle;
  std::vector<double> periods;  // L_i; the circle of radius R has L = 2 pi R

  static SpectralModel circle(double radius) {
    if (!(radius > 0.0)) throw ValidationError("circle: radius must be positive");
    return {Kind::circle, {2.0 * std::numbers::pi * radius}};
  }
  static SpectralModel torus(std::vector<double> sides) {
    if (sides.empty() || sides.size() > 3) throw ValidationError("torus: dimension must be 1, 2 or 3");
    for (double l : sides)
      if (!(l > 0.0)) throw ValidationError("torus: side lengths must be positive");
    return {Kind::torus, std::move(sides)};
  }
  static SpectralModel torus(std::size_t n, double side) { return torus(std::vector<double>(n, side)); }

  std::size_t dim() const { return periods.size(); }
  double radius() const { return periods[0] / (2.0 * std::numbers::pi); }
  double volume() const {
    double v = 1.0;
    for (double l : periods) v *= l;
    return v;
  }
  std::string name() const {
    if (kind == Kind::circle) return "circle(R=" + std::to_string(radius()) + ")";
    return "torus" + std::to_string(dim());
  }
};

/// Weyl constant: N(lambda) ~ vol (4 pi)^{-n/2} / Gamma(n/2 + 1) lambda^{n/2}.
inline double weyl_constant(const SpectralModel& m) {
  const double n = static_cast<double>(m.dim());
  return m.volume() * std::pow(4.0 * std::numbers::pi, -0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// ---------------------------------------------------------------------------
// Heat trace

namespace detail {

constexpr double kThetaCut = 1e-18;

/// sum_k exp(-tau k^2) by direct summation.
inline double theta_direct(double tau) {
  double s = 0.0;
  for (int k = 1;; ++k) {
    const double t = std::exp(-tau * k * k);
    s += t;
    if (t < kThetaCut) break;
  }
  return 1.0 + 2.0 * s;
}

/// eps with sum_k exp(-tau k^2) = sqrt(pi/tau) (1 + eps), from the dual lattice.
inline double theta_dual_excess(double tau) {
  if (tau <= 0.0) return 0.0;
  double s = 0.0;
  const double c = std::numbers::pi * std::numbers::pi / tau;
  for (int m = 1;; ++m) {
    const double t = std::exp(-c * m * m);
    s += t;
    if (t < kThetaCut) break;
  }
  return 2.0 * s;
}

inline double theta_poisson(double tau) { return std::sqrt(std::numbers::pi / tau) * (1.0 + theta_dual_excess(tau)); }

inline double theta(double tau) { return tau >= 1.0 ? theta_direct(tau) : theta_poisson(tau); }

/// prod (1 + d_i) - 1 without cancellation.
inline double product_minus_one(const std::vector<double>& d) {
  double acc = 0.0;
  for (double x : d) acc = acc + x + acc * x;
  return acc;
}

inline double tau_of(double t, double period) {
  const double k = 2.0 * std::numbers::pi / period;
  return t * k * k;
}

}  // namespace detail

/// sum_j exp(-t lambda_j), including the zero eigenvalue. The direct sum is
/// used for tau = t (2 pi / L)^2 >= 1 and Poisson summation below.
inline double heat_trace(const SpectralModel& m, double t) {
  if (!(t > 0.0)) throw ValidationError("heat_trace: t must be positive");
  double v = 1.0;
  for (double l : m.periods) v *= detail::theta(detail::tau_of(t, l));
  return v;
}

/// Both summation branches, for consistency checks.
inline double heat_trace_direct(const SpectralModel& m, double t) {
  double v = 1.0;
  for (double l : m.periods) v *= detail::theta_direct(detail::tau_of(t, l));
  return v;
}
inline double heat_trace_poisson(const SpectralModel& m, double t) {
  double v = 1.0;
  for (double l : m.periods) v *= detail::theta_poisson(detail::tau_of(t, l));
  return v;
}

/// heat_trace - 1 (kernel projected out), accurate for large t.
inline double heat_trace_projected(const SpectralModel& m, double t) {
  std::vector<double> d;
  for (double l : m.periods) d.push_back(detail::theta(detail::tau_of(t, l)) - 1.0);
  return detail::product_minus_one(d);
}

/// t^{n/2} heat_trace(t) as a function of u = log t, valid for very negative u
/// (the Poisson prefactor times the dual-lattice correction).
inline double scaled_heat_trace_log(const SpectralModel& m, double u) {
  double v = 1.0;
  for (double l : m.periods) {
    const double k = 2.0 * std::numbers::pi / l;
    const double tau = std::exp(u) * k * k;
    if (tau >= 1.0)
      v *= std::sqrt(tau / (k * k)) * detail::theta_direct(tau);
    else
      v *= (1.0 / k) * std::sqrt(std::numbers::pi) * (1.0 + detail::theta_dual_excess(tau));
  }
  return v;
}

struct HeatCoefficients {
  std::vector<double> a;       // a_j, heat trace ~ sum_j a_j t^{(j-n)/2}
  std::vector<double> fitted;  // least squares fit of the heat trace
  double max_deviation = 0.0;  // max relative mismatch of the two models on the fit window
  double window_lo = 0.0, window_hi = 0.0;
};

/// Closed form for flat models: a_0 = (4 pi)^{-n/2} vol, a_j = 0 otherwise.
/// Cross-checked by a fit of the heat trace on t in [1e-4, 1e-2] (scaled by
/// L_min^2 when the shortest side is below 1, to stay in the asymptotic regime).
inline HeatCoefficients heat_coefficients(const SpectralModel& m, int jmax = 4) {
  if (jmax < 0 || jmax > 6) throw ValidationError("heat_coefficients: jmax must be in 0..6");
  const double n = static_cast<double>(m.dim());
  HeatCoefficients hc;
  hc.a.assign(jmax + 1, 0.0);
  hc.a[0] = std::pow(4.0 * std::numbers::pi, -0.5 * n) * m.volume();

  const double lmin = *std::min_element(m.periods.begin(), m.periods.end());
  const double sc = std::min(1.0, lmin * lmin);
  hc.window_lo = 1e-4 * sc;
  hc.window_hi = 1e-2 * sc;
  std::vector<std::pair<double, double>> samples;
  for (double t : log_spaced(hc.window_lo, hc.window_hi, 4 * (jmax + 1)))
    samples.push_back({t, heat_trace(m, t)});
  std::vector<std::pair<double, int>> basis;
  for (int j = 0; j <= jmax; ++j) basis.push_back({0.5 * (j - n), 0});
  const auto fit = fit_expansion(samples, basis);
  for (int j = 0; j <= jmax; ++j) hc.fitted.push_back(fit.expansion.coefficient(0.5 * (j - n), 0));
  for (const auto& [t, v] : samples) {
    double diff = 0.0;
    for (int j = 0; j <= jmax; ++j) diff += (hc.fitted[j] - hc.a[j]) * std::pow(t, 0.5 * (j - n));
    hc.max_deviation = std::max(hc.max_deviation, std::abs(diff) / v);
  }
  if (hc.max_deviation > 1e-8)
    throw NumericalError("heat_coefficients: fitted heat expansion disagrees with the closed form");
  return hc;
}

// ---------------------------------------------------------------------------
// Zeta function  Z(w) = sum over nonzero eigenvalues of lambda^{-w}

inline constexpr double kPoleRadius = 1e-6;

namespace detail {

inline double rgamma(double w) {
  if (w <= 0.0 && std::floor(w) == w) return 0.0;
  return 1.0 / boost::math::tgamma(w);
}

inline std::vector<double> tau_switch_points(const SpectralModel& m) {
  std::vector<double> b;
  for (double l : m.periods) {
    const double k = 2.0 * std::numbers::pi / l;
    b.push_back(1.0 / (k * k));
  }
  return b;
}

/// int_1^inf t^{w-1} (theta(t) - 1) dt
inline double mellin_upper(const SpectralModel& m, double w, const quad::Tolerance& tol) {
  auto f = [&](double t) { return std::pow(t, w - 1.0) * heat_trace_projected(m, t); };
  return quad::integrate_piecewise(f, 1.0, 3.0, tau_switch_points(m), tol) +
         quad::integrate(f, 3.0, std::numeric_limits<double>::infinity(), tol);
}

}  // namespace detail

/// Analytic continuation of Z via the Mellin split at t = 1 with the heat
/// asymptotics subtracted on (0, 1):
///   Gamma(w) Z(w) = int_0^1 t^{w-1}(theta - a_0 t^{-n/2}) + a_0/(w - n/2) - 1/w
///                   + int_1^inf t^{w-1}(theta - 1).
inline double spectral_zeta(const SpectralModel& m, double w, const quad::Tolerance& tol = {}) {
  const double n = static_cast<double>(m.dim());
  if (std::abs(w - 0.5 * n) < kPoleRadius) throw ValidationError("zeta: evaluation at the pole s = n/2");
  const double a0 = std::pow(4.0 * std::numbers::pi, -0.5 * n) * m.volume();
  // int_0^1 t^{w-1} (theta(t) - a_0 t^{-n/2}) dt in u = log t
  auto lower = [&](double u) {
    std::vector<double> d;
    const double t = std::exp(u);
    for (double l : m.periods) {
      const double tau = detail::tau_of(t, l);
      d.push_back(tau >= 1.0 ? detail::theta_direct(tau) / std::sqrt(std::numbers::pi / tau) - 1.0
                             : detail::theta_dual_excess(tau));
    }
    return std::exp((w - 0.5 * n) * u) * a0 * detail::product_minus_one(d);
  };
  std::vector<double> ub;
  for (double b : detail::tau_switch_points(m))
    if (b < 1.0) ub.push_back(std::log(b));
  const double ulo = std::min(-50.0, ub.empty() ? -50.0 : *std::min_element(ub.begin(), ub.end()) - 10.0);
  const double i0 = quad::integrate_piecewise(lower, ulo, 0.0, ub, tol);
  const double i1 = detail::mellin_upper(m, w, tol);
  return detail::rgamma(w) * (i0 + i1 + a0 / (w - 0.5 * n)) - detail::rgamma(w + 1.0);
}

/// Z(w) for w > n/2 from the unsplit Mellin integral; uses no heat coefficients.
inline double zeta_mellin_direct(const SpectralModel& m, double w, const quad::Tolerance& tol = {}) {
  const double n = static_cast<double>(m.dim());
  if (!(w > 0.5 * n)) throw ValidationError("zeta_mellin_direct: requires w > n/2");
  // int_0^1 t^{w-1}(theta - 1) dt in u = log t: e^{(w-n/2)u} t^{n/2} theta - e^{wu}
  auto lower = [&](double u) { return std::exp((w - 0.5 * n) * u) * scaled_heat_trace_log(m, u) - std::exp(w * u); };
  std::vector<double> ub;
  for (double b : detail::tau_switch_points(m))
    if (b < 1.0) ub.push_back(std::log(b));
  const double ulo = -std::min(1e4, 45.0 / (w - 0.5 * n));
  const double i0 = quad::integrate_piecewise(lower, ulo, 0.0, ub, tol);
  const double i1 = detail::mellin_upper(m, w, tol);
  return (i0 + i1) / boost::math::tgamma(w);
}

/// Z(w) for w > n/2 by summing the eigenvalues: exact Riemann zeta for the
/// circle, lattice sum with a continuum tail for the torus.
inline double zeta_direct_sum(const SpectralModel& m, double w, double radius = 0.0) {
  const std::size_t n = m.dim();
  if (!(w > 0.5 * n)) throw ValidationError("zeta_direct_sum: requires w > n/2");
  if (n == 1) {
    const double k = 2.0 * std::numbers::pi / m.periods[0];
    return 2.0 * std::pow(k, -2.0 * w) * boost::math::zeta(2.0 * w);
  }
  // |xi| <= Lam with xi_i = 2 pi k_i / L_i
  double kmin = 1e300;
  for (double l : m.periods) kmin = std::min(kmin, 2.0 * std::numbers::pi / l);
  const double Lam = radius > 0.0 ? radius : kmin * (n == 2 ? 1500.0 : 150.0);
  std::vector<int> kmax(n);
  for (std::size_t i = 0; i < n; ++i) kmax[i] = static_cast<int>(Lam * m.periods[i] / (2.0 * std::numbers::pi));
  CompensatedSum s;
  std::vector<int> k(n);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    if (i == n) {
      if (acc > 0.0 && acc <= Lam * Lam) s += std::pow(acc, -w);
      return;
    }
    const double c = 2.0 * std::numbers::pi / m.periods[i];
    for (int ki = -kmax[i]; ki <= kmax[i]; ++ki) {
      const double v = acc + c * c * ki * ki;
      if (v > Lam * Lam) continue;
      rec(i + 1, v);
    }
  };
  rec(0, 0.0);
  const double nd = static_cast<double>(n);
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * nd) / std::tgamma(0.5 * nd);
  const double tail = m.volume() / std::pow(2.0 * std::numbers::pi, nd) * sphere * std::pow(Lam, nd - 2.0 * w) / (2.0 * w - nd);
  return s.value() + tail;
}

/// zeta(Delta^beta, s) = Z(s - beta).
inline double zeta(const SpectralModel& m, double beta, double s, const quad::Tolerance& tol = {}) {
  return spectral_zeta(m, s - beta, tol);
}

/// lim_{w -> w0} (w - w0) Z(w), by Neville extrapolation to h = 0 of
/// h Z(w0 + h), h = h0 2^{-i}. Right of n/2 the unsplit Mellin integral is
/// used, so the residue at the leading pole does not rely on a_0.
inline double zeta_residue(const SpectralModel& m, double w0, const quad::Tolerance& tol = {}) {
  const double n = static_cast<double>(m.dim());
  constexpr int levels = 7;
  std::vector<double> h(levels), p(levels);
  // keep the samples well inside the disc free of other poles
  const double dist = std::abs(w0 - 0.5 * n);
  const double h0 = dist < kPoleRadius ? 0.2 : std::min(0.2, 0.25 * dist);
  for (int i = 0; i < levels; ++i) {
    h[i] = h0 * std::pow(0.5, i);
    const double w = w0 + h[i];
    p[i] = h[i] * (w > 0.5 * n ? zeta_mellin_direct(m, w, tol) : spectral_zeta(m, w, tol));
  }
  for (int k = 1; k < levels; ++k)
    for (int i = levels - 1; i >= k; --i) p[i] = (h[i - k] * p[i] - h[i] * p[i - 1]) / (h[i - k] - h[i]);
  return p[levels - 1];
}

struct ResidueRoutes {
  double heat = 0.0;     // 2 a_j / Gamma((n-j)/2)
  double zeta = 0.0;     // 2 Res_{w=-alpha} Z(w)
  double density = 0.0;  // (2 pi)^{-n} vol(S^{n-1}) vol(M), only for alpha = -n/2
};

/// Residue of Delta^alpha on the model by the heat route, the zeta-pole route
/// and (for alpha = -n/2) the symbol density route.
inline ResidueRoutes residue_trace_power(const SpectralModel& m, double alpha, const quad::Tolerance& tol = {}) {
  const std::size_t n = m.dim();
  const double nd = static_cast<double>(n);
  ResidueRoutes r;
  const double j = nd + 2.0 * alpha;
  const double jr = std::round(j);
  if (alpha < 0.0 && std::abs(j - jr) < 1e-12 && jr >= 0.0) {
    const auto a = heat_coefficients(m, std::min(6, static_cast<int>(jr)));
    r.heat = 2.0 * a.a[static_cast<std::size_t>(jr)] / std::tgamma(-alpha);
  }
  r.zeta = 2.0 * zeta_residue(m, -alpha, tol);
  if (std::abs(alpha + 0.5 * nd) < 1e-12) {
    // principal symbol |xi|^{-n}: residue density times the volume
    r.density = residue_integral(cutoff_power(n, -nd), ResidueNormalization::two_pi_power) * m.volume();
  }
  return r;
}

/// Value of the continuation of Tr(Delta^{-z}) at z = s. Rejected when the
/// order -2s is an integer >= -n.
inline double kv_trace(const SpectralModel& m, double s, const quad::Tolerance& tol = {}) {
  const double order = -2.0 * s;
  const double nd = static_cast<double>(m.dim());
  if (std::abs(order - std::round(order)) < 1e-12 && std::round(order) >= -nd)
    throw ValidationError("kv_trace: integral order " + std::to_string(static_cast<long>(std::round(order))) +
                          " >= -n is excluded");
  return spectral_zeta(m, s, tol);
}

// ---------------------------------------------------------------------------
// Eigenvalue enumeration

/// #{eigenvalues <= lambda}, with multiplicity, kernel included.
inline long long eigenvalue_count(const SpectralModel& m, double lambda) {
  if (lambda < 0.0) return 0;
  const std::size_t n = m.dim();
  long long count = 0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
    const double c = 2.0 * std::numbers::pi / m.periods[i];
    const double left = lambda - acc;
    const long long kmax = static_cast<long long>(std::floor(std::sqrt(std::max(0.0, left)) / c));
    if (i + 1 == n) {
      long long kk = kmax;
      while (kk >= 0 && acc + c * c * double(kk) * double(kk) > lambda) --kk;
      while (acc + c * c * double(kk + 1) * double(kk + 1) <= lambda) ++kk;
      count += 2 * kk + 1;
      return;
    }
    for (long long k = -kmax - 1; k <= kmax + 1; ++k) {
      const double v = acc + c * c * double(k) * double(k);
      if (v <= lambda) rec(i + 1, v);
    }
  };
  rec(0, 0.0);
  return count;
}

/// The first `count` nonzero eigenvalues, with multiplicity, nondecreasing.
inline std::vector<double> nonzero_eigenvalues(const SpectralModel& m, std::size_t count) {
  const std::size_t n = m.dim();
  std::vector<double> out;
  if (n == 1) {
    const double c = 2.0 * std::numbers::pi / m.periods[0];
    out.reserve(count);
    for (long long k = 1; out.size() < count; ++k) {
      out.push_back(c * c * double(k) * double(k));
      if (out.size() < count) out.push_back(c * c * double(k) * double(k));
    }
    return out;
  }
  const double nd = static_cast<double>(n);
  double lambda = std::pow((count + 1.0) / weyl_constant(m), 2.0 / nd) * 1.02 + 100.0;
  for (;;) {
    out.clear();
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
      if (i == n) {
        if (acc > 0.0) out.push_back(acc);
        return;
      }
      const double c = 2.0 * std::numbers::pi / m.periods[i];
      const long long kmax = static_cast<long long>(std::floor(std::sqrt(std::max(0.0, lambda - acc)) / c)) + 1;
      for (long long k = -kmax; k <= kmax; ++k) {
        const double v = acc + c * c * double(k) * double(k);
        if (v <= lambda) rec(i + 1, v);
      }
    };
    rec(0, 0.0);
    if (out.size() >= count) break;
    lambda *= 1.1;
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

}  // namespace regtrace
