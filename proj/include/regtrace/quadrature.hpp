#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "regtrace/errors.hpp"

namespace regtrace::quad {

struct Tolerance {
  double absolute = 1e-11;
  double relative = 1e-13;
  unsigned max_depth = 25;
};

/// Globally adaptive Gauss-Kronrod (61 point) on [a, b]; b may be +infinity.
/// The interval with the largest error estimate is bisected until the total
/// estimate is below max(absolute, relative * |I|). Throws NumericalError if
/// that does not happen within the subdivision budget.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const Tolerance& tol = {}) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  // an integrable endpoint singularity may be sampled exactly at the endpoint;
  // a single point carries no mass
  std::function<double(double)> g = [&f, a, b](double x) {
    const double v = f(x);
    return (!std::isfinite(v) && (x == a || x == b)) ? 0.0 : v;
  };
  double lo = a, hi = b;
  if (std::isinf(b)) {
    // x = a + c t / (1 - t), with c matched to the scale of a
    const double c = std::max(1.0, std::abs(a));
    g = [&f, a, c](double t) {
      const double s = 1.0 - t;
      const double x = a + c * t / s;
      if (!std::isfinite(x)) return 0.0;
      const double v = f(x);
      return v == 0.0 ? 0.0 : c * v / (s * s);
    };
    lo = 0.0;
    hi = 1.0;
  }
  struct Piece {
    double a, b, value, err;
  };
  auto eval = [&g](double x0, double x1) {
    double err = 0.0;
    const double v = GK::integrate(g, x0, x1, 0, 0.0, &err);
    // Boost reports the non-recursive error on the reference interval [-1, 1]
    return Piece{x0, x1, v, err * 0.5 * (x1 - x0)};
  };
  std::vector<Piece> pieces{eval(lo, hi)};
  const std::size_t budget = std::size_t{1} << std::min(tol.max_depth, 12u);
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const auto& p : pieces) total += p.value, err += p.err;
    if (!std::isfinite(total)) throw NumericalError("quadrature produced a non-finite value");
    // below ~50 ulp of the total the estimate is itself rounding noise
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
    if (err <= tol.absolute || err <= std::max(tol.relative, 0.0) * std::abs(total) || err <= floor) return total;
    if (pieces.size() >= budget) {
      std::ostringstream os;
      os << "quadrature failed to converge on [" << a << ", " << b << "] (error estimate " << err << ", value "
         << total << ")";
      throw NumericalError(os.str());
    }
    auto worst = std::max_element(pieces.begin(), pieces.end(),
                                  [](const Piece& x, const Piece& y) { return x.err < y.err; });
    const Piece w = *worst;
    const double mid = 0.5 * (w.a + w.b);
    *worst = eval(w.a, mid);
    pieces.push_back(eval(mid, w.b));
  }
}

/// Integral over [a, b] split at interior breakpoints (kinks or jumps of f).
inline double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                                  std::vector<double> breaks, const Tolerance& tol = {}) {
  std::erase_if(breaks, [&](double x) { return !(x > a && x < b); });
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0, lo = a;
  for (double x : breaks) {
    sum += integrate(f, lo, x, tol);
    lo = x;
  }
  return sum + integrate(f, lo, b, tol);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0, p1 = x;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

/// Quadrature on the unit sphere S^{p-1}, p in {1,2,3}.
///   p = 1: the two points {-1, +1} with unit weights (counting measure);
///   p = 2: trapezoid rule with `order` equispaced angles (spectral for smooth data);
///   p = 3: Gauss-Legendre in cos(theta) times trapezoid in phi.
struct SphereRule {
  std::size_t dim = 1;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  SphereRule(std::size_t p, int order) : dim(p) {
    if (p == 1) {
      points = {{-1.0, 0, 0}, {1.0, 0, 0}};
      weights = {1.0, 1.0};
    } else if (p == 2) {
      for (int i = 0; i < order; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.5) / order;
        points.push_back({std::cos(th), std::sin(th), 0});
        weights.push_back(2.0 * std::numbers::pi / order);
      }
    } else if (p == 3) {
      const int nt = std::max(4, order / 2);
      GaussLegendre gl(nt);
      for (int i = 0; i < nt; ++i) {
        const double z = gl.nodes[i], s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < order; ++j) {
          const double ph = 2.0 * std::numbers::pi * (j + 0.5) / order;
          points.push_back({s * std::cos(ph), s * std::sin(ph), z});
          weights.push_back(gl.weights[i] * 2.0 * std::numbers::pi / order);
        }
      }
    } else {
      throw ValidationError("sphere quadrature supports dimensions 1..3");
    }
  }

  std::span<const double> point(std::size_t i) const { return {points[i].data(), dim}; }

  double integrate(const std::function<double(std::span<const double>)>& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * g(point(i));
    return sum;
  }
};

/// Default sphere rule used for non-polynomial angular data.
inline const SphereRule& default_sphere_rule(std::size_t p) {
  static const SphereRule r1(1, 2), r2(2, 128), r3(3, 64);
  if (p == 1) return r1;
  if (p == 2) return r2;
  if (p == 3) return r3;
  throw ValidationError("sphere quadrature supports dimensions 1..3");
}

}  // namespace regtrace::quad
