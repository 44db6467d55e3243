#pragma once

// int_1^lambda r^alpha log^k r dr in closed form.
//
//   alpha != -1:  sum_{j=0}^k (-1)^j k!/((k-j)! (alpha+1)^{j+1}) lambda^{alpha+1} log^{k-j} lambda
//                 + (-1)^{k+1} k!/(alpha+1)^{k+1}
//   alpha == -1:  log^{k+1} lambda / (k+1)

#include <cmath>

#include "regtrace/errors.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Expansion of the primitive in the variable lambda; exact (no remainder).
inline AsymptoticExpansion log_power_primitive_expansion(double alpha, int k, std::string variable = "lambda") {
  if (k < 0) throw ValidationError("log_power_primitive: k must be nonnegative");
  AsymptoticExpansion e(std::move(variable));
  if (same_order(alpha, -1.0)) {
    e.add(0.0, k + 1, 1.0 / (k + 1));
    return e;
  }
  const double a1 = alpha + 1.0;
  const double kf = detail::factorial(k);
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    e.add(a1, k - j, sign * kf / (detail::factorial(k - j) * std::pow(a1, j + 1)));
  }
  e.add(0.0, 0, ((k + 1) % 2 == 0 ? 1.0 : -1.0) * kf / std::pow(a1, k + 1));
  return e;
}

/// Value of int_1^lambda r^alpha log^k r dr.
inline double log_power_primitive(double alpha, int k, double lambda) {
  if (!(lambda >= 1.0)) throw ValidationError("log_power_primitive: lambda must be >= 1");
  if (lambda == 1.0) return 0.0;
  return log_power_primitive_expansion(alpha, k).evaluate(lambda);
}

/// Constant term of the primitive, i.e. the value at lambda = infinity when alpha < -1.
inline double log_power_primitive_constant(double alpha, int k) {
  return log_power_primitive_expansion(alpha, k).coefficient(0.0, 0);
}

}  // namespace regtrace
