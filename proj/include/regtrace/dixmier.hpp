#pragma once

// Logarithmic averages alpha_N = (1/log(N+1)) sum_{j<=N} mu_j of singular
// value sequences, a convergence-aware surrogate for the Dixmier trace,
// counting functions and the Tauberian chain, and the Ky Fan / Hersch
// inequalities for finite matrices.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/zeta.hpp>

#include "regtrace/errors.hpp"
#include "regtrace/spectral.hpp"
#include "regtrace/summation.hpp"

namespace regtrace {

inline constexpr std::size_t kMaxSequenceLength = 10'000'000;

/// A positive nonincreasing sequence mu_1 >= mu_2 >= ..., enumerable on demand.
struct EigenSequence {
  enum class Kind { harmonic, power, model, plateau, explicit_values };
  Kind kind = Kind::explicit_values;
  std::string name;
  double exponent = 1.0;                // power: mu_j = j^{-exponent}
  std::optional<SpectralModel> model;   // model: mu = lambda^{-n/2} off the kernel
  std::vector<double> plateau_starts;   // plateau: see plateau()
  std::vector<double> values;           // explicit_values

  /// The first N terms.
  std::vector<double> first(std::size_t N) const {
    if (N > kMaxSequenceLength) throw ValidationError("EigenSequence: at most 1e7 terms can be enumerated");
    std::vector<double> mu(N);
    switch (kind) {
      case Kind::harmonic:
        for (std::size_t j = 0; j < N; ++j) mu[j] = 1.0 / static_cast<double>(j + 1);
        break;
      case Kind::power:
        for (std::size_t j = 0; j < N; ++j) mu[j] = std::pow(static_cast<double>(j + 1), -exponent);
        break;
      case Kind::model: {
        const auto ev = nonzero_eigenvalues(*model, N);
        const double half = 0.5 * static_cast<double>(model->dim());
        for (std::size_t j = 0; j < N; ++j) mu[j] = std::pow(ev[j], -half);
        break;
      }
      case Kind::plateau: {
        // 1/j, except that at each start a the value 1/a is held for
        // a log a further indices; afterwards 1/j resumes.
        std::size_t j = 0;
        double idx = 1.0;
        std::size_t next = 0;
        while (j < N) {
          if (next < plateau_starts.size() && idx >= plateau_starts[next]) {
            const double a = plateau_starts[next++];
            const auto len = static_cast<std::size_t>(a * std::log(a));
            for (std::size_t i = 0; i < len && j < N; ++i) mu[j++] = 1.0 / a;
            idx += static_cast<double>(len);
            continue;
          }
          mu[j++] = 1.0 / idx;
          idx += 1.0;
        }
        break;
      }
      case Kind::explicit_values:
        if (N > values.size()) throw ValidationError("EigenSequence: not enough explicit values");
        std::copy(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(N), mu.begin());
        break;
    }
    return mu;
  }

  static EigenSequence tagged(Kind k, std::string n) {
    EigenSequence s;
    s.kind = k;
    s.name = std::move(n);
    return s;
  }
  static EigenSequence harmonic() { return tagged(Kind::harmonic, "harmonic"); }
  static EigenSequence power(double p) {
    EigenSequence s = tagged(Kind::power, "power");
    s.exponent = p;
    return s;
  }
  static EigenSequence of_model(const SpectralModel& m) {
    EigenSequence s = tagged(Kind::model, "model:" + m.name());
    s.model = m;
    return s;
  }
  /// 1/j with long plateaus; alpha_N does not settle on any finite window.
  static EigenSequence plateau(std::vector<double> starts = {16.0, 512.0, 131072.0}) {
    EigenSequence s = tagged(Kind::plateau, "plateau");
    s.plateau_starts = std::move(starts);
    return s;
  }
  static EigenSequence explicit_sequence(std::vector<double> v) {
    EigenSequence s = tagged(Kind::explicit_values, "explicit");
    s.values = std::move(v);
    return s;
  }
};

inline void check_monotone(const std::vector<double>& mu) {
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!(mu[j] > 0.0)) throw ValidationError("sequence must be positive");
    if (j > 0 && mu[j] > mu[j - 1]) throw ValidationError("sequence must be nonincreasing");
  }
}

struct DixmierDiagnostics {
  std::vector<std::size_t> n;       // dyadic sample points
  std::vector<double> alpha;        // alpha at the sample points
  std::vector<double> cesaro;       // running means of alpha over the dyadic scale
  std::vector<double> partial_sum;  // sum_{j<=N} mu_j at the sample points
};

/// alpha_N at N = 2^10, 2^11, ... up to N (and N itself if not dyadic).
inline DixmierDiagnostics alpha_sums(const EigenSequence& seq, std::size_t N) {
  if (N < 1024) throw ValidationError("alpha_sums: N must be at least 2^10");
  const auto mu = seq.first(N);
  check_monotone(mu);
  DixmierDiagnostics d;
  CompensatedSum s;
  std::size_t next = 1024;
  for (std::size_t j = 0; j < N; ++j) {
    s += mu[j];
    const std::size_t count = j + 1;
    if (count == next || count == N) {
      d.n.push_back(count);
      d.partial_sum.push_back(s.value());
      d.alpha.push_back(s.value() / std::log(static_cast<double>(count) + 1.0));
      if (count == next) next *= 2;
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d.alpha.size(); ++i) {
    acc += d.alpha[i];
    d.cesaro.push_back(acc / static_cast<double>(i + 1));
  }
  return d;
}

/// Reference value of alpha_N by plain left-to-right summation.
inline double alpha_naive(const EigenSequence& seq, std::size_t N) {
  const auto mu = seq.first(N);
  double s = 0.0;
  for (double x : mu) s += x;
  return s / std::log(static_cast<double>(N) + 1.0);
}

struct DixmierEstimate {
  double value = 0.0;       // extrapolated limit
  double raw = 0.0;         // alpha at the largest N
  bool converged = false;
  double dispersion = 0.0;  // spread of the limit estimates over the final window
  std::vector<double> window_estimates;
};

/// Fits alpha_N = L + c/log N + d/log^2 N through consecutive triples of
/// dyadic points; the last triple gives the value, the spread of the last
/// four estimates decides convergence (threshold 1e-3).
inline DixmierEstimate dixmier_estimate(const DixmierDiagnostics& d) {
  DixmierEstimate e;
  if (d.alpha.empty()) return e;
  e.raw = d.alpha.back();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.n.size(); ++i)
    if ((d.n[i] & (d.n[i] - 1)) == 0) idx.push_back(i);
  if (idx.size() < 3) {
    e.value = e.raw;
    return e;
  }
  for (std::size_t k = 2; k < idx.size(); ++k) {
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    for (int r = 0; r < 3; ++r) {
      const std::size_t i = idx[k - 2 + r];
      const double x = 1.0 / std::log(static_cast<double>(d.n[i]));
      A(r, 0) = 1.0;
      A(r, 1) = x;
      A(r, 2) = x * x;
      b(r) = d.alpha[i];
    }
    e.window_estimates.push_back(A.fullPivLu().solve(b)(0));
  }
  e.value = e.window_estimates.back();
  const std::size_t w = std::min<std::size_t>(4, e.window_estimates.size());
  const auto first = e.window_estimates.end() - static_cast<std::ptrdiff_t>(w);
  const auto [lo, hi] = std::minmax_element(first, e.window_estimates.end());
  e.dispersion = *hi - *lo;
  e.converged = w >= 4 && e.dispersion < 1e-3;
  return e;
}

/// F(lambda) = #{j : 1/mu_j <= lambda}.
inline long long counting_function(const EigenSequence& seq, double lambda) {
  if (!(lambda >= 1.0)) throw ValidationError("counting_function: lambda must be >= 1");
  switch (seq.kind) {
    case EigenSequence::Kind::harmonic:
      return static_cast<long long>(std::floor(lambda));
    case EigenSequence::Kind::power:
      return static_cast<long long>(std::floor(std::pow(lambda, 1.0 / seq.exponent) * (1.0 + 1e-15)));
    case EigenSequence::Kind::model: {
      const double n = static_cast<double>(seq.model->dim());
      return eigenvalue_count(*seq.model, std::pow(lambda, 2.0 / n)) - 1;
    }
    default: {
      const bool finite = seq.kind == EigenSequence::Kind::explicit_values;
      std::size_t N = finite ? seq.values.size() : 1024;
      for (;;) {
        const auto mu = seq.first(N);
        const auto it = std::find_if(mu.begin(), mu.end(), [&](double m) { return 1.0 / m > lambda; });
        if (it != mu.end() || finite) return it - mu.begin();
        if (N >= kMaxSequenceLength) throw NumericalError("counting_function: sequence too long to count");
        N = std::min(kMaxSequenceLength, 4 * N);
      }
    }
  }
}

/// zeta_F(s) = sum_j mu_j^s for s > 1.
inline double zeta_of_counting(const EigenSequence& seq, double s) {
  if (!(s > 1.0)) throw ValidationError("zeta_of_counting: direct summation needs s > 1");
  switch (seq.kind) {
    case EigenSequence::Kind::harmonic:
      return boost::math::zeta(s);
    case EigenSequence::Kind::power:
      if (!(seq.exponent * s > 1.0)) throw ValidationError("zeta_of_counting: divergent series");
      return boost::math::zeta(seq.exponent * s);
    case EigenSequence::Kind::model:
      return zeta_mellin_direct(*seq.model, 0.5 * static_cast<double>(seq.model->dim()) * s);
    default: {
      // direct sum with the tail modeled by L/j, L = N mu_N
      const std::size_t N = seq.kind == EigenSequence::Kind::explicit_values ? seq.values.size() : 1'000'000;
      const auto mu = seq.first(N);
      CompensatedSum acc;
      for (double m : mu) acc += std::pow(m, s);
      const double L = static_cast<double>(N) * mu.back();
      return acc.value() + std::pow(L, s) * std::pow(static_cast<double>(N) + 0.5, 1.0 - s) / (s - 1.0);
    }
  }
}

struct IkeharaResult {
  double L_from_zeta = 0.0;
  double L_from_counting = 0.0;
  double lambda_max = 0.0;
  std::vector<std::pair<double, double>> counting_samples;  // (lambda, F/lambda)
  std::vector<std::pair<std::size_t, double>> j_mu_samples;  // (j, j mu_j)
};

/// Both sides of the Tauberian chain: lim (s-1) zeta_F(s) by extrapolation in
/// h = s - 1, and F(lambda)/lambda at lambda_max.
inline IkeharaResult ikehara_check(const EigenSequence& seq, double lambda_max = 1e6) {
  IkeharaResult r;
  r.lambda_max = lambda_max;
  constexpr int levels = 6;
  std::vector<double> h(levels), p(levels);
  for (int i = 0; i < levels; ++i) {
    h[i] = 0.2 * std::pow(0.5, i);
    p[i] = h[i] * zeta_of_counting(seq, 1.0 + h[i]);
  }
  for (int k = 1; k < levels; ++k)
    for (int i = levels - 1; i >= k; --i) p[i] = (h[i - k] * p[i] - h[i] * p[i - 1]) / (h[i - k] - h[i]);
  r.L_from_zeta = p[levels - 1];
  for (double lam = 1e2; lam <= lambda_max * (1 + 1e-12); lam *= 10.0)
    r.counting_samples.push_back({lam, static_cast<double>(counting_function(seq, lam)) / lam});
  r.L_from_counting = r.counting_samples.back().second;
  const auto F = static_cast<std::size_t>(std::min<long long>(counting_function(seq, lambda_max), 1'000'000));
  if (F >= 8) {
    const auto mu = seq.first(F);
    for (std::size_t j = F / 8; j <= F; j *= 2) r.j_mu_samples.push_back({j, static_cast<double>(j) * mu[j - 1]});
  }
  return r;
}

struct ConnesResult {
  double dixmier = 0.0;         // extrapolated
  double dixmier_raw = 0.0;     // alpha at N
  bool converged = false;
  double residue = 0.0;         // Res(Delta^{-n/2})
  double residue_over_n = 0.0;
  std::size_t N = 0;
};

inline ConnesResult connes_check(const SpectralModel& m, std::size_t N = std::size_t{1} << 23) {
  ConnesResult c;
  c.N = N;
  const auto diag = alpha_sums(EigenSequence::of_model(m), N);
  const auto est = dixmier_estimate(diag);
  c.dixmier = est.value;
  c.dixmier_raw = est.raw;
  c.converged = est.converged;
  const double n = static_cast<double>(m.dim());
  c.residue = residue_trace_power(m, -0.5 * n).heat;
  c.residue_over_n = c.residue / n;
  return c;
}

struct HerschResult {
  bool holds = true;
  bool left_equality = true;   // equality in the left inequality for every N
  bool right_equality = true;  // equality in the right inequality for every N
  double worst_violation = 0.0;
};

/// sum_{j<=N} mu_j(T1+T2) <= sum_{j<=N} (mu_j(T1) + mu_j(T2)) <= sum_{j<=2N} mu_j(T1+T2)
/// for every N, eigenvalues from a direct symmetric solver.
inline HerschResult hersch_check(const Eigen::MatrixXd& T1, const Eigen::MatrixXd& T2) {
  if (T1.rows() != T1.cols() || T2.rows() != T2.cols() || T1.rows() != T2.rows())
    throw ValidationError("hersch_check: matrices must be square of equal size");
  if (T1.rows() < 1 || T1.rows() > 16) throw ValidationError("hersch_check: dimension must be 1..16");
  auto spectrum = [](const Eigen::MatrixXd& T) {
    if ((T - T.transpose()).norm() > 1e-12 * std::max(1.0, T.norm()))
      throw ValidationError("hersch_check: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    if (ev.front() < -1e-12 * std::max(1.0, std::abs(ev.back())))
      throw ValidationError("hersch_check: matrix is not positive semidefinite");
    for (double& x : ev) x = std::max(0.0, x);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
  };
  const auto a = spectrum(T1), b = spectrum(T2), s = spectrum(T1 + T2);
  const std::size_t d = a.size();
  const double scale = std::max(1.0, s.front());
  const double tol = 1e-12 * scale * static_cast<double>(d);
  HerschResult r;
  for (std::size_t N = 1; N <= d; ++N) {
    double left = 0.0, mid = 0.0, right = 0.0;
    for (std::size_t j = 0; j < N; ++j) left += s[j], mid += a[j] + b[j];
    for (std::size_t j = 0; j < std::min(2 * N, d); ++j) right += s[j];
    r.worst_violation = std::max({r.worst_violation, left - mid, mid - right});
    if (left > mid + tol || mid > right + tol) r.holds = false;
    if (std::abs(left - mid) > tol) r.left_equality = false;
    if (std::abs(mid - right) > tol) r.right_equality = false;
  }
  return r;
}

}  // namespace regtrace
