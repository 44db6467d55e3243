#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace regtrace {

/// Multi-index exponent of a monomial x_1^{e_1} ... x_p^{e_p}.
using MultiIndex = std::vector<int>;

/// Sparse multivariate polynomial with real coefficients in a fixed number of
/// variables. Used for angular parts of homogeneous terms and for the
/// coefficients of ambient differential forms.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, double c) {
    Polynomial p(nvars);
    p.add_term(MultiIndex(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t j, double c = 1.0) {
    MultiIndex e(nvars, 0);
    e.at(j) = 1;
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
  }

  static Polynomial monomial(const MultiIndex& e, double c = 1.0) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const MultiIndex& e, double c) {
    if (e.size() != nvars_) throw std::invalid_argument("Polynomial: exponent arity mismatch");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != nvars_) throw std::invalid_argument("Polynomial: point dimension mismatch");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double v = c;
      for (std::size_t k = 0; k < nvars_; ++k)
        for (int i = 0; i < e[k]; ++i) v *= x[k];
      sum += v;
    }
    return sum;
  }

  Polynomial derivative(std::size_t j) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e.at(j) == 0) continue;
      MultiIndex f = e;
      f[j] -= 1;
      out.add_term(f, c * e[j]);
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        MultiIndex e(a.nvars_);
        for (std::size_t k = 0; k < a.nvars_; ++k) e[k] = ea[k] + eb[k];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Integral of the polynomial over the unit sphere S^{p-1} in R^p using the
  /// moment formula int omega^alpha = 2 prod Gamma((a_i+1)/2) / Gamma((|a|+p)/2)
  /// (zero if any a_i is odd). For p = 1 this is the two-point counting measure.
  double sphere_integral() const {
    const double p = static_cast<double>(nvars_);
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      bool odd = false;
      double lg = 0.0;
      int total = 0;
      for (int k : e) {
        if (k % 2 != 0) odd = true;
        lg += std::lgamma(0.5 * (k + 1));
        total += k;
      }
      if (odd) continue;
      lg -= std::lgamma(0.5 * (total + p));
      sum += c * 2.0 * std::exp(lg);
    }
    return sum;
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("Polynomial: arity mismatch");
  }

  std::size_t nvars_ = 0;
  std::map<MultiIndex, double> terms_;
};

}  // namespace regtrace
