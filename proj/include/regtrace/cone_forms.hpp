#pragma once

// Forms on the cone [0, inf) x S^{n-1} with radial profile coefficients,
// integration along the fiber, the Thom section and the homotopy operator K.
// Also res on forms over R^p with symbol coefficients.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "regtrace/errors.hpp"
#include "regtrace/log_integral.hpp"
#include "regtrace/polynomial.hpp"
#include "regtrace/reg_int.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace::cone {

// ---------------------------------------------------------------------------
// Radial profiles

/// c r^e log^l r on r >= 1.
struct TailTerm {
  double exponent;
  int logpow;
  double coefficient;
  friend bool operator==(const TailTerm&, const TailTerm&) = default;
};

/// f(r) = core polynomial on [0, 1), finite log-polyhomogeneous tail on
/// [1, inf), and a point mass at r = 1 (only ever produced by differentiating
/// a profile that jumps there).
class Profile {
 public:
  Profile() = default;

  static Profile core(std::vector<double> coeffs) {
    Profile p;
    p.core_ = std::move(coeffs);
    p.normalize();
    return p;
  }
  /// chi(r >= 1) c r^e log^l r
  static Profile tail_power(double e, double c = 1.0, int l = 0) {
    Profile p;
    p.tail_.push_back({e, l, c});
    p.normalize();
    return p;
  }

  const std::vector<double>& core_coefficients() const { return core_; }
  const std::vector<TailTerm>& tail() const { return tail_; }
  double atom() const { return atom_; }
  bool is_zero() const { return core_.empty() && tail_.empty() && atom_ == 0.0; }
  /// Vanishes at the origin (the A_0 condition at the level of the corpus).
  bool vanishes_at_origin() const { return core_.empty() || core_[0] == 0.0; }

  double core_value(double r) const {
    double v = 0.0;
    for (std::size_t i = core_.size(); i-- > 0;) v = v * r + core_[i];
    return v;
  }
  double tail_value(double r) const {
    double v = 0.0;
    const double L = std::log(r);
    for (const auto& t : tail_) v += t.coefficient * std::pow(r, t.exponent) * std::pow(L, t.logpow);
    return v;
  }
  /// Right-continuous pointwise value; the atom is not a function value.
  double operator()(double r) const { return r < 1.0 ? core_value(r) : tail_value(r); }

  Profile derivative() const {
    if (atom_ != 0.0) throw ValidationError("Profile::derivative: derivative of a point mass is not a profile");
    Profile d;
    for (std::size_t i = 1; i < core_.size(); ++i) {
      d.core_.resize(core_.size() - 1);
      d.core_[i - 1] = static_cast<double>(i) * core_[i];
    }
    for (const auto& t : tail_) {
      if (t.exponent != 0.0) d.tail_.push_back({t.exponent - 1.0, t.logpow, t.coefficient * t.exponent});
      if (t.logpow > 0) d.tail_.push_back({t.exponent - 1.0, t.logpow - 1, t.coefficient * t.logpow});
    }
    d.atom_ = tail_value(1.0) - core_value(1.0);
    d.normalize();
    return d;
  }

  /// F(r) = int_0^r f. The point mass turns into a jump of F.
  Profile antiderivative() const {
    Profile F;
    F.core_.assign(core_.size() + 1, 0.0);
    double at_one = 0.0;
    for (std::size_t i = 0; i < core_.size(); ++i) {
      F.core_[i + 1] = core_[i] / static_cast<double>(i + 1);
      at_one += F.core_[i + 1];
    }
    double constant = at_one + atom_;
    for (const auto& t : tail_) {
      const double e1 = t.exponent + 1.0;
      if (e1 == 0.0) {
        F.tail_.push_back({0.0, t.logpow + 1, t.coefficient / (t.logpow + 1)});
        continue;
      }
      // int_1^r s^e log^l s ds = sum_i (-1)^{l-i} l!/i! r^{e+1} log^i r / (e+1)^{l-i+1} - (-1)^l l!/(e+1)^{l+1}
      for (int i = 0; i <= t.logpow; ++i) {
        const double w = ((t.logpow - i) % 2 ? -1.0 : 1.0) * detail::factorial(t.logpow) / detail::factorial(i) /
                         std::pow(e1, t.logpow - i + 1);
        F.tail_.push_back({e1, i, t.coefficient * w});
      }
      constant -= t.coefficient * (t.logpow % 2 ? -1.0 : 1.0) * detail::factorial(t.logpow) / std::pow(e1, t.logpow + 1);
    }
    F.tail_.push_back({0.0, 0, constant});
    F.normalize();
    return F;
  }

  Profile& operator+=(const Profile& o) {
    if (core_.size() < o.core_.size()) core_.resize(o.core_.size(), 0.0);
    for (std::size_t i = 0; i < o.core_.size(); ++i) core_[i] += o.core_[i];
    tail_.insert(tail_.end(), o.tail_.begin(), o.tail_.end());
    atom_ += o.atom_;
    normalize();
    return *this;
  }
  Profile& operator*=(double s) {
    for (auto& c : core_) c *= s;
    for (auto& t : tail_) t.coefficient *= s;
    atom_ *= s;
    normalize();
    return *this;
  }
  friend Profile operator+(Profile a, const Profile& b) { return a += b; }
  friend Profile operator-(Profile a, const Profile& b) { return a += b * -1.0; }
  friend Profile operator*(Profile a, double s) { return a *= s; }
  friend Profile operator*(double s, Profile a) { return a *= s; }
  friend bool operator==(const Profile&, const Profile&) = default;

  /// The ordinary integral of the compact part: int_0^1 core + atom.
  double compact_integral() const {
    double v = atom_;
    for (std::size_t i = 0; i < core_.size(); ++i) v += core_[i] / static_cast<double>(i + 1);
    return v;
  }

  /// Hadamard partie finie of int_0^inf.
  double partie_finie() const {
    double v = compact_integral();
    for (const auto& t : tail_) {
      const double e1 = t.exponent + 1.0;
      if (e1 == 0.0) continue;
      v += t.coefficient * (t.logpow % 2 ? 1.0 : -1.0) * detail::factorial(t.logpow) / std::pow(e1, t.logpow + 1);
    }
    return v;
  }

  /// Coefficient of r^{-1} (no log) in the tail.
  double residue() const {
    double v = 0.0;
    for (const auto& t : tail_)
      if (t.exponent == -1.0 && t.logpow == 0) v += t.coefficient;
    return v;
  }

  nlohmann::json to_json() const {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& x : tail_) t.push_back({{"exponent", x.exponent}, {"logpow", x.logpow}, {"coefficient", x.coefficient}});
    return {{"core", core_}, {"tail", t}, {"atom", atom_}};
  }

 private:
  void normalize() {
    std::sort(tail_.begin(), tail_.end(), [](const TailTerm& a, const TailTerm& b) {
      return a.exponent != b.exponent ? a.exponent > b.exponent : a.logpow > b.logpow;
    });
    std::vector<TailTerm> merged;
    for (const auto& t : tail_) {
      if (!merged.empty() && merged.back().exponent == t.exponent && merged.back().logpow == t.logpow)
        merged.back().coefficient += t.coefficient;
      else
        merged.push_back(t);
    }
    std::erase_if(merged, [](const TailTerm& t) { return t.coefficient == 0.0; });
    tail_ = std::move(merged);
    while (!core_.empty() && core_.back() == 0.0) core_.pop_back();
  }

  std::vector<double> core_;
  std::vector<TailTerm> tail_;
  double atom_ = 0.0;
};

// ---------------------------------------------------------------------------
// Profile spaces

enum class SpaceType { I, II };

/// CS^a([0, inf)) or the Schwartz space, with its closed functional.
class ProfileSpace {
 public:
  enum class Kind { classical, schwartz };

  static ProfileSpace classical(double a) {
    if (a < 0.0 && a == std::round(a))
      throw ValidationError("ProfileSpace: classical order " + std::to_string(static_cast<int>(a)) +
                            " is a negative integer; antiderivatives of zero-integral profiles leave the space");
    return ProfileSpace(Kind::classical, a);
  }
  static ProfileSpace schwartz() { return ProfileSpace(Kind::schwartz, 0.0); }

  Kind kind() const { return kind_; }
  double order() const { return a_; }

  /// II iff the constant function 1 belongs to the space.
  SpaceType type() const {
    return kind_ == Kind::classical && a_ >= 0.0 && a_ == std::round(a_) ? SpaceType::II : SpaceType::I;
  }
  /// The lambda with oint f = lambda int f on compactly supported f.
  double compact_multiple() const { return type() == SpaceType::I ? 1.0 : 0.0; }

  /// Exponents a - j without logs, or compact support for Schwartz.
  bool contains(const Profile& f) const {
    if (f.atom() != 0.0) return false;
    if (kind_ == Kind::schwartz) return f.tail().empty();
    for (const auto& t : f.tail()) {
      const double j = a_ - t.exponent;
      if (t.logpow != 0 || j < -1e-12 || std::abs(j - std::round(j)) > 1e-12) return false;
    }
    return true;
  }

  /// The functional: partie finie, residue coefficient, or the integral.
  double integral(const Profile& f) const {
    if (kind_ == Kind::schwartz) {
      for (const auto& t : f.tail())
        if (t.exponent >= -1.0) throw ValidationError("ProfileSpace: divergent integral in the Schwartz space");
      return f.partie_finie();
    }
    return type() == SpaceType::I ? f.partie_finie() : f.residue();
  }

  std::string name() const {
    return kind_ == Kind::schwartz ? std::string("schwartz") : "classical-order(" + std::to_string(a_) + ")";
  }

 private:
  ProfileSpace(Kind k, double a) : kind_(k), a_(a) {}
  Kind kind_;
  double a_;
};

inline SpaceType check_type(const ProfileSpace& s) { return s.type(); }

// ---------------------------------------------------------------------------
// Polynomial forms on R^n, restricted to the sphere

/// sum_I P_I dx_I with I encoded as a bit mask, ascending index order.
class AmbientForm {
 public:
  AmbientForm(std::size_t n, int degree) : n_(n), degree_(degree) {}

  static AmbientForm function(const Polynomial& p) {
    AmbientForm f(p.nvars(), 0);
    f.add(0u, p);
    return f;
  }
  /// p dx_{i_1} ^ ... ^ dx_{i_k}, indices in any order (sign applied).
  static AmbientForm monomial(const Polynomial& p, std::vector<int> idx) {
    AmbientForm f(p.nvars(), static_cast<int>(idx.size()));
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        if (idx[i] == idx[j]) return f;
        if (idx[i] > idx[j]) sign = -sign;
      }
    unsigned mask = 0;
    for (int i : idx) mask |= 1u << i;
    f.add(mask, p * static_cast<double>(sign));
    return f;
  }

  std::size_t dim() const { return n_; }
  int degree() const { return degree_; }
  const std::vector<std::pair<unsigned, Polynomial>>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  void add(unsigned mask, const Polynomial& p) {
    if (std::popcount(mask) != degree_) throw ValidationError("AmbientForm: component of the wrong degree");
    for (auto& [m, q] : comps_)
      if (m == mask) {
        q += p;
        std::erase_if(comps_, [](const auto& c) { return c.second.is_zero(); });
        return;
      }
    if (!p.is_zero()) comps_.push_back({mask, p});
    std::sort(comps_.begin(), comps_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  AmbientForm& operator+=(const AmbientForm& o) {
    if (o.degree_ != degree_ || o.n_ != n_) throw ValidationError("AmbientForm: degree mismatch in sum");
    for (const auto& [m, p] : o.comps_) add(m, p);
    return *this;
  }
  friend AmbientForm operator+(AmbientForm a, const AmbientForm& b) { return a += b; }
  friend AmbientForm operator*(double s, AmbientForm a) {
    if (s == 0.0) return AmbientForm(a.n_, a.degree_);
    for (auto& c : a.comps_) c.second *= s;
    return a;
  }
  friend bool operator==(const AmbientForm& a, const AmbientForm& b) {
    return a.n_ == b.n_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
  }

  /// d(P dx_I) = sum_j d_j P dx_j ^ dx_I.
  AmbientForm d() const {
    AmbientForm out(n_, degree_ + 1);
    for (const auto& [mask, p] : comps_)
      for (std::size_t j = 0; j < n_; ++j) {
        if (mask & (1u << j)) continue;
        const Polynomial q = p.derivative(j);
        if (q.is_zero()) continue;
        // moving dx_j past the lower indices of I
        const int below = std::popcount(mask & ((1u << j) - 1u));
        out.add(mask | (1u << j), below % 2 ? q * -1.0 : q);
      }
    return out;
  }

  /// Value at x on vectors v_1..v_k (rows of V): sum_I P_I(x) det(V restricted to columns I).
  double evaluate(std::span<const double> x, const Eigen::MatrixXd& V) const {
    if (V.rows() != degree_) throw ValidationError("AmbientForm::evaluate: need one vector per degree");
    double s = 0.0;
    for (const auto& [mask, p] : comps_) {
      Eigen::MatrixXd M(degree_, degree_);
      int c = 0;
      for (std::size_t j = 0; j < n_; ++j)
        if (mask & (1u << j)) M.col(c++) = V.col(static_cast<Eigen::Index>(j));
      s += p(x) * (degree_ == 0 ? 1.0 : M.determinant());
    }
    return s;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [mask, p] : comps_)
      for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  std::size_t n_;
  int degree_;
  std::vector<std::pair<unsigned, Polynomial>> comps_;
};

// ---------------------------------------------------------------------------
// Forms on the cone

/// Values of a cone form at (r, p) on an orthonormal tangent frame of the
/// sphere: the tangential part on each k-subset of the frame and the dr part
/// on each (k-1)-subset, in lexicographic subset order.
struct ConeFormValue {
  std::vector<double> tangential;
  std::vector<double> radial;
};

class ConeForm {
 public:
  struct Tangential {
    Profile f;
    AmbientForm eta;
  };
  struct Radial {
    Profile f;
    AmbientForm eta;  // degree k - 1, the form is f eta ^ dr
  };

  /// On [0, inf) x S^{n-1}, n in {2, 3}.
  ConeForm(std::size_t n, int degree) : n_(n), degree_(degree) {
    if (n != 2 && n != 3) throw ValidationError("ConeForm: base must be S^1 or S^2");
    // degree n + 1 only occurs as the (zero) target of d
    if (degree < 0 || degree > static_cast<int>(n) + 1) throw ValidationError("ConeForm: degree out of range");
  }

  std::size_t ambient_dim() const { return n_; }
  int degree() const { return degree_; }
  const std::vector<Tangential>& tangential() const { return t1_; }
  const std::vector<Radial>& radial() const { return t2_; }
  bool is_zero() const { return t1_.empty() && t2_.empty(); }

  ConeForm& add_tangential(const Profile& f, const AmbientForm& eta) {
    if (eta.degree() != degree_ || eta.dim() != n_) throw ValidationError("ConeForm: tangential part has the wrong degree");
    t1_.push_back({f, eta});
    normalize();
    return *this;
  }
  ConeForm& add_radial(const Profile& f, const AmbientForm& eta) {
    if (eta.degree() != degree_ - 1 || eta.dim() != n_) throw ValidationError("ConeForm: radial part has the wrong degree");
    t2_.push_back({f, eta});
    normalize();
    return *this;
  }

  ConeForm& operator+=(const ConeForm& o) {
    if (o.degree_ != degree_ || o.n_ != n_) throw ValidationError("ConeForm: degree mismatch in sum");
    t1_.insert(t1_.end(), o.t1_.begin(), o.t1_.end());
    t2_.insert(t2_.end(), o.t2_.begin(), o.t2_.end());
    normalize();
    return *this;
  }
  friend ConeForm operator+(ConeForm a, const ConeForm& b) { return a += b; }
  friend ConeForm operator*(double s, ConeForm a) {
    for (auto& t : a.t1_) t.eta = s * t.eta;
    for (auto& t : a.t2_) t.eta = s * t.eta;
    a.normalize();
    return a;
  }
  friend ConeForm operator-(const ConeForm& a, const ConeForm& b) { return a + (-1.0) * b; }

  /// d(f eta) = (-1)^k f' eta ^ dr + f d eta,  d(f eta ^ dr) = f d eta ^ dr.
  ConeForm d() const {
    ConeForm out(n_, std::min(degree_ + 1, static_cast<int>(n_) + 1));
    if (degree_ + 1 > static_cast<int>(n_)) return out;
    const double sign = degree_ % 2 ? -1.0 : 1.0;
    for (const auto& t : t1_) {
      out.t1_.push_back({t.f, t.eta.d()});
      out.t2_.push_back({t.f.derivative(), sign * t.eta});
    }
    for (const auto& t : t2_) out.t2_.push_back({t.f, t.eta.d()});
    out.normalize();
    return out;
  }

  ConeFormValue evaluate(double r, std::span<const double> p, const Eigen::MatrixXd& frame) const {
    ConeFormValue v;
    const int m = static_cast<int>(frame.rows());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      const int k = std::popcount(mask);
      if (k != degree_ && k != degree_ - 1) continue;
      Eigen::MatrixXd V(k, frame.cols());
      int row = 0;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) V.row(row++) = frame.row(i);
      double s = 0.0;
      if (k == degree_) {
        for (const auto& t : t1_) s += t.f(r) * t.eta.evaluate(p, V);
        v.tangential.push_back(s);
      } else {
        for (const auto& t : t2_) s += t.f(r) * t.eta.evaluate(p, V);
        v.radial.push_back(s);
      }
    }
    return v;
  }

  /// Merges parts with equal profiles and drops zero ones, so that cancellation
  /// (d o d = 0 in particular) is exact.
  void normalize() {
    auto merge = [](auto& parts) {
      std::remove_reference_t<decltype(parts)> out;
      for (auto& t : parts) {
        bool done = false;
        for (auto& o : out)
          if (o.f == t.f) {
            o.eta += t.eta;
            done = true;
            break;
          }
        if (!done) out.push_back(t);
      }
      std::erase_if(out, [](const auto& t) { return t.f.is_zero() || t.eta.is_zero(); });
      parts = std::move(out);
    };
    merge(t1_);
    merge(t2_);
  }

  bool has_A0_coefficients() const {
    for (const auto& t : t1_)
      if (!t.f.vanishes_at_origin()) return false;
    for (const auto& t : t2_)
      if (!t.f.vanishes_at_origin()) return false;
    return true;
  }

 private:
  std::size_t n_;
  int degree_;
  std::vector<Tangential> t1_;
  std::vector<Radial> t2_;
};

// ---------------------------------------------------------------------------
// Integration along the fiber, Thom section, homotopy operator

/// pi_* omega = sum (oint f_2) eta_2, a (k-1)-form on the sphere.
inline AmbientForm fiber_integrate(const ConeForm& w, const ProfileSpace& space) {
  if (!w.has_A0_coefficients()) throw ValidationError("fiber_integrate: coefficients must vanish at r = 0");
  AmbientForm out(w.ambient_dim(), std::max(w.degree() - 1, 0));
  if (w.degree() == 0) return out;
  for (const auto& t : w.radial()) out += space.integral(t.f) * t.eta;
  return out;
}

/// eta -> phi(r) eta ^ dr, with oint phi = 1.
inline ConeForm thom_section(const AmbientForm& eta, const Profile& phi, const ProfileSpace& space) {
  if (std::abs(space.integral(phi) - 1.0) > 1e-12)
    throw ValidationError("thom_section: the profile must have regularized integral 1");
  ConeForm out(eta.dim(), eta.degree() + 1);
  out.add_radial(phi, eta);
  return out;
}

/// K omega = (-1)^{k-1} [int_0^r (f_2 - (oint f_2) phi)] eta_2.
inline ConeForm homotopy_K(const ConeForm& w, const Profile& phi, const ProfileSpace& space) {
  if (std::abs(space.integral(phi) - 1.0) > 1e-12)
    throw ValidationError("homotopy_K: the profile must have regularized integral 1");
  const int k = w.degree();
  if (k == 0) return ConeForm(w.ambient_dim(), 0);
  ConeForm out(w.ambient_dim(), k - 1);
  const double sign = (k - 1) % 2 ? -1.0 : 1.0;
  for (const auto& t : w.radial()) {
    const Profile g = t.f - space.integral(t.f) * phi;
    if (g.is_zero()) continue;
    out.add_tangential(g.antiderivative(), sign * t.eta);
  }
  return out;
}

/// A random point on S^{n-1} with an orthonormal tangent frame (rows).
inline std::pair<std::vector<double>, Eigen::MatrixXd> random_sphere_frame(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  for (auto& x : p) x = g(rng);
  p.normalize();
  Eigen::MatrixXd B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  B.col(0) = p;
  for (Eigen::Index j = 1; j < B.cols(); ++j)
    for (Eigen::Index i = 0; i < B.rows(); ++i) B(i, j) = g(rng);
  const Eigen::MatrixXd Q = B.householderQr().householderQ();
  Eigen::MatrixXd frame = Q.rightCols(static_cast<Eigen::Index>(n) - 1).transpose();
  return {std::vector<double>(p.data(), p.data() + p.size()), frame};
}

struct HomotopyCheck {
  double max_error = 0.0;
  int samples = 0;
};

/// dK + Kd = id - s_* pi_*, pointwise at random (r, p); r avoids the seam r = 1.
inline HomotopyCheck homotopy_identity_check(const ConeForm& w, const Profile& phi, const ProfileSpace& space,
                                             int samples = 50, std::uint64_t seed = 7) {
  // on 0-forms K vanishes and only Kd is left
  ConeForm lhs = homotopy_K(w.d(), phi, space);
  if (w.degree() >= 1) lhs += homotopy_K(w, phi, space).d();
  ConeForm rhs = w;
  if (w.degree() >= 1) rhs = w - thom_section(fiber_integrate(w, space), phi, space);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(0.02, 6.0);
  HomotopyCheck out;
  for (int i = 0; i < samples; ++i) {
    double r = ur(rng);
    if (std::abs(r - 1.0) < 1e-6) r += 0.01;
    auto [p, frame] = random_sphere_frame(w.ambient_dim(), rng);
    const auto a = lhs.evaluate(r, p, frame), b = rhs.evaluate(r, p, frame);
    for (std::size_t j = 0; j < a.tangential.size(); ++j)
      out.max_error = std::max(out.max_error, std::abs(a.tangential[j] - b.tangential[j]));
    for (std::size_t j = 0; j < a.radial.size(); ++j)
      out.max_error = std::max(out.max_error, std::abs(a.radial[j] - b.radial[j]));
    ++out.samples;
  }
  return out;
}

// ---------------------------------------------------------------------------
// res on forms over R^p with symbol coefficients

/// sum_I f_I dxi_I on R^p, I a bit mask of ascending indices.
struct SymbolForm {
  std::size_t p = 0;
  int degree = 0;
  std::vector<std::pair<unsigned, SymbolExpansion>> components;

  /// Form degree plus symbol order, preserved by d.
  double total_degree() const {
    double ord = kMinusInfinity;
    for (const auto& [m, f] : components) ord = std::max(ord, f.order);
    return degree + ord;
  }
};

inline SymbolForm symbol_form_d(const SymbolForm& s) {
  SymbolForm out{s.p, s.degree + 1, {}};
  for (const auto& [mask, f] : s.components)
    for (std::size_t j = 0; j < s.p; ++j) {
      if (mask & (1u << j)) continue;
      const int below = std::popcount(mask & ((1u << j) - 1u));
      SymbolExpansion g = differentiate(f, j);
      if (below % 2) g = scale(g, -1.0);
      const unsigned m = mask | (1u << j);
      auto it = std::find_if(out.components.begin(), out.components.end(), [&](const auto& c) { return c.first == m; });
      if (it == out.components.end())
        out.components.push_back({m, g});
      else
        it->second = linear_combination(1.0, it->second, 1.0, g);
    }
  return out;
}

/// (2 pi)^{-p} int_{S^{p-1}} f_{-p,0} for top degree forms, 0 below.
inline double res_form(const SymbolForm& s) {
  if (s.degree < static_cast<int>(s.p)) return 0.0;
  double v = 0.0;
  for (const auto& [m, f] : s.components) v += residue_integral(f, ResidueNormalization::two_pi_power);
  return v;
}

/// res(d sigma); zero for classical (log-free) coefficients.
inline double stokes_property_check(const SymbolForm& s) { return res_form(symbol_form_d(s)); }

}  // namespace regtrace::cone
