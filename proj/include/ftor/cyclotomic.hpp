#pragma once

#include <ftor/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

namespace ftor {

// Dense univariate polynomials over Q, coefficient of x^i at index i.
// Trailing zeros are trimmed; the zero polynomial is the empty vector.
using QPoly = std::vector<Rational>;

inline void qpoly_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int qpoly_deg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline QPoly qpoly_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  qpoly_trim(r);
  return r;
}

inline QPoly qpoly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  qpoly_trim(r);
  return r;
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  qpoly_trim(r);
  return r;
}

// Division with remainder; denominator must be nonzero.
inline void qpoly_divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  r = a;
  q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rational(0));
  while (r.size() >= b.size() && !r.empty()) {
    Rational c = r.back() / b.back();
    size_t shift = r.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    qpoly_trim(r);
    if (!r.empty() && r.size() >= b.size() && r.back() == 0) qpoly_trim(r);
  }
  qpoly_trim(q);
}

inline QPoly qpoly_mod(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  qpoly_divmod(a, b, q, r);
  return r;
}

inline QPoly qpoly_exact_div(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  qpoly_divmod(a, b, q, r);
  if (!r.empty()) throw DomainError("polynomial division not exact");
  return q;
}

// Extended Euclid: g = gcd (monic), with s*a + t*b = g.
inline void qpoly_ext_gcd(QPoly a, QPoly b, QPoly& g, QPoly& s, QPoly& t) {
  QPoly s0 = {Rational(1)}, s1 = {};
  QPoly t0 = {}, t1 = {Rational(1)};
  while (!b.empty()) {
    QPoly q, r;
    qpoly_divmod(a, b, q, r);
    a.swap(b);
    b = r;
    QPoly s2 = qpoly_sub(s0, qpoly_mul(q, s1));
    s0.swap(s1);
    s1 = s2;
    QPoly t2 = qpoly_sub(t0, qpoly_mul(q, t1));
    t0.swap(t1);
    t1 = t2;
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
    for (auto& c : s0) c /= lead;
    for (auto& c : t0) c /= lead;
  }
  g = a;
  s = s0;
  t = t0;
}

// d-th cyclotomic polynomial, computed as (x^d - 1) / prod_{e|d, e<d} Phi_e.
inline const QPoly& cyclotomic_poly(int64_t d) {
  static std::map<int64_t, QPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (d < 1 || d > (1 << 16)) throw DomainError("cyclotomic index out of range");
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  std::vector<int64_t> divisors;
  for (int64_t e = 1; e < d; ++e)
    if (d % e == 0) divisors.push_back(e);
  // compute recursively without re-locking
  std::function<const QPoly&(int64_t)> get = [&](int64_t k) -> const QPoly& {
    auto jt = cache.find(k);
    if (jt != cache.end()) return jt->second;
    QPoly xk_minus_1(static_cast<size_t>(k) + 1, Rational(0));
    xk_minus_1[0] = -1;
    xk_minus_1[static_cast<size_t>(k)] = 1;
    QPoly den = {Rational(1)};
    for (int64_t e = 1; e < k; ++e)
      if (k % e == 0) den = qpoly_mul(den, get(e));
    QPoly phi = qpoly_exact_div(xk_minus_1, den);
    return cache.emplace(k, std::move(phi)).first->second;
  };
  return get(d);
}

inline int euler_phi_degree(int64_t d) { return qpoly_deg(cyclotomic_poly(d)); }

// An element of Q(zeta_d) = Q[x]/Phi_d(x), stored as coordinates in the
// power basis 1, zeta, ..., zeta^{phi(d)-1}. d = 1 behaves as plain Q.
class Cyclo {
 public:
  Cyclo() : d_(1), c_{} {}
  explicit Cyclo(int64_t d) : d_(d), c_{} {}
  Cyclo(int64_t d, const Rational& r) : d_(d) {
    if (r != 0) c_ = {r};
  }

  static Cyclo zeta_power(int64_t d, int64_t k) {
    const QPoly& phi = cyclotomic_poly(d);
    int n = qpoly_deg(phi);
    k %= d;
    if (k < 0) k += d;
    QPoly x(static_cast<size_t>(k) + 1, Rational(0));
    x[static_cast<size_t>(k)] = 1;
    Cyclo out(d);
    out.c_ = (k >= n) ? qpoly_mod(x, phi) : x;
    qpoly_trim(out.c_);
    return out;
  }

  int64_t index() const { return d_; }
  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  Rational rational_part() const { return c_.empty() ? Rational(0) : c_[0]; }
  const QPoly& coords() const { return c_; }

  // Must be rational (used when pulling values back to Q).
  Rational as_rational() const {
    if (c_.size() > 1) throw DomainError("cyclotomic value is not rational");
    return rational_part();
  }

  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    Cyclo r(merge_index(a, b));
    r.c_ = qpoly_add(a.c_, b.c_);
    return r;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) {
    Cyclo r(merge_index(a, b));
    r.c_ = qpoly_sub(a.c_, b.c_);
    return r;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    Cyclo r(merge_index(a, b));
    r.c_ = qpoly_mod(qpoly_mul(a.c_, b.c_), cyclotomic_poly(r.d_));
    return r;
  }

  Cyclo inverse() const {
    if (is_zero()) throw DomainError("division by zero in cyclotomic field");
    QPoly g, s, t;
    qpoly_ext_gcd(c_, cyclotomic_poly(d_), g, s, t);
    // Phi_d irreducible over Q, so gcd of a nonzero residue with it is 1.
    if (qpoly_deg(g) != 0) throw DomainError("non-invertible cyclotomic element");
    Cyclo r(d_);
    r.c_ = qpoly_mod(s, cyclotomic_poly(d_));
    qpoly_trim(r.c_);
    return r;
  }

  friend bool operator==(const Cyclo& a, const Cyclo& b) {
    return qpoly_sub(a.c_, b.c_).empty();
  }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  // Deterministic total order, used for canonical normal forms.
  friend bool operator<(const Cyclo& a, const Cyclo& b) { return a.c_ < b.c_; }

  // Sign of the first nonzero coordinate; 0 for the zero element.
  int lead_sign() const {
    for (const auto& x : c_)
      if (x != 0) return sign_of(x);
    return 0;
  }

 private:
  static int64_t merge_index(const Cyclo& a, const Cyclo& b) {
    if (a.d_ == b.d_) return a.d_;
    if (a.is_rational() && a.d_ == 1) return b.d_;
    if (b.is_rational() && b.d_ == 1) return a.d_;
    throw DomainError("mixing cyclotomic fields of different index");
  }

  int64_t d_;
  QPoly c_;
};

}  // namespace ftor
