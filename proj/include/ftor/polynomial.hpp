#pragma once

#include <ftor/cyclotomic.hpp>
#include <ftor/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ftor {

// Sparse multivariate polynomial over Q(zeta_d), exponents >= 0, terms kept
// in lex order on the exponent vector. All arithmetic is exact.
class Poly {
 public:
  using Expo = std::vector<int64_t>;

  Poly() : nvars_(0), d_(1) {}
  Poly(int nvars, int64_t d) : nvars_(nvars), d_(d) {}

  static Poly constant(int nvars, Cyclo c) {
    Poly p(nvars, c.index());
    p.add_term(Expo(nvars, 0), std::move(c));
    return p;
  }
  static Poly constant(int nvars, int64_t d, const Rational& r) {
    return constant(nvars, Cyclo(d, r));
  }
  static Poly variable(int nvars, int64_t d, int which, int64_t exp = 1) {
    Poly p(nvars, d);
    Expo e(nvars, 0);
    e.at(which) = exp;
    p.add_term(e, Cyclo(d, 1));
    return p;
  }

  int nvars() const { return nvars_; }
  int64_t field_index() const { return d_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Expo, Cyclo>& terms() const { return terms_; }

  void add_term(Expo e, Cyclo c) {
    if (c.is_zero()) return;
    if (e.size() != static_cast<size_t>(nvars_))
      throw DomainError("exponent arity mismatch");
    for (int64_t x : e)
      if (x < 0) throw DomainError("negative exponent in a polynomial");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), std::move(c));
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(),
                        terms_.begin()->first.end(),
                        [](int64_t x) { return x == 0; }));
  }

  Cyclo constant_value() const {
    if (terms_.empty()) return Cyclo(d_);
    if (!is_constant()) throw DomainError("polynomial is not constant");
    return terms_.begin()->second;
  }

  // total degree of the lex-leading term; -1 for zero
  int64_t total_degree() const {
    int64_t best = -1;
    for (const auto& [e, c] : terms_) {
      int64_t s = 0;
      for (int64_t x : e) s += x;
      best = std::max(best, s);
    }
    return best;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.nvars_, a.terms_.empty() ? b.d_ : a.d_);
    for (const auto& [e, c] : a.terms_)
      for (const auto& [f, d] : b.terms_) {
        Expo g(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) g[i] = e[i] + f[i];
        r.add_term(std::move(g), c * d);
      }
    return r;
  }
  friend Poly operator*(const Cyclo& c, const Poly& a) {
    Poly r(a.nvars_, a.d_);
    for (const auto& [e, d] : a.terms_) r.add_term(e, c * d);
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return (a - b).is_zero();
  }

  // lex-maximal term
  std::pair<Expo, Cyclo> lead() const {
    if (terms_.empty()) throw DomainError("zero polynomial has no lead term");
    auto it = std::prev(terms_.end());
    return {it->first, it->second};
  }

  // lex-minimal term
  std::pair<Expo, Cyclo> trail() const {
    if (terms_.empty()) throw DomainError("zero polynomial has no trail term");
    return {terms_.begin()->first, terms_.begin()->second};
  }

  // componentwise minimum of exponents over all terms
  Expo min_exponents() const {
    Expo m(nvars_, 0);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first) {
        m = e;
        first = false;
      } else {
        for (int i = 0; i < nvars_; ++i) m[i] = std::min(m[i], e[i]);
      }
    }
    return m;
  }

  Poly shifted(const Expo& by) const {  // multiply by the monomial x^by
    Poly r(nvars_, d_);
    for (const auto& [e, c] : terms_) {
      Expo f(nvars_);
      for (int i = 0; i < nvars_; ++i) f[i] = e[i] + by[i];
      r.add_term(std::move(f), c);
    }
    return r;
  }

 private:
  int nvars_;
  int64_t d_;
  std::map<Expo, Cyclo> terms_;
};

// Exact division; throws if the division is not exact.
inline Poly poly_exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  Poly r = a;
  Poly q(a.nvars(), a.field_index() == 1 ? b.field_index() : a.field_index());
  auto [be, bc] = b.lead();
  Cyclo bcinv = bc.inverse();
  while (!r.is_zero()) {
    auto [re, rc] = r.lead();
    Poly::Expo qe(r.nvars());
    for (int i = 0; i < r.nvars(); ++i) {
      qe[i] = re[i] - be[i];
      if (qe[i] < 0) throw DomainError("polynomial division not exact");
    }
    Poly term(r.nvars(), r.field_index());
    term.add_term(qe, rc * bcinv);
    q = q + term;
    r = r - term * b;
    // the lead term of r strictly decreases in lex order; exactness means
    // we land on zero
    if (!r.is_zero() && !(r.lead().first < re))
      throw DomainError("polynomial division not exact");
  }
  return q;
}

// Euclidean gcd for univariate polynomials (nvars == 1), monic result.
inline Poly poly_gcd_univariate(Poly a, Poly b) {
  if (a.nvars() != 1 || b.nvars() != 1)
    throw DomainError("univariate gcd needs one variable");
  auto divmod_rem = [](const Poly& x, const Poly& y) {
    Poly r = x;
    auto [ye, yc] = y.lead();
    Cyclo ycinv = yc.inverse();
    while (!r.is_zero() && r.lead().first[0] >= ye[0]) {
      auto [re, rc] = r.lead();
      Poly term(1, r.field_index());
      term.add_term({re[0] - ye[0]}, rc * ycinv);
      r = r - term * y;
    }
    return r;
  };
  while (!b.is_zero()) {
    Poly r = divmod_rem(a, b);
    a = b;
    b = r;
  }
  if (!a.is_zero()) {
    Cyclo lead = a.lead().second;
    a = lead.inverse() * a;
  }
  return a;
}

// Rational content: gcd of numerators / lcm of denominators over all
// rational coordinates of all coefficients. Zero for the zero polynomial.
inline Rational poly_content(const Poly& p) {
  Int num_gcd = 0, den_lcm = 1;
  for (const auto& [e, c] : p.terms())
    for (const auto& q : c.coords()) {
      if (q == 0) continue;
      num_gcd = gcd(num_gcd, numerator(q));
      den_lcm = lcm(den_lcm, denominator(q));
    }
  if (num_gcd == 0) return 0;
  return Rational(num_gcd, den_lcm);
}

inline std::string poly_str(const Poly& p,
                            const std::vector<std::string>& vars) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    std::string mono;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff;
    bool neg = false;
    if (c.is_rational()) {
      Rational r = c.rational_part();
      neg = r < 0;
      Rational ar = rational_abs(r);
      if (ar != 1 || mono.empty()) coeff = rational_str(ar);
    } else {
      std::string z = "z";  // zeta_d
      std::ostringstream cs;
      cs << "(";
      bool cfirst = true;
      for (size_t i = 0; i < c.coords().size(); ++i) {
        const Rational& q = c.coords()[i];
        if (q == 0) continue;
        if (!cfirst) cs << (q < 0 ? " - " : " + ");
        else if (q < 0) cs << "-";
        Rational aq = rational_abs(q);
        if (aq != 1 || i == 0) cs << rational_str(aq);
        if (i > 0) {
          if (aq != 1) cs << "*";
          cs << z;
          if (i > 1) cs << "^" << i;
        }
        cfirst = false;
      }
      cs << ")";
      coeff = cs.str();
    }
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (!coeff.empty()) {
      os << coeff;
      if (!mono.empty()) os << "*";
    }
    os << mono;
    first = false;
  }
  return os.str();
}

}  // namespace ftor
