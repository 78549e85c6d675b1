#pragma once

#include <ftor/abelian_group.hpp>
#include <ftor/group_ring.hpp>
#include <ftor/polynomial.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ftor {

// One field factor of Q(R[G]): the rational function field Q(zeta_d)(t_1..t_r).
struct FieldFactor {
  int64_t cyclotomic_index = 1;
  int num_vars = 0;

  friend bool operator==(const FieldFactor&, const FieldFactor&) = default;
};

// num/den over one FieldFactor. For one variable the fraction is kept
// gcd-reduced with monic denominator; for more variables it is content- and
// monomial-reduced, and equality falls back to cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() : fac_{1, 0}, num_(0, 1), den_(Poly::constant(0, 1, 1)) {}

  explicit RationalFunction(FieldFactor fac)
      : fac_(fac),
        num_(fac.num_vars, fac.cyclotomic_index),
        den_(Poly::constant(fac.num_vars, fac.cyclotomic_index, 1)) {}

  RationalFunction(FieldFactor fac, Poly num, Poly den)
      : fac_(fac), num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    reduce();
  }

  static RationalFunction from_rational(const FieldFactor& fac, const Rational& r) {
    RationalFunction f(fac);
    f.num_ = Poly::constant(fac.num_vars, fac.cyclotomic_index, r);
    return f;
  }

  static RationalFunction from_poly(const FieldFactor& fac, Poly p) {
    RationalFunction f(fac);
    f.num_ = std::move(p);
    return f;
  }

  const FieldFactor& factor() const { return fac_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return (num_ - den_).is_zero(); }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.fac_, a.num_ * b.den_ + b.num_ * a.den_,
                            a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.fac_, a.num_ * b.den_ - b.num_ * a.den_,
                            a.den_ * b.den_);
  }
  friend RationalFunction operator*(const RationalFunction& a,
                                    const RationalFunction& b) {
    return RationalFunction(a.fac_, a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a,
                                    const RationalFunction& b) {
    if (b.is_zero()) throw DomainError("division by zero rational function");
    return RationalFunction(a.fac_, a.num_ * b.den_, a.den_ * b.num_);
  }

  RationalFunction inverse() const {
    if (is_zero()) throw DomainError("inverse of zero rational function");
    return RationalFunction(fac_, den_, num_);
  }

  // a/b == c/d iff ad == cb; with the univariate canonical form this is
  // also plain structural equality, but cross-multiplication is the
  // definition we rely on.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly::constant(fac_.num_vars, fac_.cyclotomic_index, 1);
      return;
    }
    // common monomial factor
    Poly::Expo mn = num_.min_exponents();
    Poly::Expo md = den_.min_exponents();
    Poly::Expo shift(fac_.num_vars);
    bool any = false;
    for (int i = 0; i < fac_.num_vars; ++i) {
      shift[i] = -std::min(mn[i], md[i]);
      any |= shift[i] != 0;
    }
    if (any) {
      num_ = num_.shifted(shift);
      den_ = den_.shifted(shift);
    }
    if (fac_.num_vars == 1) {
      Poly g = poly_gcd_univariate(num_, den_);
      if (g.total_degree() > 0) {
        num_ = poly_exact_div(num_, g);
        den_ = poly_exact_div(den_, g);
      }
      Cyclo lead = den_.lead().second;
      if (!(lead == Cyclo(lead.index(), 1))) {
        Cyclo inv = lead.inverse();
        num_ = inv * num_;
        den_ = inv * den_;
      }
    } else {
      Rational cn = poly_content(num_);
      Rational cd = poly_content(den_);
      if (cn != 0 && cd != 0) {
        Rational c(gcd(numerator(cn) * denominator(cd),
                       numerator(cd) * denominator(cn)),
                   denominator(cn) * denominator(cd));
        if (c != 1) {
          Cyclo inv(num_.field_index(), 1 / c);
          num_ = inv * num_;
          den_ = inv * den_;
        }
      }
    }
  }

  FieldFactor fac_;
  Poly num_, den_;
};

// Element of Q(R[G]) = (+)_j F_j, one component per field factor.
struct FieldSumElement {
  std::vector<FieldFactor> factors;
  std::vector<RationalFunction> components;

  bool is_zero() const {
    for (const auto& c : components)
      if (!c.is_zero()) return false;
    return true;
  }
  bool is_one() const {
    for (const auto& c : components)
      if (!c.is_one()) return false;
    return true;
  }

  friend bool operator==(const FieldSumElement& a, const FieldSumElement& b) {
    if (a.factors != b.factors) return false;
    for (size_t i = 0; i < a.components.size(); ++i)
      if (!(a.components[i] == b.components[i])) return false;
    return true;
  }

  friend FieldSumElement operator+(const FieldSumElement& a,
                                   const FieldSumElement& b) {
    FieldSumElement r = a;
    for (size_t i = 0; i < r.components.size(); ++i)
      r.components[i] = r.components[i] + b.components[i];
    return r;
  }
  friend FieldSumElement operator-(const FieldSumElement& a,
                                   const FieldSumElement& b) {
    FieldSumElement r = a;
    for (size_t i = 0; i < r.components.size(); ++i)
      r.components[i] = r.components[i] - b.components[i];
    return r;
  }
  friend FieldSumElement operator*(const FieldSumElement& a,
                                   const FieldSumElement& b) {
    FieldSumElement r = a;
    for (size_t i = 0; i < r.components.size(); ++i)
      r.components[i] = r.components[i] * b.components[i];
    return r;
  }
};

// Decomposition of Q(R[G]) as a finite sum of fields. Supported: G
// torsion-free (single factor), or with one cyclic torsion factor Z/m
// (one factor per divisor d of m, in increasing order of d).
inline std::vector<FieldFactor> decompose(const FgAbelianGroup& g) {
  if (g.torsion_orders.size() > 1)
    throw DomainError(
        "unsupported group: torsion with more than one invariant factor");
  std::vector<FieldFactor> out;
  if (g.torsion_orders.empty()) {
    out.push_back({1, g.rank});
    return out;
  }
  int64_t m = g.torsion_orders[0];
  for (int64_t d = 1; d <= m; ++d)
    if (m % d == 0) out.push_back({d, g.rank});
  return out;
}

inline FieldSumElement field_sum_zero(const std::vector<FieldFactor>& factors) {
  FieldSumElement e;
  e.factors = factors;
  for (const auto& f : factors) e.components.emplace_back(f);
  return e;
}

inline FieldSumElement field_sum_one(const std::vector<FieldFactor>& factors) {
  FieldSumElement e;
  e.factors = factors;
  for (const auto& f : factors)
    e.components.push_back(RationalFunction::from_rational(f, 1));
  return e;
}

namespace detail {

// A Laurent monomial as a rational function: positive exponents go to the
// numerator, negative ones to the denominator.
inline RationalFunction laurent_monomial(const FieldFactor& fac,
                                         const std::vector<int64_t>& expo,
                                         Cyclo coeff) {
  Poly num = Poly::constant(fac.num_vars, std::move(coeff));
  Poly den = Poly::constant(fac.num_vars, fac.cyclotomic_index, 1);
  for (int i = 0; i < fac.num_vars; ++i) {
    if (expo[i] > 0)
      num = num * Poly::variable(fac.num_vars, fac.cyclotomic_index, i, expo[i]);
    else if (expo[i] < 0)
      den = den * Poly::variable(fac.num_vars, fac.cyclotomic_index, i, -expo[i]);
  }
  return RationalFunction(fac, std::move(num), std::move(den));
}

}  // namespace detail

// Coefficient map R[G] -> (+)_j F_j: the torsion generator goes to zeta_d in
// the factor of index d, free generators to the transcendentals t_i.
inline FieldSumElement project(const GroupRingElement& a) {
  auto factors = decompose(a.group());
  FieldSumElement out = field_sum_zero(factors);
  for (size_t j = 0; j < factors.size(); ++j) {
    const FieldFactor& fac = factors[j];
    RationalFunction acc(fac);
    for (const auto& [g, c] : a.terms()) {
      Cyclo coeff(fac.cyclotomic_index, c);
      if (!g.tor.empty())
        coeff = coeff * Cyclo::zeta_power(fac.cyclotomic_index, g.tor[0]);
      acc = acc + detail::laurent_monomial(fac, g.free, std::move(coeff));
    }
    out.components[j] = acc;
  }
  return out;
}

// Exact determinant of a matrix over one rational-function field: lift rows
// to a common denominator, then fraction-free Bareiss elimination over the
// polynomial ring.
inline RationalFunction det_fraction_free(
    const std::vector<std::vector<RationalFunction>>& m) {
  size_t n = m.size();
  if (n == 0)
    return RationalFunction::from_rational(FieldFactor{1, 0}, 1);
  const FieldFactor fac = m[0][0].factor();
  Poly den_all = Poly::constant(fac.num_vars, fac.cyclotomic_index, 1);
  std::vector<std::vector<Poly>> p(n, std::vector<Poly>(n));
  for (size_t i = 0; i < n; ++i) {
    Poly row_den = Poly::constant(fac.num_vars, fac.cyclotomic_index, 1);
    for (size_t j = 0; j < n; ++j) row_den = row_den * m[i][j].den();
    for (size_t j = 0; j < n; ++j)
      p[i][j] = m[i][j].num() * poly_exact_div(row_den, m[i][j].den());
    den_all = den_all * row_den;
  }

  Poly prev = Poly::constant(fac.num_vars, fac.cyclotomic_index, 1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (p[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && p[piv][k].is_zero()) ++piv;
      if (piv == n) return RationalFunction(fac);
      std::swap(p[k], p[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        p[i][j] = poly_exact_div(p[k][k] * p[i][j] - p[i][k] * p[k][j], prev);
    prev = p[k][k];
  }
  Poly det = p[n - 1][n - 1];
  if (sign < 0) det = -det;
  return RationalFunction(fac, std::move(det), std::move(den_all));
}

inline std::vector<std::string> factor_var_names(const FieldFactor& fac) {
  std::vector<std::string> names;
  for (int i = 0; i < fac.num_vars; ++i)
    names.push_back(fac.num_vars == 1 ? "t" : "t" + std::to_string(i + 1));
  return names;
}

inline std::string rational_function_str(const RationalFunction& f) {
  auto vars = factor_var_names(f.factor());
  std::string num = poly_str(f.num(), vars);
  if (f.den().is_constant() &&
      f.den().constant_value() == Cyclo(f.factor().cyclotomic_index, 1))
    return num;
  std::string den = poly_str(f.den(), vars);
  if (num == "1") return "(" + den + ")^-1";
  return "(" + num + ")/(" + den + ")";
}

inline std::string field_sum_str(const FieldSumElement& e) {
  if (e.factors.size() == 1) return rational_function_str(e.components[0]);
  std::string out;
  for (size_t j = 0; j < e.factors.size(); ++j) {
    if (j) out += " (+) ";
    out += rational_function_str(e.components[j]) + " in Q(zeta_" +
           std::to_string(e.factors[j].cyclotomic_index) + ")";
    if (e.factors[j].num_vars > 0) {
      out += "(";
      auto vars = factor_var_names(e.factors[j]);
      for (size_t i = 0; i < vars.size(); ++i)
        out += (i ? "," : "") + vars[i];
      out += ")";
    }
  }
  return out;
}

}  // namespace ftor
