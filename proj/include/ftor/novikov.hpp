#pragma once

#include <ftor/abelian_group.hpp>
#include <ftor/cyclotomic.hpp>
#include <ftor/group_ring.hpp>
#include <ftor/rational.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ftor {

// Degree-truncated element of Nov(G, N; R): finitely many terms, all of
// weight < cutoff. Ring operations silently truncate at the joint cutoff;
// equality of series is always "up to cutoff".
class NovikovSeries {
 public:
  NovikovSeries() = default;
  NovikovSeries(FgAbelianGroup g, Weight w, Rational cutoff)
      : group_(std::move(g)), weight_(std::move(w)), cutoff_(std::move(cutoff)) {
    if (cutoff_ <= 0) throw InputError("cutoff must be positive");
  }

  static NovikovSeries one(const FgAbelianGroup& g, const Weight& w,
                           const Rational& cutoff) {
    NovikovSeries s(g, w, cutoff);
    s.add_term(group_identity(g), 1);
    return s;
  }

  static NovikovSeries monomial(const FgAbelianGroup& g, const Weight& w,
                                const Rational& cutoff, GroupElement elem,
                                const Rational& c) {
    NovikovSeries s(g, w, cutoff);
    s.add_term(std::move(elem), c);
    return s;
  }

  const FgAbelianGroup& group() const { return group_; }
  const Weight& weight() const { return weight_; }
  const Rational& cutoff() const { return cutoff_; }
  const std::map<GroupElement, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(GroupElement g, const Rational& c) {
    if (c == 0) return;
    GroupElement key = reduce_element(group_, std::move(g));
    if (weight_.eval(key) >= cutoff_) return;  // beyond the certified window
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coeff(const GroupElement& g) const {
    auto it = terms_.find(reduce_element(group_, g));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  NovikovSeries with_cutoff(const Rational& c) const {
    NovikovSeries s(group_, weight_, c);
    for (const auto& [g, v] : terms_) s.add_term(g, v);
    return s;
  }

  NovikovSeries operator-() const {
    NovikovSeries r = *this;
    for (auto& [g, c] : r.terms_) c = -c;
    return r;
  }

  friend NovikovSeries operator+(const NovikovSeries& a, const NovikovSeries& b) {
    NovikovSeries r(a.group_, a.weight_, joint(a, b));
    for (const auto& [g, c] : a.terms_) r.add_term(g, c);
    for (const auto& [g, c] : b.terms_) r.add_term(g, c);
    return r;
  }

  friend NovikovSeries operator-(const NovikovSeries& a, const NovikovSeries& b) {
    NovikovSeries r(a.group_, a.weight_, joint(a, b));
    for (const auto& [g, c] : a.terms_) r.add_term(g, c);
    for (const auto& [g, c] : b.terms_) r.add_term(g, -c);
    return r;
  }

  friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
    NovikovSeries r(a.group_, a.weight_, joint(a, b));
    for (const auto& [g, c] : a.terms_)
      for (const auto& [h, d] : b.terms_)
        r.add_term(group_add(a.group_, g, h), c * d);
    return r;
  }

  friend NovikovSeries operator*(const Rational& c, const NovikovSeries& a) {
    NovikovSeries r(a.group_, a.weight_, a.cutoff_);
    for (const auto& [g, d] : a.terms_) r.add_term(g, c * d);
    return r;
  }

 private:
  static Rational joint(const NovikovSeries& a, const NovikovSeries& b) {
    if (!(a.group_ == b.group_) || !(a.weight_ == b.weight_))
      throw DomainError("Novikov series over different rings");
    return std::min(a.cutoff_, b.cutoff_);
  }

  FgAbelianGroup group_;
  Weight weight_;
  Rational cutoff_ = 1;
  std::map<GroupElement, Rational> terms_;
};

inline bool equal_up_to_cutoff(const NovikovSeries& a, const NovikovSeries& b,
                               std::optional<Rational> window = std::nullopt) {
  Rational c = std::min(a.cutoff(), b.cutoff());
  if (window && *window < c) c = *window;
  auto below = [&](const NovikovSeries& s) {
    std::map<GroupElement, Rational> m;
    for (const auto& [g, v] : s.terms())
      if (s.weight().eval(g) < c) m.emplace(g, v);
    return m;
  };
  return below(a) == below(b);
}

// -- degree and leading term ------------------------------------------------

inline Rational degree(const NovikovSeries& a) {
  if (a.is_zero()) throw DomainError("degree undefined for the zero element");
  std::optional<Rational> d;
  for (const auto& [g, c] : a.terms()) {
    Rational w = a.weight().eval(g);
    if (!d || w < *d) d = w;
  }
  return *d;
}

inline Rational degree(const GroupRingElement& a, const Weight& w) {
  if (a.is_zero()) throw DomainError("degree undefined for the zero element");
  std::optional<Rational> d;
  for (const auto& [g, c] : a.terms()) {
    Rational v = w.eval(g);
    if (!d || v < *d) d = v;
  }
  return *d;
}

// Slice of minimal weight; lies in R[ker N] up to a monomial shift.
inline GroupRingElement leading_term(const NovikovSeries& a) {
  Rational d = degree(a);
  GroupRingElement lt(a.group());
  for (const auto& [g, c] : a.terms())
    if (a.weight().eval(g) == d) lt.add_term(g, c);
  return lt;
}

inline GroupRingElement leading_term(const GroupRingElement& a, const Weight& w) {
  Rational d = degree(a, w);
  GroupRingElement lt(a.group());
  for (const auto& [g, c] : a.terms())
    if (w.eval(g) == d) lt.add_term(g, c);
  return lt;
}

// -- inclusion R[G] -> Nov(G, N; R) ------------------------------------------

struct IncludeResult {
  NovikovSeries series;
  int dropped = 0;  // terms at weight >= cutoff, not representable
};

inline IncludeResult include_i_N(const GroupRingElement& a, const Weight& n,
                                 const Rational& cutoff) {
  IncludeResult r{NovikovSeries(a.group(), n, cutoff), 0};
  for (const auto& [g, c] : a.terms()) {
    if (n.eval(g) >= cutoff) {
      ++r.dropped;
      continue;
    }
    r.series.add_term(g, c);
  }
  return r;
}

// -- normal forms mod units ---------------------------------------------------

enum class UnitGroup { plus_minus_G, plus_minus_ker };

template <class V>
struct UnitNormalForm {
  V representative;
  int sign = 1;        // original = sign * unit * representative
  GroupElement unit;
};

namespace detail {

// Fixed total order: weight, then lex on free part, then on torsion part.
// For weightless (group ring) use, pass the zero weight.
inline GroupElement minimal_element(const std::map<GroupElement, Rational>& terms,
                                    const Weight* w) {
  std::optional<GroupElement> best;
  std::optional<Rational> best_w;
  for (const auto& [g, c] : terms) {
    if (w) {
      Rational v = w->eval(g);
      if (!best || v < *best_w || (v == *best_w && g < *best)) {
        best = g;
        best_w = v;
      }
    } else if (!best || g < *best) {
      best = g;
    }
  }
  return *best;
}

}  // namespace detail

// Multiply by a unique +-g so that the minimal term becomes the identity
// (units = +-G) or loses its kernel component (units = +-ker N), with
// positive coefficient.
inline UnitNormalForm<NovikovSeries> normalize_mod_units(
    const NovikovSeries& a, UnitGroup units, const Splitting* split = nullptr) {
  if (a.is_zero()) throw DomainError("cannot normalize the zero element");
  Weight w = a.weight();
  GroupElement gmin = detail::minimal_element(a.terms(), &w);
  GroupElement unit;
  if (units == UnitGroup::plus_minus_G) {
    unit = gmin;
  } else {
    Splitting local = split ? *split : Splitting(a.group(), a.weight());
    unit = local.decompose(gmin).kernel_part;
  }
  // the unit shift is exact; apply it term-by-term so that the shift
  // monomial itself is never subject to the cutoff filter
  GroupElement neg_unit = group_neg(a.group(), unit);
  NovikovSeries shifted(a.group(), a.weight(), a.cutoff());
  for (const auto& [g, c] : a.terms())
    shifted.add_term(group_add(a.group(), g, neg_unit), c);
  GroupElement nmin = group_sub(a.group(), gmin, unit);
  int sign = shifted.coeff(nmin) < 0 ? -1 : 1;
  if (sign < 0) shifted = -shifted;
  return {std::move(shifted), sign, std::move(unit)};
}

inline UnitNormalForm<GroupRingElement> normalize_mod_units(
    const GroupRingElement& a, UnitGroup units, const Weight* w = nullptr,
    const Splitting* split = nullptr) {
  if (a.is_zero()) throw DomainError("cannot normalize the zero element");
  GroupElement gmin = detail::minimal_element(a.terms(), w);
  GroupElement unit;
  if (units == UnitGroup::plus_minus_G) {
    unit = gmin;
  } else {
    if (!w) throw DomainError("kernel normalization needs a weight");
    Splitting local = split ? *split : Splitting(a.group(), *w);
    unit = local.decompose(gmin).kernel_part;
  }
  GroupRingElement shifted =
      GroupRingElement::monomial(a.group(), group_neg(a.group(), unit), 1,
                                 a.coeff_ring()) *
      a;
  GroupElement nmin = group_sub(a.group(), gmin, unit);
  int sign = shifted.coeff(nmin) < 0 ? -1 : 1;
  if (sign < 0) shifted = -shifted;
  return {std::move(shifted), sign, std::move(unit)};
}

// -- inversion ----------------------------------------------------------------

namespace detail {

// CRT idempotent of the factor Q(zeta_d) inside Q[x]/(x^m - 1).
inline QPoly crt_idempotent(int64_t m, int64_t d) {
  QPoly xm(static_cast<size_t>(m) + 1, Rational(0));
  xm[0] = -1;
  xm[static_cast<size_t>(m)] = 1;
  QPoly md = qpoly_exact_div(xm, cyclotomic_poly(d));
  QPoly g, s, t;
  qpoly_ext_gcd(md, cyclotomic_poly(d), g, s, t);
  if (qpoly_deg(g) != 0) throw DomainError("idempotent construction failed");
  return qpoly_mod(qpoly_mul(md, s), xm);
}

// Inverse of the leading slice as a unit of R[ker N]; throws when the slice
// is not a unit. Handles: single monomials (any kernel); otherwise kernels
// of free rank <= 1 with at most one cyclic torsion factor, where the unit
// group is detected per cyclotomic factor.
inline GroupRingElement invert_leading_slice(const GroupRingElement& lt,
                                             const FgAbelianGroup& group,
                                             const Weight& weight) {
  if (lt.term_count() == 1) {
    const auto& [g, c] = *lt.terms().begin();
    return GroupRingElement::monomial(group, group_neg(group, g), 1 / c);
  }
  if (group.torsion_orders.size() > 1)
    throw DomainError("non-monomial leading term over multi-factor torsion");
  Splitting split(group, weight);
  FgAbelianGroup ker = split.kernel_group();
  if (ker.rank > 1)
    throw DomainError(
        "leading term is not a unit: non-monomial over a kernel of rank >= 2 "
        "(" + group_ring_str(lt) + ")");

  // write lt = m0 * P with P supported on ker N
  GroupElement m0 = minimal_element(lt.terms(), nullptr);
  int64_t m = group.torsion_orders.empty() ? 1 : group.torsion_orders[0];
  // P as a Laurent polynomial in the free kernel generator s with
  // coefficients in Q[Z/m]: (s-exponent, residue) -> coefficient
  std::map<std::pair<int64_t, int64_t>, Rational> p;
  for (const auto& [g, c] : lt.terms()) {
    auto dec = split.decompose(group_sub(group, g, m0));
    if (dec.quot_exponent != 0)
      throw DomainError("leading slice does not lie in the kernel ring");
    int64_t se = ker.rank == 1 ? dec.kernel_coords.free[0] : 0;
    int64_t res = m == 1 ? 0 : dec.kernel_coords.tor[0];
    p[{se, res}] += c;
  }

  // per cyclotomic factor, the unit must be a single monomial c_d * s^{k_d}
  struct FactorUnit {
    int64_t d;
    int64_t k;
    Cyclo c;
  };
  std::vector<FactorUnit> units;
  for (int64_t d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    std::map<int64_t, Cyclo> proj;  // s-exponent -> Q(zeta_d) coefficient
    for (const auto& [key, c] : p) {
      Cyclo v = Cyclo(d, c) * Cyclo::zeta_power(d, key.second);
      auto it = proj.find(key.first);
      if (it == proj.end())
        proj.emplace(key.first, v);
      else
        it->second = it->second + v;
    }
    std::erase_if(proj, [](const auto& kv) { return kv.second.is_zero(); });
    if (proj.size() != 1)
      throw DomainError("leading term is not a unit of the kernel ring (" +
                        group_ring_str(lt) + ")");
    units.push_back({d, proj.begin()->first, proj.begin()->second});
  }

  // assemble the inverse via CRT idempotents on the torsion algebra
  GroupRingElement inv(group);
  for (const auto& fu : units) {
    QPoly factor;  // element of Q[x]/(x^m - 1) realizing e_d * c_d^{-1}
    if (m == 1) {
      factor = fu.c.inverse().coords();
    } else {
      QPoly xm(static_cast<size_t>(m) + 1, Rational(0));
      xm[0] = -1;
      xm[static_cast<size_t>(m)] = 1;
      factor = qpoly_mod(
          qpoly_mul(crt_idempotent(m, fu.d), fu.c.inverse().coords()), xm);
    }
    for (size_t j = 0; j < factor.size(); ++j) {
      if (factor[j] == 0) continue;
      GroupElement kc = group_identity(ker);
      if (ker.rank == 1) kc.free[0] = -fu.k;
      if (m > 1) kc.tor[0] = static_cast<int64_t>(j);
      inv.add_term(split.from_coords(reduce_element(ker, kc), 0), factor[j]);
    }
  }
  return GroupRingElement::monomial(group, group_neg(group, m0), 1) * inv;
}

}  // namespace detail

// Multiplicative inverse up to cutoff. Requires the leading slice to be a
// unit of R[ker N] (monomial, or the rank <= 1 cases above).
inline NovikovSeries invert(const NovikovSeries& a) {
  if (a.is_zero()) throw DomainError("cannot invert the zero series");
  Rational d = degree(a);
  GroupRingElement lt = leading_term(a);
  GroupRingElement linv_ring =
      detail::invert_leading_slice(lt, a.group(), a.weight());

  bool whole_is_slice = (lt.term_count() == a.terms().size());
  Rational cutoff =
      whole_is_slice ? a.cutoff()
                     : a.cutoff() - rational_abs(d) - std::max(d, Rational(0));
  if (cutoff <= 0)
    throw DomainError("cutoff too small to certify the inverse");

  NovikovSeries linv(a.group(), a.weight(), cutoff);
  for (const auto& [g, c] : linv_ring.terms()) linv.add_term(g, c);
  if (whole_is_slice) return linv;  // the slice inverse is exact

  NovikovSeries h = linv * a;
  h.add_term(group_identity(a.group()), -1);  // h = linv*a - 1, deg > 0
  NovikovSeries acc = NovikovSeries::one(a.group(), a.weight(), cutoff);
  NovikovSeries pw = acc;
  while (true) {
    pw = Rational(-1) * (pw * h);
    if (pw.is_zero()) break;
    acc = acc + pw;
  }
  return acc * linv;
}

// -- exp / log ----------------------------------------------------------------

// exp on Nov^+ (all terms of positive weight).
inline NovikovSeries exp_series(const NovikovSeries& a) {
  for (const auto& [g, c] : a.terms())
    if (a.weight().eval(g) <= 0)
      throw DomainError("exp: not in Nov+ (term of non-positive degree " +
                        element_str(a.group(), g) + ")");
  NovikovSeries acc = NovikovSeries::one(a.group(), a.weight(), a.cutoff());
  NovikovSeries term = acc;
  int64_t k = 1;
  while (true) {
    term = term * a;
    if (term.is_zero()) break;
    term = Rational(Int(1), Int(k)) * term;
    acc = acc + term;
    ++k;
  }
  return acc;
}

// log on Nov^1 = 1 + Nov^+.
inline NovikovSeries log_series(const NovikovSeries& a) {
  NovikovSeries c = a;
  GroupElement id = group_identity(a.group());
  if (a.coeff(id) != 1)
    throw DomainError("log: not in Nov1 (identity coefficient is " +
                      rational_str(a.coeff(id)) + ")");
  c.add_term(id, -1);
  for (const auto& [g, v] : c.terms())
    if (a.weight().eval(g) <= 0)
      throw DomainError("log: not in Nov1 (term of non-positive degree " +
                        element_str(a.group(), g) + ")");
  NovikovSeries acc(a.group(), a.weight(), a.cutoff());
  NovikovSeries pw = NovikovSeries::one(a.group(), a.weight(), a.cutoff());
  int64_t k = 1;
  int sign = 1;
  while (true) {
    pw = pw * c;
    if (pw.is_zero()) break;
    acc = acc + (Rational(Int(sign), Int(k)) * pw);
    ++k;
    sign = -sign;
  }
  return acc;
}

inline std::string series_str(const NovikovSeries& a) {
  if (a.is_zero()) return "0";
  GroupRingElement as_ring(a.group());
  for (const auto& [g, c] : a.terms()) as_ring.add_term(g, c);
  return group_ring_str(as_ring) + " + O(" + rational_str(a.cutoff()) + ")";
}

}  // namespace ftor
