#pragma once

#include <ftor/abelian_group.hpp>
#include <ftor/group_ring.hpp>
#include <ftor/novikov.hpp>
#include <ftor/rational_function.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ftor {

// Shared coordinates for the embedding
//   Q(Nov(G, N; R)) -> Nov(G/ker N, N; Q(R[ker N])):
// a splitting of G, and the field factors of Q(Q[ker N]).
struct EmbeddingContext {
  FgAbelianGroup group;
  Weight weight;
  Splitting split;
  std::vector<FieldFactor> factors;  // decompose(kernel group)

  EmbeddingContext(FgAbelianGroup g, Weight w)
      : group(std::move(g)), weight(std::move(w)), split(group, weight) {
    factors = decompose_factors();
  }
  EmbeddingContext(FgAbelianGroup g, Weight w, Splitting s)
      : group(std::move(g)), weight(std::move(w)), split(std::move(s)) {
    factors = decompose_factors();
  }

  Rational quot_weight() const { return split.quotient_weight(); }
  bool has_quotient() const { return split.has_quotient(); }

  bool compatible(const EmbeddingContext& o) const {
    return group == o.group && weight == o.weight &&
           split.kernel_basis() == o.split.kernel_basis() &&
           split.complement_basis() == o.split.complement_basis();
  }

 private:
  std::vector<FieldFactor> decompose_factors() {
    return decompose(split.kernel_group());
  }
};

using EmbeddingContextPtr = std::shared_ptr<const EmbeddingContext>;

inline EmbeddingContextPtr make_context(const FgAbelianGroup& g, const Weight& w) {
  return std::make_shared<EmbeddingContext>(g, w);
}
inline EmbeddingContextPtr make_context(const FgAbelianGroup& g, const Weight& w,
                                        const Splitting& s) {
  return std::make_shared<EmbeddingContext>(g, w, s);
}

// Truncated series in the quotient direction with coefficients in the sum
// of fields Q(R[ker N]) = (+)_d Q(zeta_d)(s_1..s_k). Stored per factor as
// quotient-exponent -> rational function, with every stored term of weight
// strictly below the cutoff.
class FracNovikov {
 public:
  FracNovikov() = default;
  FracNovikov(EmbeddingContextPtr ctx, Rational cutoff)
      : ctx_(std::move(ctx)), cutoff_(std::move(cutoff)),
        comp_(ctx_->factors.size()) {
    if (cutoff_ <= 0) throw InputError("cutoff must be positive");
  }

  static FracNovikov one(EmbeddingContextPtr ctx, const Rational& cutoff) {
    FracNovikov f(std::move(ctx), cutoff);
    for (size_t j = 0; j < f.comp_.size(); ++j)
      f.add_term(j, 0, RationalFunction::from_rational(f.ctx_->factors[j], 1));
    return f;
  }

  static FracNovikov from_group_ring(EmbeddingContextPtr ctx,
                                     const Rational& cutoff,
                                     const GroupRingElement& a) {
    FracNovikov f(std::move(ctx), cutoff);
    for (const auto& [g, c] : a.terms()) f.add_monomial(g, c);
    return f;
  }

  static FracNovikov from_series(EmbeddingContextPtr ctx,
                                 const NovikovSeries& a) {
    FracNovikov f(std::move(ctx), a.cutoff());
    for (const auto& [g, c] : a.terms()) f.add_monomial(g, c);
    return f;
  }

  const EmbeddingContextPtr& context() const { return ctx_; }
  const Rational& cutoff() const { return cutoff_; }
  size_t factor_count() const { return comp_.size(); }
  const std::map<int64_t, RationalFunction>& factor(size_t j) const {
    return comp_[j];
  }

  bool is_zero() const {
    for (const auto& m : comp_)
      if (!m.empty()) return false;
    return true;
  }

  // image of c * g under the embedding: splits g into a quotient exponent
  // and a kernel monomial, the latter projected into each field factor
  void add_monomial(const GroupElement& g, const Rational& c) {
    auto dec = ctx_->split.decompose(g);
    Rational w = ctx_->weight.eval(g);
    if (w >= cutoff_) return;
    for (size_t j = 0; j < comp_.size(); ++j) {
      const FieldFactor& fac = ctx_->factors[j];
      Cyclo coeff(fac.cyclotomic_index, c);
      if (!dec.kernel_coords.tor.empty())
        coeff = coeff *
                Cyclo::zeta_power(fac.cyclotomic_index, dec.kernel_coords.tor[0]);
      RationalFunction mono =
          detail::laurent_monomial(fac, dec.kernel_coords.free, std::move(coeff));
      add_term(j, dec.quot_exponent, mono);
    }
  }

  void add_term(size_t j, int64_t expo, const RationalFunction& c) {
    if (c.is_zero()) return;
    if (term_weight(expo) >= cutoff_) return;
    if (!ctx_->has_quotient() && expo != 0)
      throw DomainError("nonzero quotient exponent over a trivial quotient");
    auto it = comp_[j].find(expo);
    if (it == comp_[j].end()) {
      comp_[j].emplace(expo, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) comp_[j].erase(it);
    }
  }

  Rational term_weight(int64_t expo) const {
    return Rational(expo) * ctx_->quot_weight();
  }

  FracNovikov operator-() const {
    FracNovikov r = *this;
    for (auto& m : r.comp_)
      for (auto& [e, c] : m) c = -c;
    return r;
  }

  friend FracNovikov operator+(const FracNovikov& a, const FracNovikov& b) {
    FracNovikov r(a.ctx_, joint(a, b));
    r.comp_ = a.restrict_to(r.cutoff_);
    for (size_t j = 0; j < r.comp_.size(); ++j)
      for (const auto& [e, c] : b.comp_[j]) r.add_term(j, e, c);
    return r;
  }
  friend FracNovikov operator-(const FracNovikov& a, const FracNovikov& b) {
    return a + (-b);
  }
  friend FracNovikov operator*(const FracNovikov& a, const FracNovikov& b) {
    FracNovikov r(a.ctx_, joint(a, b));
    for (size_t j = 0; j < r.comp_.size(); ++j)
      for (const auto& [e, c] : a.comp_[j])
        for (const auto& [f, d] : b.comp_[j]) r.add_term(j, e + f, c * d);
    return r;
  }
  friend FracNovikov operator*(const Rational& c, const FracNovikov& a) {
    FracNovikov r(a.ctx_, a.cutoff_);
    for (size_t j = 0; j < r.comp_.size(); ++j)
      for (const auto& [e, v] : a.comp_[j])
        r.add_term(j, e, RationalFunction::from_rational(a.ctx_->factors[j], c) * v);
    return r;
  }

  // exact shift by the image of -g (a unit); terms leaving the window drop
  FracNovikov shifted_by_unit(const GroupElement& g, int sign) const {
    auto dec = ctx_->split.decompose(g);
    FracNovikov r(ctx_, cutoff_);
    for (size_t j = 0; j < comp_.size(); ++j) {
      const FieldFactor& fac = ctx_->factors[j];
      Cyclo coeff(fac.cyclotomic_index, sign);
      if (!dec.kernel_coords.tor.empty())
        coeff = coeff *
                Cyclo::zeta_power(fac.cyclotomic_index, dec.kernel_coords.tor[0]);
      RationalFunction mono =
          detail::laurent_monomial(fac, dec.kernel_coords.free, std::move(coeff));
      for (const auto& [e, c] : comp_[j])
        r.add_term(j, e + dec.quot_exponent, c * mono);
    }
    return r;
  }

  // minimal stored weight across all factors
  std::optional<Rational> min_degree() const {
    std::optional<Rational> d;
    for (const auto& m : comp_) {
      if (m.empty()) continue;
      Rational w = term_weight(m.begin()->first);
      if (!d || w < *d) d = w;
    }
    return d;
  }

 private:
  static Rational joint(const FracNovikov& a, const FracNovikov& b) {
    if (!a.ctx_ || !b.ctx_ || !a.ctx_->compatible(*b.ctx_))
      throw DomainError("embedded series over incompatible contexts");
    return std::min(a.cutoff_, b.cutoff_);
  }

  std::vector<std::map<int64_t, RationalFunction>> restrict_to(
      const Rational& c) const {
    auto out = comp_;
    for (auto& m : out)
      for (auto it = m.begin(); it != m.end();)
        it = (term_weight(it->first) >= c) ? m.erase(it) : std::next(it);
    return out;
  }

  EmbeddingContextPtr ctx_;
  Rational cutoff_ = 1;
  std::vector<std::map<int64_t, RationalFunction>> comp_;
};

inline bool equal_up_to_cutoff(const FracNovikov& a, const FracNovikov& b,
                               std::optional<Rational> window = std::nullopt) {
  Rational c = std::min(a.cutoff(), b.cutoff());
  if (window && *window < c) c = *window;
  if (a.factor_count() != b.factor_count()) return false;
  for (size_t j = 0; j < a.factor_count(); ++j) {
    std::map<int64_t, RationalFunction> am, bm;
    for (const auto& [e, v] : a.factor(j))
      if (a.term_weight(e) < c) am.emplace(e, v);
    for (const auto& [e, v] : b.factor(j))
      if (b.term_weight(e) < c) bm.emplace(e, v);
    if (am.size() != bm.size()) return false;
    for (const auto& [e, v] : am) {
      auto it = bm.find(e);
      if (it == bm.end() || !(v == it->second)) return false;
    }
  }
  return true;
}

// Multiplicative inverse up to (a possibly shrunken) cutoff. Every nonzero
// element with a nonzero lowest slice in each factor is invertible here,
// because the slice coefficients live in a field.
inline FracNovikov invert(const FracNovikov& a) {
  if (a.is_zero()) throw DomainError("cannot invert the zero series");
  FracNovikov out(a.context(), a.cutoff());
  for (size_t j = 0; j < a.factor_count(); ++j) {
    const auto& m = a.factor(j);
    if (m.empty())
      throw DomainError("cannot invert: component " + std::to_string(j) +
                        " is zero");
    int64_t e0 = m.begin()->first;
    const RationalFunction& c0 = m.begin()->second;
    Rational d = a.term_weight(e0);
    bool single = (m.size() == 1);
    Rational cutoff =
        single ? a.cutoff()
               : a.cutoff() - rational_abs(d) - std::max(d, Rational(0));
    if (cutoff <= 0)
      throw DomainError("cutoff too small to certify the inverse");
    if (cutoff < out.cutoff()) {
      FracNovikov shrunk(out.context(), cutoff);
      for (size_t k = 0; k < j; ++k)
        for (const auto& [e, v] : out.factor(k)) shrunk.add_term(k, e, v);
      out = std::move(shrunk);
    }
    RationalFunction c0inv = c0.inverse();
    if (single) {
      out.add_term(j, -e0, c0inv);
      continue;
    }
    // a_j = u^{e0} c0 (1 + h) with deg h > 0
    std::map<int64_t, RationalFunction> h;
    for (auto it = std::next(m.begin()); it != m.end(); ++it)
      h.emplace(it->first - e0, it->second * c0inv);
    std::map<int64_t, RationalFunction> acc{{0, RationalFunction::from_rational(
                                                    a.context()->factors[j], 1)}};
    std::map<int64_t, RationalFunction> pw = acc;
    auto mul_maps = [&](const std::map<int64_t, RationalFunction>& x,
                        const std::map<int64_t, RationalFunction>& y) {
      std::map<int64_t, RationalFunction> r;
      for (const auto& [e, c] : x)
        for (const auto& [f, dd] : y) {
          if (Rational(e + f) * a.context()->quot_weight() >= cutoff) continue;
          auto it = r.find(e + f);
          if (it == r.end())
            r.emplace(e + f, c * dd);
          else {
            it->second = it->second + (c * dd);
            if (it->second.is_zero()) r.erase(it);
          }
        }
      return r;
    };
    while (true) {
      pw = mul_maps(pw, h);
      for (auto& [e, c] : pw) c = -c;
      if (pw.empty()) break;
      for (const auto& [e, c] : pw) {
        auto it = acc.find(e);
        if (it == acc.end())
          acc.emplace(e, c);
        else {
          it->second = it->second + c;
          if (it->second.is_zero()) acc.erase(it);
        }
      }
    }
    for (const auto& [e, c] : acc) out.add_term(j, e - e0, c * c0inv);
  }
  return out;
}

// The embedding of a fraction num/den of group ring elements, Eq.-style:
// factor den by its leading slice and sum the geometric series.
inline FracNovikov embed_fraction(const GroupRingElement& num,
                                  const GroupRingElement& den,
                                  EmbeddingContextPtr ctx,
                                  const Rational& cutoff) {
  if (den.is_zero()) throw DomainError("embed_fraction: zero denominator");
  FracNovikov d = FracNovikov::from_group_ring(ctx, cutoff, den);
  for (size_t j = 0; j < d.factor_count(); ++j)
    if (d.factor(j).empty())
      throw DomainError(
          "embed_fraction: denominator is a zero divisor (component " +
          std::to_string(j) + " vanishes)");
  FracNovikov n = FracNovikov::from_group_ring(ctx, cutoff, num);
  return n * invert(d);
}

inline FracNovikov exp_series(const FracNovikov& a) {
  auto d = a.min_degree();
  if (d && *d <= 0)
    throw DomainError("exp: not in Nov+ (minimal degree " + rational_str(*d) +
                      ")");
  FracNovikov acc = FracNovikov::one(a.context(), a.cutoff());
  FracNovikov term = acc;
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

inline FracNovikov log_series(const FracNovikov& a) {
  FracNovikov c = a - FracNovikov::one(a.context(), a.cutoff());
  auto d = c.min_degree();
  if (d && *d <= 0)
    throw DomainError("log: not in Nov1 (term of non-positive degree remains)");
  FracNovikov acc(a.context(), a.cutoff());
  FracNovikov pw = FracNovikov::one(a.context(), a.cutoff());
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

// Slice of globally minimal weight, as an element of Q(R[ker N]).
inline FieldSumElement extended_leading_slice(const FracNovikov& a) {
  auto d = a.min_degree();
  if (!d) throw DomainError("leading term of zero");
  FieldSumElement out = field_sum_zero(a.context()->factors);
  for (size_t j = 0; j < a.factor_count(); ++j) {
    const auto& m = a.factor(j);
    if (m.empty()) continue;
    if (a.term_weight(m.begin()->first) == *d)
      out.components[j] = m.begin()->second;
  }
  return out;
}

// Is the series in Nov^1, i.e. equal to 1 + (positive degree)?
inline bool is_nov1(const FracNovikov& a) {
  for (size_t j = 0; j < a.factor_count(); ++j) {
    const auto& m = a.factor(j);
    auto it = m.find(0);
    if (it == m.end() || !it->second.is_one()) return false;
    if (m.begin()->first < 0) return false;
  }
  return true;
}

// Pull a field-sum coefficient back to a group ring element over the kernel
// group; requires every component to be a Laurent polynomial (monomial
// denominator). Components are glued with CRT idempotents on the torsion
// algebra.
inline GroupRingElement pullback_to_kernel_ring(const FieldSumElement& v,
                                                const FgAbelianGroup& ker) {
  GroupRingElement out(ker);
  int64_t m = ker.torsion_orders.empty() ? 1 : ker.torsion_orders[0];
  for (size_t j = 0; j < v.factors.size(); ++j) {
    const RationalFunction& f = v.components[j];
    if (f.is_zero()) continue;
    if (f.den().terms().size() != 1)
      throw DomainError(
          "coefficient is not polynomial in the kernel variables: " +
          rational_function_str(f));
    auto [de, dc] = *f.den().terms().begin();
    Cyclo dcinv = dc.inverse();
    int64_t d = v.factors[j].cyclotomic_index;
    QPoly idem;
    if (m > 1) idem = detail::crt_idempotent(m, d);
    for (const auto& [e, c] : f.num().terms()) {
      Cyclo coeff = c * dcinv;
      std::vector<int64_t> expo(e.size());
      for (size_t i = 0; i < e.size(); ++i) expo[i] = e[i] - de[i];
      if (m == 1) {
        GroupElement g{expo, {}};
        out.add_term(g, coeff.as_rational());
      } else {
        // lift zeta_d -> x, multiply by the idempotent mod x^m - 1
        QPoly xm(static_cast<size_t>(m) + 1, Rational(0));
        xm[0] = -1;
        xm[static_cast<size_t>(m)] = 1;
        QPoly lifted = qpoly_mod(qpoly_mul(idem, coeff.coords()), xm);
        for (size_t r = 0; r < lifted.size(); ++r) {
          if (lifted[r] == 0) continue;
          GroupElement g{expo, {static_cast<int64_t>(r)}};
          out.add_term(g, lifted[r]);
        }
      }
    }
  }
  return out;
}

// Coefficient of the group element A, when it is polynomially extractable.
inline Rational coefficient_at(const FracNovikov& a, const GroupElement& A) {
  auto dec = a.context()->split.decompose(A);
  FieldSumElement slice = field_sum_zero(a.context()->factors);
  bool any = false;
  for (size_t j = 0; j < a.factor_count(); ++j) {
    auto it = a.factor(j).find(dec.quot_exponent);
    if (it != a.factor(j).end()) {
      slice.components[j] = it->second;
      any = true;
    }
  }
  if (!any) return 0;
  GroupRingElement ring =
      pullback_to_kernel_ring(slice, a.context()->split.kernel_group());
  return ring.coeff(dec.kernel_coords);
}

inline std::string frac_novikov_str(const FracNovikov& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  for (size_t j = 0; j < a.factor_count(); ++j) {
    if (a.factor_count() > 1)
      os << (j ? "  (+)  " : "")
         << "[d=" << a.context()->factors[j].cyclotomic_index << "] ";
    bool first = true;
    for (const auto& [e, c] : a.factor(j)) {
      std::string cs = rational_function_str(c);
      if (!first) os << " + ";
      if (e == 0) {
        os << cs;
      } else {
        if (cs != "1") os << "(" << cs << ")*";
        os << "u";
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    if (first) os << "0";
  }
  os << " + O(" << rational_str(a.cutoff()) << ")";
  return os.str();
}

// Canonical representative mod +-(full group): shift the minimal slice to
// quotient exponent 0, strip the kernel-monomial content of the first
// nonzero component, then resolve sign and torsion residue by a
// deterministic key over the finite remaining orbit.
struct NormalizedFracNovikov {
  FracNovikov representative;
  int sign = 1;
  GroupElement unit;  // original = sign * unit * representative
};

inline NormalizedFracNovikov normalize_mod_units(const FracNovikov& a) {
  if (a.is_zero()) throw DomainError("cannot normalize the zero element");
  const auto& ctx = *a.context();
  // quotient shift
  std::optional<int64_t> e0;
  for (size_t j = 0; j < a.factor_count(); ++j)
    if (!a.factor(j).empty()) {
      int64_t e = a.factor(j).begin()->first;
      if (!e0 || (ctx.has_quotient() && e < *e0)) e0 = e;
    }
  // kernel monomial content from the first nonzero component's slice at e0
  FgAbelianGroup ker = ctx.split.kernel_group();
  std::vector<int64_t> gamma(ker.rank, 0);
  for (size_t j = 0; j < a.factor_count(); ++j) {
    auto it = a.factor(j).find(*e0);
    if (it == a.factor(j).end()) continue;
    auto mn = it->second.num().min_exponents();
    auto md = it->second.den().min_exponents();
    for (int i = 0; i < ker.rank; ++i) gamma[i] = mn[i] - md[i];
    break;
  }
  int64_t m = ker.torsion_orders.empty() ? 1 : ker.torsion_orders[0];
  std::optional<NormalizedFracNovikov> best;
  std::string best_key;
  for (int64_t res = 0; res < m; ++res) {
    for (int sign : {1, -1}) {
      GroupElement kc{gamma, {}};
      if (m > 1) kc.tor = {res};
      GroupElement unit = ctx.split.from_coords(reduce_element(ker, kc), *e0);
      FracNovikov rep = a.shifted_by_unit(group_neg(ctx.group, unit), sign);
      std::string key = frac_novikov_str(rep);
      if (!best || key < best_key) {
        best = NormalizedFracNovikov{std::move(rep), sign, std::move(unit)};
        best_key = std::move(key);
      }
    }
  }
  return std::move(*best);
}

}  // namespace ftor
