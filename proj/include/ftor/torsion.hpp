#pragma once

#include <ftor/chain_complex.hpp>
#include <ftor/frac_novikov.hpp>
#include <ftor/rational_function.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ftor {

// ---------------------------------------------------------------------------
// Field abstractions for the torsion engine. A field object provides exact
// arithmetic, a zero test, and inversion of nonzero elements. The series
// "field" is a field only up to its truncation window, which is all the
// contraction needs.
// ---------------------------------------------------------------------------

struct QtField {
  using Elem = RationalFunction;
  FieldFactor fac;

  Elem zero() const { return RationalFunction(fac); }
  Elem one() const { return RationalFunction::from_rational(fac, 1); }
  bool is_zero(const Elem& e) const { return e.is_zero(); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return a.inverse(); }

  Elem det(const Matrix<Elem>& m) const { return det_fraction_free(m); }
};

// One cyclotomic factor of the embedded Novikov ring: truncated series in
// the quotient exponent with coefficients in Q(zeta_d)(s_1..s_k). Inverting
// non-monomial pivots shrinks the certified window; the field tracks it.
struct SeriesField {
  using Elem = std::map<int64_t, RationalFunction>;
  FieldFactor fac;
  Rational quot_weight;  // 0 when the quotient is trivial
  Rational cutoff;
  mutable Rational window;  // certified window, <= cutoff

  SeriesField(FieldFactor f, Rational qw, Rational c)
      : fac(f), quot_weight(std::move(qw)), cutoff(c), window(c) {}

  Elem zero() const { return {}; }
  Elem one() const { return {{0, RationalFunction::from_rational(fac, 1)}}; }
  bool is_zero(const Elem& e) const { return e.empty(); }

  Rational weight_of(int64_t expo) const { return Rational(expo) * quot_weight; }

  void add_to(Elem& r, int64_t e, const RationalFunction& c) const {
    if (c.is_zero() || weight_of(e) >= cutoff) return;
    auto it = r.find(e);
    if (it == r.end()) {
      r.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) r.erase(it);
    }
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (const auto& [e, c] : b) add_to(r, e, c);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (const auto& [e, c] : b) add_to(r, e, -c);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    Elem r;
    for (const auto& [e, c] : a)
      for (const auto& [f, d] : b) add_to(r, e + f, c * d);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& [e, c] : r) c = -c;
    return r;
  }

  Elem inv(const Elem& a) const {
    if (a.empty()) throw DomainError("cannot invert zero series");
    int64_t e0 = a.begin()->first;
    RationalFunction c0inv = a.begin()->second.inverse();
    if (a.size() == 1) return {{-e0, c0inv}};  // exact
    Rational d = weight_of(e0);
    window = std::min(window,
                      cutoff - rational_abs(d) - std::max(d, Rational(0)));
    Elem h;
    for (auto it = std::next(a.begin()); it != a.end(); ++it)
      add_to(h, it->first - e0, it->second * c0inv);
    Elem acc = one();
    Elem pw = one();
    while (true) {
      pw = neg(mul(pw, h));
      if (pw.empty()) break;
      acc = add(acc, pw);
    }
    Elem r;
    for (const auto& [e, c] : acc) add_to(r, e - e0, c * c0inv);
    return r;
  }

  // minimal-degree pivot preference keeps truncation error past the window
  Elem det(const Matrix<Elem>& m) const {
    size_t n = m.size();
    if (n == 0) return one();
    Matrix<Elem> w = m;
    Elem acc = one();
    int sign = 1;
    for (size_t k = 0; k < n; ++k) {
      std::optional<size_t> piv;
      std::optional<Rational> piv_deg;
      for (size_t i = k; i < n; ++i) {
        if (w[i][k].empty()) continue;
        Rational dg = weight_of(w[i][k].begin()->first);
        if (!piv || dg < *piv_deg) {
          piv = i;
          piv_deg = dg;
        }
      }
      if (!piv) return zero();
      if (*piv != k) {
        std::swap(w[*piv], w[k]);
        sign = -sign;
      }
      Elem pinv = inv(w[k][k]);
      for (size_t i = k + 1; i < n; ++i) {
        if (w[i][k].empty()) continue;
        Elem factor = mul(w[i][k], pinv);
        for (size_t j = k; j < n; ++j)
          w[i][j] = sub(w[i][j], mul(factor, w[k][j]));
      }
      acc = mul(acc, w[k][k]);
    }
    if (sign < 0) acc = neg(acc);
    return acc;
  }
};

// ---------------------------------------------------------------------------
// The contraction. For an acyclic based complex choose per degree a
// complement L_k of ker d_k spanned by pivot coordinates; d_k maps L_k
// isomorphically onto ker d_{k-1}, and delta is its inverse there, zero on
// L_{k-1}. Then delta d + d delta = 1, delta^2 = 0, and
// tau = det(d + delta : C_odd -> C_even)^{-1}.
// ---------------------------------------------------------------------------

namespace detail {

template <class F>
struct GaussInfo {
  int rank = 0;
  std::vector<size_t> pivot_cols;
  Matrix<typename F::Elem> kernel;  // kernel basis as columns
};

// Row reduction; the pivot column order may be permuted to draw a
// different (equally valid) contraction.
template <class F>
GaussInfo<F> gauss(const F& f, const Matrix<typename F::Elem>& m, size_t cols,
                   const std::vector<size_t>* col_order = nullptr) {
  size_t rows = m.size();
  Matrix<typename F::Elem> w = m;
  std::vector<size_t> order(cols);
  if (col_order) {
    order = *col_order;
  } else {
    std::iota(order.begin(), order.end(), 0);
  }
  GaussInfo<F> info;
  std::vector<std::optional<size_t>> pivot_row_of_col(cols);
  size_t r = 0;
  for (size_t oc = 0; oc < cols && r < rows; ++oc) {
    size_t c = order[oc];
    size_t piv = r;
    while (piv < rows && f.is_zero(w[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(w[piv], w[r]);
    auto pinv = f.inv(w[r][c]);
    for (size_t j = 0; j < cols; ++j) w[r][j] = f.mul(w[r][j], pinv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(w[i][c])) continue;
      auto factor = w[i][c];
      for (size_t j = 0; j < cols; ++j)
        w[i][j] = f.sub(w[i][j], f.mul(factor, w[r][j]));
    }
    pivot_row_of_col[c] = r;
    info.pivot_cols.push_back(c);
    ++r;
  }
  info.rank = static_cast<int>(r);
  // kernel basis: one column per free column
  for (size_t oc = 0; oc < cols; ++oc) {
    size_t c = order[oc];
    if (pivot_row_of_col[c]) continue;
    std::vector<typename F::Elem> v(cols, f.zero());
    v[c] = f.one();
    for (size_t pc = 0; pc < cols; ++pc)
      if (pivot_row_of_col[pc])
        v[pc] = f.neg(w[*pivot_row_of_col[pc]][c]);
    // store as a column
    if (info.kernel.empty()) info.kernel.assign(cols, {});
    for (size_t i = 0; i < cols; ++i) info.kernel[i].push_back(v[i]);
  }
  return info;
}

// Solve A x = b where A's columns are restricted to `cols`; returns the
// coordinates along those columns. The system must be consistent.
template <class F>
std::vector<typename F::Elem> solve_on_columns(
    const F& f, const Matrix<typename F::Elem>& a,
    const std::vector<size_t>& cols, const std::vector<typename F::Elem>& b) {
  size_t rows = a.size();
  size_t n = cols.size();
  Matrix<typename F::Elem> aug(rows, std::vector<typename F::Elem>(n + 1, f.zero()));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][cols[j]];
    aug[i][n] = b[i];
  }
  std::vector<typename F::Elem> x(n, f.zero());
  size_t r = 0;
  std::vector<std::optional<size_t>> pivot_row(n);
  for (size_t c = 0; c < n && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && f.is_zero(aug[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(aug[piv], aug[r]);
    auto pinv = f.inv(aug[r][c]);
    for (size_t j = 0; j <= n; ++j) aug[r][j] = f.mul(aug[r][j], pinv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(aug[i][c])) continue;
      auto factor = aug[i][c];
      for (size_t j = 0; j <= n; ++j)
        aug[i][j] = f.sub(aug[i][j], f.mul(factor, aug[r][j]));
    }
    pivot_row[c] = r;
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (!f.is_zero(aug[i][n]))
      throw DomainError("inconsistent linear system in contraction");
  for (size_t c = 0; c < n; ++c)
    if (pivot_row[c]) x[c] = aug[*pivot_row[c]][n];
  return x;
}

}  // namespace detail

// Torsion of an acyclic based complex over the field object F, defined up
// to sign: returns det(d + delta : C_odd -> C_even)^{-1}, or nullopt when
// the complex is not acyclic. `rng` draws a different pivot order (hence a
// different contraction) when provided.
// Z grading: boundaries[i-1] = d_i, i = 1..n. Z/2: {d_1, d_0} cyclic.
template <class F>
std::optional<typename F::Elem> torsion_over_field(
    const F& f, Grading grading, const std::vector<int>& ranks,
    const std::vector<Matrix<typename F::Elem>>& boundaries,
    std::mt19937_64* rng = nullptr) {
  using Elem = typename F::Elem;
  size_t ndeg = ranks.size();

  // boundary out of degree k (empty matrix when none)
  auto boundary_out = [&](size_t k) -> const Matrix<Elem>* {
    if (grading == Grading::Z)
      return k >= 1 ? &boundaries[k - 1] : nullptr;
    return k == 1 ? &boundaries[0] : &boundaries[1];
  };
  auto rank_of = [&](size_t k) { return static_cast<size_t>(ranks[k]); };

  auto draw_order = [&](size_t cols) {
    std::vector<size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    return order;
  };

  // per-degree elimination data for the outgoing boundary
  std::vector<detail::GaussInfo<F>> info(ndeg);
  for (size_t k = 0; k < ndeg; ++k) {
    const Matrix<Elem>* d = boundary_out(k);
    if (d == nullptr || rank_of(k) == 0) {
      info[k].rank = 0;
      continue;
    }
    auto order = draw_order(rank_of(k));
    info[k] = detail::gauss(f, *d, rank_of(k), rng ? &order : nullptr);
  }

  // acyclicity by rank count
  auto rank_out = [&](size_t k) -> int { return info[k].rank; };
  auto rank_in = [&](size_t k) -> int {  // rank of the boundary landing in k
    if (grading == Grading::Z) return k + 1 < ndeg ? info[k + 1].rank : 0;
    return info[1 - k].rank;
  };
  for (size_t k = 0; k < ndeg; ++k)
    if (rank_out(k) + rank_in(k) != static_cast<int>(rank_of(k)))
      return std::nullopt;

  // delta out of degree k-1 into degree k is assembled column by column:
  // split e_j into kernel + pivot parts, then solve d_k gamma = kernel part
  // on the pivot columns of degree k.
  auto delta_into = [&](size_t k_from, size_t k_to) -> Matrix<Elem> {
    size_t nfrom = rank_of(k_from);
    size_t nto = rank_of(k_to);
    Matrix<Elem> delta(nto, std::vector<Elem>(nfrom, f.zero()));
    if (nfrom == 0 || nto == 0) return delta;
    const Matrix<Elem>* d = boundary_out(k_to);  // d_k : C_k -> C_{k-1}
    const auto& from_info = info[k_from];
    const auto& to_info = info[k_to];
    size_t nker = nfrom - from_info.pivot_cols.size();
    for (size_t j = 0; j < nfrom; ++j) {
      // e_j = kernel part + pivot-coordinate part in degree k_from
      std::vector<Elem> ej(nfrom, f.zero());
      ej[j] = f.one();
      std::vector<Elem> kpart;
      if (nker == 0) {
        kpart.assign(nfrom, f.zero());
      } else {
        // solve [KerBasis | E_pivot] (alpha; beta) = e_j
        Matrix<Elem> basis(nfrom, std::vector<Elem>(nfrom, f.zero()));
        for (size_t i = 0; i < nfrom; ++i)
          for (size_t c = 0; c < nker; ++c) basis[i][c] = from_info.kernel[i][c];
        for (size_t c = 0; c < from_info.pivot_cols.size(); ++c)
          basis[from_info.pivot_cols[c]][nker + c] = f.one();
        std::vector<size_t> all(nfrom);
        std::iota(all.begin(), all.end(), 0);
        auto coords = detail::solve_on_columns(f, basis, all, ej);
        kpart.assign(nfrom, f.zero());
        for (size_t i = 0; i < nfrom; ++i)
          for (size_t c = 0; c < nker; ++c)
            kpart[i] = f.add(kpart[i], f.mul(from_info.kernel[i][c], coords[c]));
      }
      bool kzero = std::all_of(kpart.begin(), kpart.end(),
                               [&](const Elem& e) { return f.is_zero(e); });
      if (kzero) continue;
      auto gamma = detail::solve_on_columns(f, *d, to_info.pivot_cols, kpart);
      for (size_t c = 0; c < to_info.pivot_cols.size(); ++c)
        delta[to_info.pivot_cols[c]][j] = gamma[c];
    }
    return delta;
  };

  // assemble (d + delta) : C_odd -> C_even
  std::vector<size_t> odd_deg, even_deg;
  for (size_t k = 0; k < ndeg; ++k)
    (k % 2 ? odd_deg : even_deg).push_back(k);
  size_t nodd = 0, neven = 0;
  std::vector<size_t> odd_off(ndeg, 0), even_off(ndeg, 0);
  for (size_t k : odd_deg) {
    odd_off[k] = nodd;
    nodd += rank_of(k);
  }
  for (size_t k : even_deg) {
    even_off[k] = neven;
    neven += rank_of(k);
  }
  if (nodd != neven) return std::nullopt;
  if (nodd == 0) return f.one();  // empty complex: tau = 1

  Matrix<Elem> big(neven, std::vector<Elem>(nodd, f.zero()));
  for (size_t k : odd_deg) {
    if (rank_of(k) == 0) continue;
    // boundary part lands in degree k-1 (Z) / the other parity (Z2)
    const Matrix<Elem>* d = boundary_out(k);
    if (d) {
      size_t kd = (grading == Grading::Z) ? k - 1 : 0;
      for (size_t i = 0; i < d->size(); ++i)
        for (size_t j = 0; j < (*d)[i].size(); ++j)
          big[even_off[kd] + i][odd_off[k] + j] = (*d)[i][j];
    }
    // delta part lands in degree k+1 (Z) / the other parity (Z2)
    std::optional<size_t> kup;
    if (grading == Grading::Z) {
      if (k + 1 < ndeg) kup = k + 1;
    } else {
      kup = 0;  // Z2: delta out of C_1 lands in C_0
    }
    if (kup && rank_of(*kup) > 0) {
      Matrix<Elem> delta = delta_into(k, *kup);
      size_t off = (grading == Grading::Z) ? even_off[*kup] : even_off[0];
      for (size_t i = 0; i < delta.size(); ++i)
        for (size_t j = 0; j < delta[i].size(); ++j)
          big[off + i][odd_off[k] + j] =
              f.add(big[off + i][odd_off[k] + j], delta[i][j]);
    }
  }

  Elem det = f.det(big);
  if (f.is_zero(det))
    throw DomainError("contraction determinant vanished unexpectedly");
  return f.inv(det);
}

// ---------------------------------------------------------------------------
// Turaev assembly over Q(R) and normal forms
// ---------------------------------------------------------------------------

// Reidemeister torsion value: one component per field factor of Q(R), zero
// where the factor complex is not acyclic ("0 otherwise").
struct TorsionValue {
  FgAbelianGroup group;
  FieldSumElement value;        // normalized representative
  UnitGroup units = UnitGroup::plus_minus_G;
  int sign = 1;                 // raw = sign * unit * value
  GroupElement unit;

  bool is_zero() const { return value.is_zero(); }
};

namespace detail {

inline std::string field_sum_key(const FieldSumElement& v) {
  return field_sum_str(v);
}

// Canonical representative of v mod +-(monomials of G): strip the free
// monomial content of the first nonzero component, then resolve sign and
// torsion residue deterministically over the finite remaining orbit.
inline void normalize_field_sum(const FgAbelianGroup& g, FieldSumElement& v,
                                int& sign_out, GroupElement& unit_out) {
  sign_out = 1;
  unit_out = group_identity(g);
  if (v.is_zero()) return;
  size_t j0 = 0;
  while (v.components[j0].is_zero()) ++j0;
  std::vector<int64_t> gamma(g.rank, 0);
  {
    const auto& f = v.components[j0];
    auto mn = f.num().min_exponents();
    auto md = f.den().min_exponents();
    for (int i = 0; i < g.rank; ++i) gamma[i] = mn[i] - md[i];
  }
  int64_t m = g.torsion_orders.empty() ? 1 : g.torsion_orders[0];
  std::optional<FieldSumElement> best;
  std::string best_key;
  int best_sign = 1;
  GroupElement best_unit;
  for (int64_t res = 0; res < m; ++res) {
    for (int sign : {1, -1}) {
      GroupElement unit = group_identity(g);
      unit.free = gamma;
      if (m > 1) unit.tor = {res};
      unit = reduce_element(g, unit);
      FieldSumElement cand = v;
      for (size_t j = 0; j < v.factors.size(); ++j) {
        if (cand.components[j].is_zero()) continue;
        std::vector<int64_t> neg(gamma.size());
        for (size_t i = 0; i < gamma.size(); ++i) neg[i] = -gamma[i];
        Cyclo coeff(v.factors[j].cyclotomic_index, sign);
        if (m > 1)
          coeff = coeff * Cyclo::zeta_power(v.factors[j].cyclotomic_index, -res);
        cand.components[j] =
            cand.components[j] * laurent_monomial(v.factors[j], neg, coeff);
      }
      std::string key = field_sum_key(cand);
      if (!best || key < best_key) {
        best = std::move(cand);
        best_key = std::move(key);
        best_sign = sign;
        best_unit = unit;
      }
    }
  }
  v = std::move(*best);
  sign_out = best_sign;
  unit_out = best_unit;
}

}  // namespace detail

// tau(C, e) = sum_j tau(C (x) F_j) in (+)_j F_j = Q(R), normalized mod +-G.
inline TorsionValue reidemeister_torsion(
    const BasedChainComplex<GroupRingElement>& c, const FgAbelianGroup& group,
    std::mt19937_64* rng = nullptr) {
  auto factors = decompose(group);
  TorsionValue out;
  out.group = group;
  out.value = field_sum_zero(factors);
  for (size_t j = 0; j < factors.size(); ++j) {
    QtField f{factors[j]};
    std::vector<Matrix<RationalFunction>> bnd;
    for (const auto& mat : c.boundaries()) {
      Matrix<RationalFunction> pm;
      for (const auto& row : mat) {
        std::vector<RationalFunction> prow;
        for (const auto& e : row)
          prow.push_back(project(e).components[j]);
        pm.push_back(std::move(prow));
      }
      bnd.push_back(std::move(pm));
    }
    auto tau = torsion_over_field(f, c.grading(), c.ranks(), bnd, rng);
    if (tau) out.value.components[j] = *tau;
  }
  detail::normalize_field_sum(group, out.value, out.sign, out.unit);
  return out;
}

// Manifold torsion: the complex of the universal abelian cover with a basis
// of cell lifts, over Z[H_1].
inline TorsionValue manifold_torsion(const BasedChainComplex<GroupRingElement>& c,
                                     const FgAbelianGroup& h1) {
  return reidemeister_torsion(c, h1);
}

// Floer torsion value: a truncated series over the quotient with
// coefficients in Q(Q[ker N]), normalized mod +-(ker psi), or zero.
struct FloerTorsion {
  std::optional<NormalizedFracNovikov> value;  // nullopt = the 0 marker
  EmbeddingContextPtr ctx;
  Rational certified;  // honest comparison window

  bool is_zero() const { return !value.has_value(); }
};

// tau_F of a Z/2-graded complex over Lambda_F = Nov(ker psi, N), computed
// through the embedding, one cyclotomic factor at a time. The empty complex
// gives exactly 1.
inline FloerTorsion floer_torsion(const BasedChainComplex<NovikovSeries>& c,
                                  EmbeddingContextPtr ctx,
                                  const Rational& cutoff,
                                  std::mt19937_64* rng = nullptr) {
  Rational work = cutoff;  // never claim beyond what the entries certify
  for (const auto& mat : c.boundaries())
    for (const auto& row : mat)
      for (const auto& e : row) work = std::min(work, e.cutoff());
  FloerTorsion out;
  out.ctx = ctx;
  out.certified = work;
  FracNovikov acc(ctx, work);
  for (size_t j = 0; j < ctx->factors.size(); ++j) {
    SeriesField f(ctx->factors[j], ctx->split.quotient_weight(), work);
    std::vector<Matrix<SeriesField::Elem>> bnd;
    for (const auto& mat : c.boundaries()) {
      Matrix<SeriesField::Elem> pm;
      for (const auto& row : mat) {
        std::vector<SeriesField::Elem> prow;
        for (const auto& e : row) {
          FracNovikov fe = FracNovikov::from_series(ctx, e);
          prow.push_back(fe.factor(j));
        }
        pm.push_back(std::move(prow));
      }
      bnd.push_back(std::move(pm));
    }
    auto tau = torsion_over_field(f, c.grading(), c.ranks(), bnd, rng);
    out.certified = std::min(out.certified, f.window);
    if (!tau) continue;  // this factor contributes the component 0
    for (const auto& [e, v] : *tau) acc.add_term(j, e, v);
  }
  if (acc.is_zero()) return out;  // the 0 marker
  out.value = normalize_mod_units(acc);
  return out;
}

inline std::string torsion_value_str(const TorsionValue& t) {
  if (t.is_zero()) return "0";
  return field_sum_str(t.value);
}

}  // namespace ftor
