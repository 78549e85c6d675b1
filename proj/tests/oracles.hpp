#pragma once

// Test-only independent oracles. These must stay independent of the
// implementation paths they check: the subset-minor torsion enumerates all
// valid subset families and multiplies minors, the long-division expander
// divides power series term by term.

#include <ftor/rational_function.hpp>
#include <ftor/torsion.hpp>

#include <optional>
#include <vector>

namespace oracle {

using namespace ftor;

// All size-k subsets of {0..n-1}.
inline std::vector<std::vector<size_t>> subsets(size_t n, size_t k) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i + (k - cur.size()) <= n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Textbook alternating product of minors for an acyclic Z-graded based
// complex over one rational-function field: choose per degree a subset E_i
// of the basis with |E_i| = rank d_i; with M_i the submatrix of d_i on rows
// not in E_{i-1} and columns E_i, tau = prod_i det(M_i)^{(-1)^i} whenever
// every M_i is invertible. All valid subset families must agree up to sign.
inline std::vector<RationalFunction> subset_minor_torsions(
    const QtField& f, const std::vector<int>& ranks,
    const std::vector<Matrix<RationalFunction>>& boundaries,
    size_t max_families = 16) {
  size_t n = ranks.size();
  std::vector<int> rho(n + 1, 0);  // rank of d_i, i = 1..n-1 indexes shift
  for (size_t i = 1; i < n; ++i) {
    auto info = detail::gauss(f, boundaries[i - 1], ranks[i]);
    rho[i] = info.rank;
  }
  // acyclicity: rho_i + rho_{i+1} == r_i
  for (size_t i = 0; i < n; ++i)
    if (rho[i] + rho[i + 1] != ranks[i]) return {};

  std::vector<std::vector<std::vector<size_t>>> choices(n);
  for (size_t i = 0; i < n; ++i)
    choices[i] = subsets(ranks[i], rho[i]);

  std::vector<RationalFunction> values;
  std::vector<size_t> pick(n, 0);
  std::function<void(size_t)> rec = [&](size_t deg) {
    if (values.size() >= max_families) return;
    if (deg == n) {
      RationalFunction tau = RationalFunction::from_rational(f.fac, 1);
      for (size_t i = 1; i < n; ++i) {
        const auto& cols = choices[i][pick[i]];
        const auto& prev = choices[i - 1][pick[i - 1]];
        std::vector<size_t> rows;
        for (int r = 0; r < ranks[i - 1]; ++r)
          if (std::find(prev.begin(), prev.end(), static_cast<size_t>(r)) ==
              prev.end())
            rows.push_back(r);
        if (rows.size() != cols.size()) return;
        Matrix<RationalFunction> sub(rows.size(),
                                     std::vector<RationalFunction>(cols.size()));
        for (size_t a = 0; a < rows.size(); ++a)
          for (size_t b = 0; b < cols.size(); ++b)
            sub[a][b] = boundaries[i - 1][rows[a]][cols[b]];
        RationalFunction d = det_fraction_free(sub);
        if (d.is_zero()) return;  // this family is not admissible
        tau = (i % 2 == 1) ? tau / d : tau * d;
      }
      values.push_back(tau);
      return;
    }
    for (size_t c = 0; c < choices[deg].size(); ++c) {
      pick[deg] = c;
      rec(deg + 1);
      if (values.size() >= max_families) return;
    }
  };
  rec(0);
  return values;
}

// Power-series expansion of num/den over Q up to degree < cutoff, by long
// division on the lowest coefficients. den's lowest coefficient must be
// nonzero after dropping the common t-power.
inline std::vector<Rational> series_by_long_division(std::vector<Rational> num,
                                                     std::vector<Rational> den,
                                                     int cutoff) {
  size_t shift_n = 0, shift_d = 0;
  while (shift_n < num.size() && num[shift_n] == 0) ++shift_n;
  while (shift_d < den.size() && den[shift_d] == 0) ++shift_d;
  if (shift_d == den.size()) throw std::runtime_error("zero denominator");
  if (shift_d > shift_n) throw std::runtime_error("negative-degree expansion");
  num.erase(num.begin(), num.begin() + shift_d);
  den.erase(den.begin(), den.begin() + shift_d);
  std::vector<Rational> out(cutoff, Rational(0));
  for (int k = 0; k < cutoff; ++k) {
    Rational c = k < static_cast<int>(num.size()) ? num[k] : Rational(0);
    for (int i = 1; i <= k && i < static_cast<int>(den.size()); ++i)
      c -= den[i] * out[k - i];
    out[k] = c / den[0];
  }
  return out;
}

}  // namespace oracle
