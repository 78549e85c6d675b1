#pragma once

#include <ftor/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace ftor {

using IntMat = std::vector<std::vector<Int>>;

inline IntMat int_identity(size_t n) {
  IntMat m(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat int_mul(const IntMat& a, const IntMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMat r(n, std::vector<Int>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

// Exact integer determinant (Bareiss).
inline Int int_det(IntMat m) {
  size_t n = m.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct SmithResult {
  IntMat U, D, V;  // U*M*V = D, U and V unimodular, D diagonal with d_i | d_{i+1}
};

// Smith normal form by repeated pivoting on the minimal nonzero entry.
// Intended for desk-scale matrices (everything here is <= ~8x8).
inline SmithResult smith_normal_form(const IntMat& M) {
  size_t rows = M.size();
  size_t cols = rows ? M[0].size() : 0;
  SmithResult res{int_identity(rows), M, int_identity(cols)};
  IntMat& D = res.D;
  IntMat& U = res.U;
  IntMat& V = res.V;

  auto swap_rows = [&](size_t a, size_t b) {
    std::swap(D[a], D[b]);
    std::swap(U[a], U[b]);
  };
  auto swap_cols = [&](size_t a, size_t b) {
    for (size_t i = 0; i < rows; ++i) std::swap(D[i][a], D[i][b]);
    for (size_t i = 0; i < cols; ++i) std::swap(V[i][a], V[i][b]);
  };
  auto add_row = [&](size_t dst, size_t src, const Int& c) {
    for (size_t j = 0; j < cols; ++j) D[dst][j] += c * D[src][j];
    for (size_t j = 0; j < rows; ++j) U[dst][j] += c * U[src][j];
  };
  auto add_col = [&](size_t dst, size_t src, const Int& c) {
    for (size_t i = 0; i < rows; ++i) D[i][dst] += c * D[i][src];
    for (size_t i = 0; i < cols; ++i) V[i][dst] += c * V[i][src];
  };
  auto negate_row = [&](size_t r) {
    for (auto& x : D[r]) x = -x;
    for (auto& x : U[r]) x = -x;
  };

  size_t t = 0;
  size_t lim = std::min(rows, cols);
  while (t < lim) {
    // locate minimal-|.|  nonzero pivot in the trailing block
    std::optional<std::pair<size_t, size_t>> piv;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (D[i][j] != 0 &&
            (!piv || abs(D[i][j]) < abs(D[piv->first][piv->second])))
          piv = {{i, j}};
    if (!piv) break;
    swap_rows(t, piv->first);
    swap_cols(t, piv->second);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (size_t i = t + 1; i < rows; ++i) {
        if (D[i][t] == 0) continue;
        Int q = D[i][t] / D[t][t];
        add_row(i, t, -q);
        if (D[i][t] != 0) {  // remainder smaller than pivot: promote it
          swap_rows(t, i);
          dirty = true;
        }
      }
      for (size_t j = t + 1; j < cols; ++j) {
        if (D[t][j] == 0) continue;
        Int q = D[t][j] / D[t][t];
        add_col(j, t, -q);
        if (D[t][j] != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
    }
    if (D[t][t] < 0) negate_row(t);
    ++t;
  }

  // enforce the divisibility chain d_i | d_{i+1}
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < lim; ++i) {
      const Int& a = D[i][i];
      const Int& b = D[i + 1][i + 1];
      if (a == 0 && b != 0) {  // move zeros to the end
        swap_rows(i, i + 1);
        swap_cols(i, i + 1);
        changed = true;
        continue;
      }
      if (a != 0 && b % a != 0) {
        add_col(i, i + 1, 1);  // puts b into position (i+1, i)
        // re-diagonalize the 2x2 block with gcd pivoting
        Int x = D[i][i], y = D[i + 1][i];
        while (y != 0) {
          Int q = x / y;
          add_row(i, i + 1, -q);
          std::swap(D[i], D[i + 1]);
          std::swap(U[i], U[i + 1]);
          x = D[i][i];
          y = D[i + 1][i];
        }
        // clear the off-diagonal remains in row i / row i+1
        if (D[i][i] != 0) {
          Int q = D[i][i + 1] / D[i][i];
          add_col(i + 1, i, -q);
        }
        if (D[i][i] < 0) negate_row(i);
        if (D[i + 1][i + 1] < 0) negate_row(i + 1);
        changed = true;
      }
    }
  }
  return res;
}

// G = Z^rank (+) Z/m_1 (+) ... in invariant-factor form (m_1 | m_2 | ...).
struct FgAbelianGroup {
  int rank = 0;
  std::vector<int64_t> torsion_orders;

  FgAbelianGroup() = default;
  FgAbelianGroup(int r, std::vector<int64_t> tor = {})
      : rank(r), torsion_orders(std::move(tor)) {
    for (size_t i = 0; i < torsion_orders.size(); ++i) {
      if (torsion_orders[i] < 2)
        throw InputError("torsion orders must be >= 2");
      if (i > 0 && torsion_orders[i] % torsion_orders[i - 1] != 0)
        throw InputError("torsion orders must form a divisibility chain");
    }
  }

  bool is_trivial() const { return rank == 0 && torsion_orders.empty(); }
  friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;
};

struct GroupElement {
  std::vector<int64_t> free;  // length = rank
  std::vector<int64_t> tor;   // length = #torsion_orders, each in [0, m_i)

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement& a, const GroupElement& b) {
    if (auto c = a.free <=> b.free; c != 0) return c;
    return a.tor <=> b.tor;
  }
};

inline GroupElement group_identity(const FgAbelianGroup& g) {
  return GroupElement{std::vector<int64_t>(g.rank, 0),
                      std::vector<int64_t>(g.torsion_orders.size(), 0)};
}

inline void check_element(const FgAbelianGroup& g, const GroupElement& e) {
  if (e.free.size() != static_cast<size_t>(g.rank) ||
      e.tor.size() != g.torsion_orders.size())
    throw InputError("group element has wrong shape for its group");
}

inline GroupElement reduce_element(const FgAbelianGroup& g, GroupElement e) {
  check_element(g, e);
  for (size_t i = 0; i < e.tor.size(); ++i) {
    int64_t m = g.torsion_orders[i];
    e.tor[i] %= m;
    if (e.tor[i] < 0) e.tor[i] += m;
  }
  return e;
}

inline GroupElement group_add(const FgAbelianGroup& g, const GroupElement& a,
                              const GroupElement& b) {
  GroupElement r = a;
  for (int i = 0; i < g.rank; ++i) r.free[i] += b.free[i];
  for (size_t i = 0; i < r.tor.size(); ++i) r.tor[i] += b.tor[i];
  return reduce_element(g, r);
}

inline GroupElement group_neg(const FgAbelianGroup& g, const GroupElement& a) {
  GroupElement r = a;
  for (auto& x : r.free) x = -x;
  for (auto& x : r.tor) x = -x;
  return reduce_element(g, r);
}

inline GroupElement group_sub(const FgAbelianGroup& g, const GroupElement& a,
                              const GroupElement& b) {
  return group_add(g, a, group_neg(g, b));
}

inline GroupElement group_scale(const FgAbelianGroup& g, int64_t n,
                                const GroupElement& a) {
  GroupElement r = a;
  for (auto& x : r.free) x *= n;
  for (auto& x : r.tor) x *= n;
  return reduce_element(g, r);
}

inline bool is_torsion_element(const FgAbelianGroup& g, const GroupElement& e) {
  check_element(g, e);
  return std::all_of(e.free.begin(), e.free.end(),
                     [](int64_t x) { return x == 0; });
}

// A homomorphism N : G -> R with rational values on the free generators.
// Torsion is killed automatically (any homomorphism to R does so).
struct Weight {
  std::vector<Rational> free_weights;

  Weight() = default;
  explicit Weight(std::vector<Rational> w) : free_weights(std::move(w)) {}

  Rational eval(const GroupElement& e) const {
    if (e.free.size() != free_weights.size())
      throw InputError("weight/element rank mismatch");
    Rational s = 0;
    for (size_t i = 0; i < free_weights.size(); ++i)
      s += free_weights[i] * e.free[i];
    return s;
  }

  bool is_zero() const {
    return std::all_of(free_weights.begin(), free_weights.end(),
                       [](const Rational& w) { return w == 0; });
  }

  Weight negated() const {
    Weight w = *this;
    for (auto& x : w.free_weights) x = -x;
    return w;
  }

  friend bool operator==(const Weight&, const Weight&) = default;
};

// A splitting G = ker N (+) G/ker N. The quotient is free of rank 0 or 1
// (N is a single homomorphism to R). Torsion always lies in the kernel.
class Splitting {
 public:
  Splitting() = default;

  Splitting(const FgAbelianGroup& g, const Weight& n) : group_(g), weight_(n) {
    if (n.free_weights.size() != static_cast<size_t>(g.rank))
      throw InputError("weight rank does not match group rank");
    size_t r = static_cast<size_t>(g.rank);
    // primitive integer vector proportional to N on the free part
    std::vector<Int> nv(r, 0);
    Int lcm_den = 1;
    for (const auto& w : n.free_weights)
      lcm_den = lcm(lcm_den, denominator(w));
    Int g_all = 0;
    for (size_t i = 0; i < r; ++i) {
      nv[i] = numerator(n.free_weights[i]) * (lcm_den / denominator(n.free_weights[i]));
      g_all = gcd(g_all, nv[i]);
    }
    if (g_all != 0)
      for (auto& x : nv) x /= g_all;

    bool zero = (g_all == 0);
    if (r == 0 || zero) {
      basis_ = int_identity(r);
      basis_inv_ = int_identity(r);
      has_quotient_ = false;
      quot_weight_ = 0;
    } else {
      IntMat nm(1, std::vector<Int>(r));
      for (size_t i = 0; i < r; ++i) nm[0][i] = nv[i];
      SmithResult s = smith_normal_form(nm);
      // n * V = U^{-1} * [d, 0, ..]; column 0 of V has n*v0 = +-d != 0
      basis_ = s.V;
      has_quotient_ = true;
      // orient the complement generator to positive weight
      Rational w0 = 0;
      for (size_t i = 0; i < r; ++i) w0 += n.free_weights[i] * Rational(basis_[i][0]);
      if (w0 < 0) {
        for (size_t i = 0; i < r; ++i) basis_[i][0] = -basis_[i][0];
        w0 = -w0;
      }
      quot_weight_ = w0;
      basis_inv_ = unimodular_inverse(basis_);
    }
  }

  const FgAbelianGroup& group() const { return group_; }
  const Weight& weight() const { return weight_; }
  bool has_quotient() const { return has_quotient_; }
  int quotient_rank() const { return has_quotient_ ? 1 : 0; }

  // N evaluated on the complement generator; > 0 when a quotient exists.
  const Rational& quotient_weight() const { return quot_weight_; }

  FgAbelianGroup kernel_group() const {
    return FgAbelianGroup(group_.rank - quotient_rank(), group_.torsion_orders);
  }

  // Basis of ker N in G coordinates: free kernel vectors, then torsion gens.
  std::vector<GroupElement> kernel_basis() const {
    std::vector<GroupElement> out;
    size_t r = static_cast<size_t>(group_.rank);
    for (size_t j = (has_quotient_ ? 1 : 0); j < r; ++j)
      out.push_back(column_element(j));
    for (size_t i = 0; i < group_.torsion_orders.size(); ++i) {
      GroupElement e = group_identity(group_);
      e.tor[i] = 1;
      out.push_back(e);
    }
    return out;
  }

  std::vector<GroupElement> complement_basis() const {
    std::vector<GroupElement> out;
    if (has_quotient_) out.push_back(column_element(0));
    return out;
  }

  struct Decomposition {
    GroupElement kernel_part;      // in G coordinates
    GroupElement complement_part;  // in G coordinates
    GroupElement kernel_coords;    // in kernel_group() coordinates
    int64_t quot_exponent = 0;     // coordinate along the complement
  };

  Decomposition decompose(const GroupElement& e) const {
    check_element(group_, e);
    size_t r = static_cast<size_t>(group_.rank);
    std::vector<int64_t> a(r, 0);
    for (size_t i = 0; i < r; ++i) {
      Int s = 0;
      for (size_t j = 0; j < r; ++j) s += basis_inv_[i][j] * e.free[j];
      a[i] = static_cast<int64_t>(s);
    }
    Decomposition d;
    d.quot_exponent = has_quotient_ ? a[0] : 0;
    d.kernel_coords.free.assign(a.begin() + (has_quotient_ ? 1 : 0), a.end());
    d.kernel_coords.tor = e.tor;
    d.complement_part = group_identity(group_);
    if (has_quotient_) {
      for (size_t i = 0; i < r; ++i)
        d.complement_part.free[i] = static_cast<int64_t>(Int(basis_[i][0]) * a[0]);
    }
    d.kernel_part = group_sub(group_, e, d.complement_part);
    return d;
  }

  GroupElement recompose(const Decomposition& d) const {
    return group_add(group_, d.kernel_part, d.complement_part);
  }

  // Inverse of decompose on coordinates.
  GroupElement from_coords(const GroupElement& kernel_coords,
                           int64_t quot_exponent) const {
    size_t r = static_cast<size_t>(group_.rank);
    std::vector<int64_t> a(r, 0);
    size_t off = has_quotient_ ? 1 : 0;
    if (has_quotient_) a[0] = quot_exponent;
    for (size_t i = off; i < r; ++i) a[i] = kernel_coords.free[i - off];
    GroupElement e = group_identity(group_);
    for (size_t i = 0; i < r; ++i) {
      Int s = 0;
      for (size_t j = 0; j < r; ++j) s += basis_[i][j] * a[j];
      e.free[i] = static_cast<int64_t>(s);
    }
    e.tor = kernel_coords.tor;
    return reduce_element(group_, e);
  }

 private:
  static IntMat unimodular_inverse(const IntMat& m) {
    size_t n = m.size();
    Int det = int_det(m);
    if (det != 1 && det != -1)
      throw DomainError("matrix is not unimodular");
    // adjugate / det, exact
    IntMat inv(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        IntMat minor;
        for (size_t a = 0; a < n; ++a) {
          if (a == j) continue;
          std::vector<Int> row;
          for (size_t b = 0; b < n; ++b)
            if (b != i) row.push_back(m[a][b]);
          minor.push_back(std::move(row));
        }
        Int c = int_det(minor);
        if ((i + j) % 2 == 1) c = -c;
        inv[i][j] = c / det;
      }
    return inv;
  }

  GroupElement column_element(size_t j) const {
    GroupElement e = group_identity(group_);
    for (size_t i = 0; i < static_cast<size_t>(group_.rank); ++i)
      e.free[i] = static_cast<int64_t>(basis_[i][j]);
    return e;
  }

  FgAbelianGroup group_;
  Weight weight_;
  IntMat basis_;      // columns: complement gen (if any), then kernel gens
  IntMat basis_inv_;
  bool has_quotient_ = false;
  Rational quot_weight_ = 0;
};

inline Splitting kernel_and_splitting(const FgAbelianGroup& g, const Weight& n) {
  return Splitting(g, n);
}

// Invariant-factor presentation of Z^rows / M Z^cols.
inline FgAbelianGroup coker(const IntMat& m) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  SmithResult s = smith_normal_form(m);
  int rank = 0;
  std::vector<int64_t> tor;
  size_t lim = std::min(rows, cols);
  for (size_t i = 0; i < lim; ++i) {
    const Int& d = s.D[i][i];
    if (d == 0)
      ++rank;
    else if (d > 1)
      tor.push_back(static_cast<int64_t>(d));
  }
  rank += static_cast<int>(rows - lim);
  return FgAbelianGroup(rank, tor);
}

}  // namespace ftor
