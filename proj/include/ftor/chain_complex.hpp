#pragma once

#include <ftor/group_ring.hpp>
#include <ftor/novikov.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ftor {

enum class Grading { Z, Z2 };

template <class Elem>
using Matrix = std::vector<std::vector<Elem>>;

// Based free chain complex over a group ring or a Novikov ring.
//
// Z grading: ranks r_0..r_n, boundaries[i-1] is the matrix of
// d_i : C_i -> C_{i-1} (r_{i-1} x r_i), for i = 1..n.
// Z/2 grading: ranks {r_0, r_1}, boundaries[0] = d_1 : C_1 -> C_0 and
// boundaries[1] = d_0 : C_0 -> C_1 (the grading is cyclic).
//
// d o d = 0 is checked at construction (up to cutoff for Novikov entries).
template <class Elem>
class BasedChainComplex {
 public:
  BasedChainComplex(Grading grading, std::vector<int> ranks,
                    std::vector<Matrix<Elem>> boundaries,
                    std::vector<std::vector<std::string>> labels = {})
      : grading_(grading),
        ranks_(std::move(ranks)),
        boundaries_(std::move(boundaries)),
        labels_(std::move(labels)) {
    validate();
  }

  Grading grading() const { return grading_; }
  const std::vector<int>& ranks() const { return ranks_; }
  const std::vector<Matrix<Elem>>& boundaries() const { return boundaries_; }
  const std::vector<std::vector<std::string>>& labels() const { return labels_; }

  int total_rank() const {
    int t = 0;
    for (int r : ranks_) t += r;
    return t;
  }

 private:
  void validate() const {
    if (grading_ == Grading::Z) {
      if (ranks_.empty()) throw InputError("complex needs at least one degree");
      if (boundaries_.size() + 1 != ranks_.size())
        throw InputError("Z-graded complex needs one boundary per degree pair");
      for (size_t i = 0; i < boundaries_.size(); ++i)
        check_shape(boundaries_[i], ranks_[i], ranks_[i + 1]);
      for (size_t i = 0; i + 1 < boundaries_.size(); ++i)
        check_square_zero(boundaries_[i], boundaries_[i + 1]);
    } else {
      if (ranks_.size() != 2 || boundaries_.size() != 2)
        throw InputError("Z/2-graded complex needs two ranks and two boundaries");
      check_shape(boundaries_[0], ranks_[0], ranks_[1]);  // d1: C1 -> C0
      check_shape(boundaries_[1], ranks_[1], ranks_[0]);  // d0: C0 -> C1
      check_square_zero(boundaries_[0], boundaries_[1]);
      check_square_zero(boundaries_[1], boundaries_[0]);
    }
    if (!labels_.empty() && labels_.size() != ranks_.size())
      throw InputError("label blocks must match the number of degrees");
  }

  static void check_shape(const Matrix<Elem>& m, int rows, int cols) {
    if (static_cast<int>(m.size()) != rows)
      throw InputError("boundary matrix has wrong row count");
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != cols)
        throw InputError("boundary matrix has wrong column count");
  }

  // first o second = 0
  static void check_square_zero(const Matrix<Elem>& first,
                                const Matrix<Elem>& second) {
    size_t rows = first.size();
    size_t mid = second.size();
    size_t cols = mid ? second[0].size() : 0;
    if (rows == 0 || mid == 0 || cols == 0) return;
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) {
        std::optional<Elem> acc;
        for (size_t k = 0; k < mid; ++k) {
          Elem prod = first[i][k] * second[k][j];
          acc = acc ? *acc + prod : prod;
        }
        if (acc && !acc->is_zero())
          throw InputError("boundary squared is nonzero at (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }

  Grading grading_;
  std::vector<int> ranks_;
  std::vector<Matrix<Elem>> boundaries_;
  std::vector<std::vector<std::string>> labels_;
};

// Fold a periodic Z-graded window into the Z/2-graded reduced complex.
// The window must span exactly whole periods: degrees 0..K with K a
// multiple of 2N; ranks and boundaries beyond one period must repeat.
// `zero` supplies the ring's zero (entries carry their ring context).
template <class Elem>
BasedChainComplex<Elem> reduce_to_Z2(const BasedChainComplex<Elem>& c, int N,
                                     const Elem& zero) {
  if (c.grading() != Grading::Z)
    throw InputError("reduce_to_Z2 expects a Z-graded complex");
  if (N < 1) throw InputError("period must be positive");
  int period = 2 * N;
  int K = static_cast<int>(c.ranks().size()) - 1;
  if (K < period || K % period != 0)
    throw InputError("period mismatch: window must cover whole periods");
  for (int k = 0; k + period <= K; ++k) {
    if (c.ranks()[k] != c.ranks()[k + period])
      throw InputError("period mismatch: rank at degree " + std::to_string(k));
    if (k + period <= K - 1) {
      const auto& a = c.boundaries()[k];
      const auto& b = c.boundaries()[k + period];
      for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j)
          if (!(a[i][j] - b[i][j]).is_zero())
            throw InputError("period mismatch: boundary at degree " +
                             std::to_string(k + 1));
    }
  }

  // fold one period: degrees 0..period-1; the boundary out of degree 0 is
  // the one out of degree `period`
  std::vector<int> fold_ranks(2, 0);
  std::vector<int> offset(period, 0);
  for (int k = 0; k < period; ++k) {
    offset[k] = fold_ranks[k % 2];
    fold_ranks[k % 2] += c.ranks()[k];
  }
  Matrix<Elem> d1(fold_ranks[0], std::vector<Elem>(fold_ranks[1], zero));
  Matrix<Elem> d0(fold_ranks[1], std::vector<Elem>(fold_ranks[0], zero));
  for (int k = 0; k < period; ++k) {
    // boundary out of degree k lands in degree k-1 (mod period)
    const Matrix<Elem>& dk = (k == 0) ? c.boundaries()[period - 1]
                                      : c.boundaries()[k - 1];
    int src = offset[k];
    int dst = offset[(k + period - 1) % period];
    Matrix<Elem>& target = (k % 2 == 1) ? d1 : d0;
    for (size_t i = 0; i < dk.size(); ++i)
      for (size_t j = 0; j < dk[i].size(); ++j)
        target[dst + i][src + j] = dk[i][j];
  }
  return BasedChainComplex<Elem>(Grading::Z2, fold_ranks, {d1, d0});
}

}  // namespace ftor
