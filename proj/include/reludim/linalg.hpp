#pragma once

#include "reludim/rational.hpp"

#include <cstddef>
#include <vector>

namespace reludim {

/// Dense matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> row(std::size_t r) const;
  void append_row(const std::vector<Rational>& row);

  RationalMatrix transposed() const;
  bool operator==(const RationalMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact rank via fraction-free (Bareiss) elimination on the
/// denominator-cleared integer matrix.
int rank_rational(const RationalMatrix& m);

/// Reduced row echelon form; pivot columns returned in order.
struct RrefResult {
  RationalMatrix rref;
  std::vector<std::size_t> pivot_cols;
};
RrefResult rref(const RationalMatrix& m);

/// Exact basis of {v : M v = 0}; size cols - rank.
std::vector<std::vector<Rational>> null_space(const RationalMatrix& m);

/// True iff A x = b admits a solution.
bool system_consistent(const RationalMatrix& a, const std::vector<Rational>& b);

/// Component of v orthogonal to the row space of m, via unnormalized
/// Gram-Schmidt (stays in the rationals).
std::vector<Rational> orthogonal_to_rowspace(const RationalMatrix& m,
                                             const std::vector<Rational>& v);

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b);

/// Incremental rank tracker: feed candidate rows, keep those that enlarge
/// the span. Backs the greedy functional-dimension estimate.
class RowSpan {
 public:
  explicit RowSpan(std::size_t cols) : cols_(cols) {}

  /// True (and absorbs the row) iff it is independent of the rows seen so far.
  bool try_add(std::vector<Rational> row);
  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  std::size_t cols_;
  // rows kept in echelon form, pivot_cols_[i] = leading column of basis_[i]
  std::vector<std::vector<Rational>> basis_;
  std::vector<std::size_t> pivot_cols_;
};

}  // namespace reludim
