#include "reludim/linalg.hpp"

#include "reludim/errors.hpp"

#include <algorithm>
#include <utility>

namespace reludim {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return RationalMatrix(0, 0);
  RationalMatrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw InputError("ragged row list cannot form a matrix");
    for (std::size_t c = 0; c < rows[0].size(); ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

std::vector<Rational> RationalMatrix::row(std::size_t r) const {
  std::vector<Rational> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
  return out;
}

void RationalMatrix::append_row(const std::vector<Rational>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw InputError("appended row has wrong width");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

int rank_rational(const RationalMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;

  // Clear denominators row-wise so Bareiss runs over the integers.
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    BigInt l = 1;
    for (std::size_t c = 0; c < cols; ++c)
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(m.at(r, c)));
    for (std::size_t c = 0; c < cols; ++c) {
      Rational scaled = m.at(r, c) * l;
      a[r][c] = boost::multiprecision::numerator(scaled);
    }
  }

  BigInt prev_pivot = 1;
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
    std::size_t sel = pr;
    while (sel < rows && a[sel][pc] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[pr], a[sel]);
    for (std::size_t r = pr + 1; r < rows; ++r) {
      for (std::size_t c = pc + 1; c < cols; ++c)
        a[r][c] = (a[pr][pc] * a[r][c] - a[r][pc] * a[pr][c]) / prev_pivot;
      a[r][pc] = 0;
    }
    prev_pivot = a[pr][pc];
    ++pr;
  }
  return static_cast<int>(pr);
}

RrefResult rref(const RationalMatrix& m) {
  RrefResult res;
  res.rref = m;
  RationalMatrix& a = res.rref;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t pr = 0;
  for (std::size_t pc = 0; pc < cols && pr < rows; ++pc) {
    std::size_t sel = pr;
    while (sel < rows && a.at(sel, pc) == 0) ++sel;
    if (sel == rows) continue;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a.at(pr, c), a.at(sel, c));
    Rational inv = Rational(1) / a.at(pr, pc);
    for (std::size_t c = pc; c < cols; ++c) a.at(pr, c) *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr || a.at(r, pc) == 0) continue;
      Rational f = a.at(r, pc);
      for (std::size_t c = pc; c < cols; ++c) a.at(r, c) -= f * a.at(pr, c);
    }
    res.pivot_cols.push_back(pc);
    ++pr;
  }
  return res;
}

std::vector<std::vector<Rational>> null_space(const RationalMatrix& m) {
  const std::size_t cols = m.cols();
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : r.pivot_cols) is_pivot[p] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free_c] = 1;
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i)
      v[r.pivot_cols[i]] = -r.rref.at(i, free_c);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool system_consistent(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (a.rows() != b.size()) throw InputError("rhs length does not match matrix");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  return rank_rational(aug) == rank_rational(a);
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw InputError("dot product length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Rational> orthogonal_to_rowspace(const RationalMatrix& m,
                                             const std::vector<Rational>& v) {
  if (v.size() != m.cols() && m.rows() > 0)
    throw InputError("vector length does not match row space");
  std::vector<std::vector<Rational>> ortho;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<Rational> u = m.row(r);
    for (const auto& w : ortho) {
      Rational coef = dot(u, w) / dot(w, w);
      for (std::size_t c = 0; c < u.size(); ++c) u[c] -= coef * w[c];
    }
    bool nonzero = std::any_of(u.begin(), u.end(), [](const Rational& x) { return x != 0; });
    if (nonzero) ortho.push_back(std::move(u));
  }
  std::vector<Rational> res = v;
  for (const auto& w : ortho) {
    Rational coef = dot(res, w) / dot(w, w);
    for (std::size_t c = 0; c < res.size(); ++c) res[c] -= coef * w[c];
  }
  return res;
}

bool RowSpan::try_add(std::vector<Rational> row) {
  if (row.size() != cols_) throw InputError("row width does not match span");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const std::size_t p = pivot_cols_[i];
    if (row[p] == 0) continue;
    Rational f = row[p];
    for (std::size_t c = 0; c < cols_; ++c) row[c] -= f * basis_[i][c];
  }
  std::size_t lead = cols_;
  for (std::size_t c = 0; c < cols_; ++c)
    if (row[c] != 0) {
      lead = c;
      break;
    }
  if (lead == cols_) return false;
  Rational inv = Rational(1) / row[lead];
  for (std::size_t c = 0; c < cols_; ++c) row[c] *= inv;
  // keep the basis fully reduced so one reduction pass suffices
  for (auto& b : basis_) {
    if (b[lead] == 0) continue;
    Rational f = b[lead];
    for (std::size_t c = 0; c < cols_; ++c) b[c] -= f * row[c];
  }
  basis_.push_back(std::move(row));
  pivot_cols_.push_back(lead);
  return true;
}

}  // namespace reludim
