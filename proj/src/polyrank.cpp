#include "reludim/polyrank.hpp"

#include "reludim/errors.hpp"
#include "reludim/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace reludim {

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap) return cap + 1;
    r = r * (n - k + i) / i;
  }
  return r;
}

std::vector<Rational> random_integer_point(std::size_t arity, SplitMix64& rng,
                                           std::int64_t bound) {
  std::vector<Rational> p(arity);
  for (std::size_t i = 0; i < arity; ++i) p[i] = Rational(rng.next_int(-bound, bound));
  return p;
}

int randomized_rank(const PolyMatrix& m, const RankConfig& cfg) {
  if (cfg.trials < 1) throw InputError("randomized rank needs at least one trial");
  int best = 0;
  const int max_possible = static_cast<int>(std::min(m.rows(), m.cols()));
  for (int t = 0; t < cfg.trials && best < max_possible; ++t) {
    SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    auto point = random_integer_point(m.arity(), rng, cfg.point_bound);
    best = std::max(best, rank_rational(m.instantiate(point)));
  }
  return best;
}

// Laplace expansion over rows with memoization keyed by the set of
// still-unused columns.
SparsePoly det_rec(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& cols, std::size_t row_pos,
                   std::uint64_t col_mask, std::map<std::uint64_t, SparsePoly>& memo) {
  const std::size_t n = rows.size();
  if (row_pos == n) return SparsePoly::constant(m.arity(), Rational(1));
  auto it = memo.find(col_mask);
  if (it != memo.end()) return it->second;

  SparsePoly acc(m.arity());
  int parity = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(col_mask & (1ULL << j))) continue;
    const SparsePoly& entry = m.at(rows[row_pos], cols[j]);
    if (!entry.is_zero()) {
      SparsePoly sub =
          det_rec(m, rows, cols, row_pos + 1, col_mask & ~(1ULL << j), memo);
      SparsePoly term = entry * sub;
      if (parity % 2 == 1) term = -term;
      acc += term;
    }
    ++parity;
  }
  memo.emplace(col_mask, acc);
  return acc;
}

SparsePoly minor_determinant(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                             const std::vector<std::size_t>& cols) {
  std::map<std::uint64_t, SparsePoly> memo;
  std::uint64_t full = (rows.size() == 64) ? ~0ULL : ((1ULL << rows.size()) - 1);
  return det_rec(m, rows, cols, 0, full, memo);
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Certifies det != 0 cheaply when an instantiation is nonzero; falls back
// to the symbolic determinant only when sampled values all vanish. The
// symbolic expansion costs ~2^r polynomial ops, charged against the budget.
bool minor_is_nonsingular(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols, std::uint64_t seed,
                          std::uint64_t& spent, std::uint64_t budget) {
  const std::size_t r = rows.size();
  for (int probe = 0; probe < 2; ++probe) {
    SplitMix64 rng(derive_seed(seed, 0xABCD, probe));
    auto point = random_integer_point(m.arity(), rng, 1000003);
    RationalMatrix inst(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) inst.at(i, j) = m.at(rows[i], cols[j]).eval(point);
    if (rank_rational(inst) == static_cast<int>(r)) return true;
  }
  std::uint64_t symbolic_cost = (r >= 63) ? ~0ULL / 2 : (std::uint64_t{1} << r);
  spent += symbolic_cost;
  if (spent > budget)
    throw BudgetError("exact r_R minor budget exceeded; rerun with --rank-mode randomized");
  return !minor_determinant(m, rows, cols).is_zero();
}

int exact_rank(const PolyMatrix& m, const RankConfig& cfg) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t rmax = std::min(rows, cols);
  if (rmax == 0) return 0;
  if (rmax > 63) throw BudgetError("exact r_R mode limited to minors of size <= 63");

  std::uint64_t spent = 0;
  for (std::size_t r = rmax; r >= 1; --r) {
    std::uint64_t count = binomial_capped(rows, r, cfg.minor_budget) *
                          binomial_capped(cols, r, cfg.minor_budget);
    if (spent + count > cfg.minor_budget)
      throw BudgetError(
          "exact r_R minor budget exceeded; rerun with --rank-mode randomized");

    std::vector<std::size_t> rsel(r), csel(r);
    std::iota(rsel.begin(), rsel.end(), 0);
    bool more_rows = true;
    std::uint64_t minor_index = 0;
    while (more_rows) {
      std::iota(csel.begin(), csel.end(), 0);
      bool more_cols = true;
      while (more_cols) {
        ++spent;
        if (minor_is_nonsingular(m, rsel, csel, derive_seed(cfg.seed, r, minor_index), spent,
                                 cfg.minor_budget))
          return static_cast<int>(r);
        ++minor_index;
        more_cols = next_combination(csel, cols);
      }
      more_rows = next_combination(rsel, rows);
    }
  }
  return 0;
}

}  // namespace

SparsePoly poly_determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant requires a square matrix");
  if (m.rows() > 63) throw BudgetError("determinant limited to size <= 63");
  std::vector<std::size_t> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  return minor_determinant(m, idx, idx);
}

int r_R_rank(const PolyMatrix& m, const RankConfig& cfg) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (cfg.mode == RankMode::kRandomized) return randomized_rank(m, cfg);
  return exact_rank(m, cfg);
}

int r_RR_rank(const PolyMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  std::set<Monomial, GrlexLess> mono_set;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      for (const auto& [mono, coef] : m.at(r, c).terms()) mono_set.insert(mono);
  if (mono_set.empty()) return 0;

  std::map<Monomial, std::size_t, GrlexLess> mono_index;
  std::size_t k = 0;
  for (const auto& mono : mono_set) mono_index.emplace(mono, k++);

  RationalMatrix flat(m.rows(), m.cols() * mono_set.size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      for (const auto& [mono, coef] : m.at(r, c).terms())
        flat.at(r, c * mono_set.size() + mono_index[mono]) = coef;
  return rank_rational(flat);
}

}  // namespace reludim
