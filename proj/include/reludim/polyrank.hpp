#pragma once

#include "reludim/poly.hpp"

#include <cstdint>

namespace reludim {

enum class RankMode { kRandomized, kExact };

struct RankConfig {
  RankMode mode = RankMode::kRandomized;
  int trials = 3;                  // randomized evaluation points
  std::uint64_t seed = 1;
  std::int64_t point_bound = 1000000;  // integer points drawn from [-B, B]^D
  std::uint64_t minor_budget = 100000; // exact mode refuses beyond this
};

/// Row rank over the polynomial ring R = Q[t1..tD].
///
/// Randomized mode: max over `trials` random integer instantiations of the
/// rational rank, a lower bound that equals r_R except on a measure-zero
/// set of point choices. Exact mode: searches r x r minors from the largest
/// r down for one with nonzero determinant (a nonzero determinant at any
/// sample point certifies this; otherwise the symbolic determinant decides).
/// Exact mode throws BudgetError when the minor count exceeds the budget.
int r_R_rank(const PolyMatrix& m, const RankConfig& cfg = {});

/// Row rank over the reals: rows flattened to rational coefficient vectors
/// indexed by (column, monomial) over the union of monomials in the matrix,
/// in graded lexicographic order, then exact rational rank.
int r_RR_rank(const PolyMatrix& m);

/// Symbolic determinant of a square polynomial matrix (Laplace expansion
/// with subset memoization). Exposed for tests.
SparsePoly poly_determinant(const PolyMatrix& m);

}  // namespace reludim
