#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reludim/errors.hpp"
#include "reludim/polyrank.hpp"
#include "reludim/rng.hpp"

#include <cmath>

using namespace reludim;

namespace {

// the worked 3x7 symbolic Jacobian for architecture (1,2|1), rows z0=-1,
// z1=1/2, z2=3/2
PolyMatrix worked_jacobian() {
  PolyMatrix jac(3, 7, 7);
  const char* rows[3][7] = {
      {"0", "0", "0", "0", "0", "0", "1"},
      {"1/2*t5", "t5", "0", "0", "1/2*t1+t2", "0", "1"},
      {"3/2*t5", "t5", "3/2*t6", "t6", "3/2*t1+t2", "3/2*t3+t4", "1"},
  };
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 7; ++c) jac.at(r, c) = parse_poly(rows[r][c], 7);
  return jac;
}

// the 4x3 rank-gap matrix [[1,0,0],[0,1,0],[0,0,1],[-2t1,2t2,1]]
PolyMatrix rank_gap_matrix() {
  PolyMatrix m(4, 3, 3);
  const char* rows[4][3] = {
      {"1", "0", "0"},
      {"0", "1", "0"},
      {"0", "0", "1"},
      {"-2*t1", "2*t2", "1"},
  };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) m.at(r, c) = parse_poly(rows[r][c], 3);
  return m;
}

SparsePoly random_poly(SplitMix64& rng, std::size_t arity, int max_deg) {
  SparsePoly p(arity);
  int terms = static_cast<int>(rng.next_int(0, 3));
  for (int t = 0; t < terms; ++t) {
    Monomial mono(arity, 0);
    int deg = static_cast<int>(rng.next_int(0, max_deg));
    for (int d = 0; d < deg; ++d) mono[rng.next_int(0, static_cast<int>(arity) - 1)] += 1;
    p.add_term(mono, Rational(rng.next_int(-5, 5)));
  }
  return p;
}

std::vector<Rational> theta_tilde() {
  return {Rational(1), Rational(0), Rational(1), Rational(-1),
          Rational(1), Rational(1), Rational(0)};
}

}  // namespace

TEST_CASE("partial derivatives match the printed Jacobian entries") {
  SparsePoly p = parse_poly("t5*(1/2*t1+t2)+t7", 7);
  CHECK(p.partial(4) == parse_poly("1/2*t1+t2", 7));
  CHECK(p.partial(0) == parse_poly("1/2*t5", 7));

  CHECK(SparsePoly::constant(3, Rational(1)).partial(0).is_zero());

  SparsePoly q = parse_poly("t3-(t1^2-t2^2)", 3);
  CHECK(q.partial(0) == parse_poly("-2*t1", 3));
  CHECK(q.partial(1) == parse_poly("2*t2", 3));
  CHECK(q.partial(2) == parse_poly("1", 3));
}

TEST_CASE("index errors are rejected") {
  SparsePoly p = parse_poly("t1+t2", 2);
  CHECK_THROWS_AS(p.partial(2), InputError);
  CHECK_THROWS_AS(p.eval({Rational(1)}), InputError);
}

TEST_CASE("evaluation is exact") {
  SparsePoly p = parse_poly("t5*(1/2*t1+t2)+t7", 7);
  // hand substitution oracle: 1*(1/2*1 + 0) + 0
  Rational expect = Rational(1) * (Rational(1, 2) * 1 + 0) + 0;
  CHECK(p.eval(theta_tilde()) == expect);
  CHECK(expect == Rational(1, 2));

  CHECK(SparsePoly(4).eval({Rational(9), Rational(9), Rational(9), Rational(9)}) == 0);

  SparsePoly q = parse_poly("t3-(t1^2-t2^2)", 3);
  CHECK(q.eval({Rational(1), Rational(1), Rational(1)}) == Rational(1));
}

TEST_CASE("polynomial text round-trips") {
  SplitMix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    SparsePoly p = random_poly(rng, 4, 3);
    CHECK(parse_poly(p.to_string(), 4) == p);
  }
}

TEST_CASE("rational matrix rank") {
  // the worked Jacobian instantiated at theta~
  RationalMatrix m(3, 7);
  Rational rows[3][7] = {
      {0, 0, 0, 0, 0, 0, 1},
      {Rational(1, 2), 1, 0, 0, Rational(1, 2), 0, 1},
      {Rational(3, 2), 1, Rational(3, 2), 1, Rational(3, 2), Rational(1, 2), 1},
  };
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 7; ++c) m.at(r, c) = rows[r][c];
  CHECK(rank_rational(m) == 3);

  CHECK(rank_rational(RationalMatrix::identity(5)) == 5);
  CHECK(rank_rational(RationalMatrix(4, 6)) == 0);
  CHECK(rank_rational(worked_jacobian().instantiate(theta_tilde())) == 3);
}

TEST_CASE("null space and rank-nullity") {
  RationalMatrix m(2, 4);
  m.at(0, 0) = 1;
  m.at(0, 2) = 2;
  m.at(1, 1) = 1;
  auto basis = null_space(m);
  CHECK(basis.size() == 2);
  for (const auto& v : basis) {
    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(dot(m.row(r), v) == 0);
  }
}

TEST_CASE("r_R of the rank-gap matrix is 3 in both modes") {
  PolyMatrix m = rank_gap_matrix();
  RankConfig randomized;
  randomized.mode = RankMode::kRandomized;
  randomized.trials = 5;
  CHECK(r_R_rank(m, randomized) == 3);

  RankConfig exact;
  exact.mode = RankMode::kExact;
  CHECK(r_R_rank(m, exact) == 3);

  CHECK(r_RR_rank(m) == 4);
}

TEST_CASE("worked Jacobian has r_R = r_RR = 3") {
  PolyMatrix jac = worked_jacobian();
  RankConfig exact;
  exact.mode = RankMode::kExact;
  CHECK(r_R_rank(jac, exact) == 3);
  RankConfig randomized;
  randomized.trials = 5;
  CHECK(r_R_rank(jac, randomized) == 3);
  CHECK(r_RR_rank(jac) == 3);
}

TEST_CASE("duplicate rows drop the real row rank") {
  PolyMatrix m(2, 2, 2);
  m.at(0, 0) = parse_poly("t1", 2);
  m.at(0, 1) = parse_poly("1", 2);
  m.at(1, 0) = parse_poly("t1", 2);
  m.at(1, 1) = parse_poly("1", 2);
  CHECK(r_RR_rank(m) == 1);
}

TEST_CASE("rank never exceeds the column count") {
  SplitMix64 rng(13);
  RankConfig exact;
  exact.mode = RankMode::kExact;
  for (int i = 0; i < 20; ++i) {
    PolyMatrix m(5, 3, 2);
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 3; ++c) m.at(r, c) = random_poly(rng, 2, 2);
    CHECK(r_R_rank(m, exact) <= 3);
  }
}

TEST_CASE("instantiated rank <= r_R <= r_RR on random matrices") {
  SplitMix64 rng(101);
  RankConfig exact;
  exact.mode = RankMode::kExact;
  for (int i = 0; i < 100; ++i) {
    std::size_t rows = static_cast<std::size_t>(rng.next_int(1, 4));
    std::size_t cols = static_cast<std::size_t>(rng.next_int(1, 4));
    PolyMatrix m(rows, cols, 3);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = random_poly(rng, 3, 2);

    std::vector<Rational> point(3);
    for (auto& p : point) p = Rational(rng.next_int(-20, 20), 7);
    int inst = rank_rational(m.instantiate(point));
    int rr = r_R_rank(m, exact);
    int rrr = r_RR_rank(m);
    CHECK(inst <= rr);
    CHECK(rr <= rrr);
  }
}

TEST_CASE("exact and randomized r_R agree on 100 random matrices") {
  SplitMix64 rng(202);
  for (int i = 0; i < 100; ++i) {
    std::size_t rows = static_cast<std::size_t>(rng.next_int(1, 4));
    std::size_t cols = static_cast<std::size_t>(rng.next_int(1, 4));
    PolyMatrix m(rows, cols, 3);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = random_poly(rng, 3, 2);
    RankConfig exact;
    exact.mode = RankMode::kExact;
    RankConfig randomized;
    randomized.trials = 3;
    randomized.seed = 1000 + i;
    CHECK(r_R_rank(m, exact) == r_R_rank(m, randomized));
  }
}

TEST_CASE("exact mode refuses oversized minor enumerations") {
  PolyMatrix m(20, 20, 2);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 20; ++c)
      m.at(r, c) = SparsePoly::constant(2, Rational(static_cast<long>(r * 20 + c + 1)));
  RankConfig exact;
  exact.mode = RankMode::kExact;
  exact.minor_budget = 1000;
  CHECK_THROWS_AS(r_R_rank(m, exact), BudgetError);
}

TEST_CASE("central differences of eval match the formal partial at second order") {
  SplitMix64 rng(303);
  for (int i = 0; i < 20; ++i) {
    SparsePoly p = random_poly(rng, 3, 3);
    std::vector<double> x = {0.3, -0.7, 1.1};
    for (std::size_t v = 0; v < 3; ++v) {
      SparsePoly dp = p.partial(v);
      double exact_d = dp.eval_double(x);
      double errs[2];
      double hs[2] = {1e-3, 1e-4};
      for (int k = 0; k < 2; ++k) {
        std::vector<double> hi = x, lo = x;
        hi[v] += hs[k];
        lo[v] -= hs[k];
        errs[k] = std::abs((p.eval_double(hi) - p.eval_double(lo)) / (2 * hs[k]) - exact_d);
      }
      // O(h^2): shrinking h by 10 shrinks the error by ~100
      CHECK(errs[0] <= 1e-4 + 1e-12);
      CHECK(errs[1] <= errs[0] / 10 + 1e-10);
    }
  }
}

TEST_CASE("determinant expansion agrees with elimination on instantiations") {
  SplitMix64 rng(404);
  for (int i = 0; i < 20; ++i) {
    PolyMatrix m(3, 3, 2);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) m.at(r, c) = random_poly(rng, 2, 1);
    SparsePoly det = poly_determinant(m);
    std::vector<Rational> point = {Rational(rng.next_int(-9, 9)), Rational(rng.next_int(-9, 9))};
    bool singular_at_point = rank_rational(m.instantiate(point)) < 3;
    CHECK(singular_at_point == (det.eval(point) == 0));
  }
}
