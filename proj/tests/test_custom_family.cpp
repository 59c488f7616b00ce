#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reludim/errors.hpp"
#include "reludim/family.hpp"
#include "reludim/fundim.hpp"
#include "reludim/rng.hpp"

using namespace reludim;

namespace {

PolyFamily rank_gap_family() {
  return PolyFamily::from_expressions(3, {"t1", "t2", "t3", "t3-t1^2+t2^2"});
}

}  // namespace

TEST_CASE("rank-gap family Jacobian matches the printed matrix") {
  PolyMatrix jac = family_jacobian(rank_gap_family());
  REQUIRE(jac.rows() == 4);
  REQUIRE(jac.cols() == 3);
  const char* expected[4][3] = {
      {"1", "0", "0"},
      {"0", "1", "0"},
      {"0", "0", "1"},
      {"-2*t1", "2*t2", "1"},
  };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) CHECK(jac.at(r, c) == parse_poly(expected[r][c], 3));

  RankConfig exact;
  exact.mode = RankMode::kExact;
  CHECK(r_R_rank(jac, exact) == 3);
  CHECK(r_RR_rank(jac) == 4);
}

TEST_CASE("constant and linear slot families") {
  PolyFamily constant = PolyFamily::from_expressions(2, {"5", "-1/3"});
  PolyMatrix jc = family_jacobian(constant);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(jc.at(r, c).is_zero());

  PolyFamily linear = PolyFamily::from_expressions(3, {"t1", "t2", "t3"});
  PolyMatrix jl = family_jacobian(linear);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(jl.at(r, c) == SparsePoly::constant(3, Rational(r == c ? 1 : 0)));
}

TEST_CASE("difference evaluation is exact") {
  PolyFamily fam = rank_gap_family();
  std::vector<Rational> zero(3, Rational(0));

  auto d1 = family_difference_eval(fam, zero, {Rational(1), Rational(1), Rational(1)});
  CHECK(d1 == std::vector<Rational>{1, 1, 1, 1});

  auto d2 = family_difference_eval(fam, zero, zero);
  CHECK(d2 == std::vector<Rational>{0, 0, 0, 0});

  auto d3 = family_difference_eval(fam, zero, {Rational(1), Rational(0), Rational(0)});
  CHECK(d3 == std::vector<Rational>{1, 0, 0, -1});

  CHECK_THROWS_AS(family_difference_eval(fam, zero, {Rational(1)}), InputError);
}

TEST_CASE("slot arity is validated") {
  CHECK_THROWS_AS(PolyFamily(2, {parse_poly("t3", 3)}), InputError);
  CHECK_THROWS_AS(PolyFamily::from_expressions(2, {"t3"}), InputError);
}

TEST_CASE("expression grammar corner cases") {
  CHECK(parse_poly("-t1^2", 1) == -(SparsePoly::variable(1, 0) * SparsePoly::variable(1, 0)));
  SparsePoly expected = SparsePoly::variable(1, 0).scaled(Rational(3, 2)) -
                        SparsePoly::constant(1, Rational(1, 2));
  CHECK(parse_poly("3/2*t1 - 1/2", 1) == expected);
  // '/' only continues a numeric literal; there is no division operator
  CHECK_THROWS_AS(parse_poly("(3*t1-1)/(2)", 1), InputError);
  CHECK(parse_poly("t1*(t1+1)", 1) == parse_poly("t1^2+t1", 1));
  CHECK_THROWS_AS(parse_poly("t1+", 1), InputError);
  CHECK_THROWS_AS(parse_poly("q1", 1), InputError);
  CHECK_THROWS_AS(parse_poly("t1 t2", 2), InputError);
}

TEST_CASE("a single-region network wrapped as a family reproduces the pathalg ranks") {
  SplitMix64 rng(67);
  Architecture arch({2, 3, 1});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> theta(arch.param_count());
    for (auto& t : theta) t = Rational(rng.next_int(-40, 40), 11);
    Parameter p = Parameter::from_theta(arch, theta);

    // points in a tight cluster tend to share one activation region; keep
    // only trials where they do
    std::vector<std::vector<Rational>> batch;
    for (int i = 0; i < 3 && batch.size() < 3; ++i) {
      std::vector<Rational> x = {Rational(rng.next_int(-8, 8), 16) + Rational(i, 128),
                                 Rational(rng.next_int(-8, 8), 16)};
      if (is_parametrically_smooth(p, x)) batch.push_back(x);
    }
    if (batch.size() < 2) continue;

    auto slots = algebraic_evaluation(p, batch);
    PolyFamily fam(arch.param_count(), slots);
    PolyMatrix family_route = family_jacobian(fam);
    PolyMatrix path_route = algebraic_jacobian(p, batch);
    CHECK(family_route == path_route);
    CHECK(r_RR_rank(family_route) == r_RR_rank(path_route));
    CHECK(rank_rational(family_route.instantiate(theta)) ==
          batch_functional_dimension(p, batch));
  }
}
