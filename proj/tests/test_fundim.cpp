#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reludim/errors.hpp"
#include "reludim/fundim.hpp"
#include "reludim/rng.hpp"

using namespace reludim;

namespace {

Parameter example_network() {
  return Parameter::from_theta(Architecture({1, 2, 1}), {1, 0, 1, -1, 1, 1, 0});
}

std::vector<std::vector<Rational>> example_batch() {
  return {{Rational(-1)}, {Rational(1, 2)}, {Rational(3, 2)}};
}

Parameter random_network(const Architecture& arch, SplitMix64& rng) {
  std::vector<Rational> theta(arch.param_count());
  for (auto& t : theta) t = Rational(rng.next_int(-60, 60), 17);
  return Parameter::from_theta(arch, theta);
}

std::vector<Rational> random_smooth_point(const Parameter& param, SplitMix64& rng) {
  for (;;) {
    std::vector<Rational> x(param.arch().input_dim());
    for (auto& c : x) c = Rational(rng.next_int(-30, 30), 8);
    if (is_parametrically_smooth(param, x)) return x;
  }
}

// Hand-derived gradient rows for the (1,2|1) example at theta~, one formula
// per activation region; independent of the library's Jacobian machinery.
std::vector<Rational> region_row(const Rational& x) {
  if (x < 0) return {0, 0, 0, 0, 0, 0, 1};
  if (x < 1) return {x, 1, 0, 0, x, 0, 1};
  return {x, 1, x, 1, x, x - 1, 1};
}

}  // namespace

TEST_CASE("batch functional dimension on the worked example") {
  CHECK(batch_functional_dimension(example_network(), example_batch()) == 3);
  CHECK(batch_functional_dimension(example_network(), {}) == 0);

  // single point with every hidden neuron off: one nonzero row
  Parameter off = Parameter::from_theta(Architecture({1, 2, 1}), {1, -2, 1, -2, 1, 1, 5});
  CHECK(batch_functional_dimension(off, {{Rational(0)}}) == 1);
}

TEST_CASE("backprop gradient agrees with the instantiated algebraic Jacobian") {
  SplitMix64 rng(3);
  for (const auto& widths : {std::vector<int>{1, 2, 1}, {2, 3, 1}, {2, 4, 3, 1}}) {
    Architecture arch(widths);
    for (int trial = 0; trial < 10; ++trial) {
      Parameter p = random_network(arch, rng);
      auto x = random_smooth_point(p, rng);
      PolyMatrix jac = algebraic_jacobian(p, {x});
      auto symbolic_row = jac.instantiate(p.unroll()).row(0);
      CHECK(numeric_gradient(p, x) == symbolic_row);
    }
  }
}

TEST_CASE("rank profile of the worked example") {
  RankConfig cfg;
  cfg.mode = RankMode::kExact;
  RankProfile prof = rank_profile(example_network(), example_batch(), cfg);
  CHECK(prof.dim_ba_fun == 3);
  CHECK(prof.r_R == 3);
  CHECK(prof.r_RR == 3);
  CHECK(prof.rank_alpha == 3);
  CHECK(prof.chain_ok);
  CHECK(prof.batch_size == 3);
  CHECK(prof.param_dim == 7);
  CHECK(prof.path_count == 5);
}

TEST_CASE("rank profile on an oversized batch stays within D") {
  SplitMix64 rng(11);
  Parameter p = example_network();
  std::vector<std::vector<Rational>> batch;
  while (batch.size() < 10) {
    auto x = random_smooth_point(p, rng);
    if (std::find(batch.begin(), batch.end(), x) == batch.end()) batch.push_back(x);
  }
  RankProfile prof = rank_profile(p, batch);
  CHECK(prof.dim_ba_fun <= 7);
  CHECK(prof.chain_ok);
}

TEST_CASE("empty batch gives the zero profile") {
  RankProfile prof = rank_profile(example_network(), {});
  CHECK(prof.dim_ba_fun == 0);
  CHECK(prof.r_R == 0);
  CHECK(prof.r_RR == 0);
  CHECK(prof.rank_alpha == 0);
  CHECK(prof.chain_ok);
}

TEST_CASE("functional dimension estimate matches the per-region oracle") {
  // oracle: the three activation regions contribute gradient rows spanning
  // a 5-dimensional space
  RationalMatrix oracle(0, 7);
  for (const Rational& x : {Rational(-2), Rational(-1, 2), Rational(1, 4), Rational(1, 2),
                            Rational(3, 2), Rational(3)})
    oracle.append_row(region_row(x));
  CHECK(rank_rational(oracle) == 5);

  FunDimEstimate est = estimate_functional_dimension(example_network(), 50, 7);
  CHECK(est.value == 5);
  CHECK_FALSE(est.certified_full);  // 5 < D = 7, patience stopped the search
}

TEST_CASE("affine network has functional dimension 2") {
  Parameter p = Parameter::from_theta(Architecture({1, 1}), {Rational(3), Rational(-1)});
  FunDimEstimate est = estimate_functional_dimension(p, 50, 7);
  CHECK(est.value == 2);
  CHECK(est.certified_full);
}

TEST_CASE("the zero parameter of a hidden architecture has no smooth points") {
  Parameter zero = Parameter::zero(Architecture({1, 2, 1}));
  CHECK_THROWS_AS(estimate_functional_dimension(zero, 30, 7), InputError);
}

TEST_CASE("estimate dominates the batch dimension") {
  SplitMix64 rng(13);
  Architecture arch({2, 3, 1});
  for (int trial = 0; trial < 5; ++trial) {
    Parameter p = random_network(arch, rng);
    std::vector<std::vector<Rational>> batch;
    for (int i = 0; i < 4; ++i) batch.push_back(random_smooth_point(p, rng));
    FunDimEstimate est = estimate_functional_dimension(p, 60, 1000 + trial);
    CHECK(est.value >= batch_functional_dimension(p, batch));
  }
}

TEST_CASE("batch monotonicity of the functional dimension") {
  SplitMix64 rng(17);
  Parameter p = example_network();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<Rational>> small, big;
    for (int i = 0; i < 2; ++i) small.push_back(random_smooth_point(p, rng));
    big = small;
    for (int i = 0; i < 2; ++i) big.push_back(random_smooth_point(p, rng));
    CHECK(batch_functional_dimension(p, small) <= batch_functional_dimension(p, big));
  }
}

TEST_CASE("real rank stability on the worked example") {
  CHECK(real_rank_stability_check(example_network(), example_batch()));
  CHECK(real_rank_stability_check(example_network(), {}));
}

TEST_CASE("a parameter on the minor zero locus is unstable") {
  // theta5 = 0 and theta1 = 0 kill the instantiated rank while the region
  // (hidden pattern (+,-) at both points) keeps r_R = 2
  Parameter p = Parameter::from_theta(Architecture({1, 2, 1}), {0, 1, 1, -1, 0, 1, 0});
  std::vector<std::vector<Rational>> batch = {{Rational(1, 4)}, {Rational(1, 2)}};
  REQUIRE(is_parametrically_smooth(p, batch[0]));
  REQUIRE(is_parametrically_smooth(p, batch[1]));

  PolyMatrix jac = algebraic_jacobian(p, batch);
  RankConfig cfg;
  cfg.mode = RankMode::kExact;
  CHECK(rank_rational(jac.instantiate(p.unroll())) == 1);
  CHECK(r_R_rank(jac, cfg) == 2);
  CHECK_FALSE(real_rank_stability_check(p, batch, cfg));
}

TEST_CASE("rank chain holds on randomized trials") {
  SplitMix64 rng(19);
  int stable = 0, total = 0;
  for (const auto& widths : {std::vector<int>{1, 2, 1}, {2, 3, 1}}) {
    Architecture arch(widths);
    for (int trial = 0; trial < 30; ++trial) {
      Parameter p = random_network(arch, rng);
      std::vector<std::vector<Rational>> batch;
      int m = static_cast<int>(rng.next_int(1, 4));
      for (int i = 0; i < m; ++i) batch.push_back(random_smooth_point(p, rng));
      RankProfile prof = rank_profile(p, batch);
      CHECK(prof.chain_ok);
      ++total;
      if (prof.dim_ba_fun == prof.r_R) ++stable;
    }
  }
  // instability is a measure-zero event; rational sampling should miss it
  CHECK(stable == total);
}
