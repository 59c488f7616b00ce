#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reludim/errors.hpp"
#include "reludim/fundim.hpp"
#include "reludim/rng.hpp"
#include "reludim/shatter.hpp"

#include <set>

using namespace reludim;

namespace {

PolyFamily rank_gap_family() {
  return PolyFamily::from_expressions(3, {"t1", "t2", "t3", "t3-t1^2+t2^2"});
}

DifferenceFamily rank_gap_difference() {
  auto eval = std::make_shared<FamilyBatchEvaluator>(rank_gap_family());
  return DifferenceFamily(eval, std::vector<Rational>(3, Rational(0)));
}

DifferenceFamily zero_difference(std::size_t m) {
  std::vector<SparsePoly> slots(m, SparsePoly(2));
  auto eval = std::make_shared<FamilyBatchEvaluator>(PolyFamily(2, std::move(slots)));
  return DifferenceFamily(eval, {Rational(0), Rational(0)});
}

Parameter example_network() {
  return Parameter::from_theta(Architecture({1, 2, 1}), {1, 0, 1, -1, 1, 1, 0});
}

DifferenceFamily example_difference() {
  auto eval = std::make_shared<NetworkBatchEvaluator>(
      Architecture({1, 2, 1}),
      std::vector<std::vector<Rational>>{{Rational(-1)}, {Rational(1, 2)}, {Rational(3, 2)}});
  return DifferenceFamily(eval, example_network().unroll());
}

std::vector<Rational> geometric_schedule(int levels) {
  std::vector<Rational> s;
  Rational eps(1);
  for (int k = 0; k < levels; ++k) {
    s.push_back(eps);
    eps /= 2;
  }
  return s;
}

std::set<SignPattern> full_cube(std::size_t m) {
  std::set<SignPattern> cube;
  for (SignPattern p = 0; p < (SignPattern{1} << m); ++p) cube.insert(p);
  return cube;
}

// the Remark's pattern set {(-,-,-),(+,-,-),(+,-,+),(+,+,+)}
std::set<SignPattern> remark_patterns() { return {0b000, 0b001, 0b101, 0b111}; }

// exhaustive oracle: largest column subset whose projections cover the cube
int exhaustive_max_shattered(const std::set<SignPattern>& pats, std::size_t m) {
  int best = 0;
  for (SignPattern sub = 0; sub < (SignPattern{1} << m); ++sub) {
    std::vector<int> cols;
    for (std::size_t i = 0; i < m; ++i)
      if (sub & (SignPattern{1} << i)) cols.push_back(static_cast<int>(i));
    if (static_cast<SignPattern>(1) << cols.size() > pats.size()) continue;
    std::set<SignPattern> proj;
    for (SignPattern p : pats) {
      SignPattern q = 0;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (p & (SignPattern{1} << cols[i])) q |= (SignPattern{1} << i);
      proj.insert(q);
    }
    if (proj.size() == (SignPattern{1} << cols.size()))
      best = std::max(best, static_cast<int>(cols.size()));
  }
  return best;
}

std::set<std::vector<int>> exhaustive_shattered_family(const std::set<SignPattern>& pats,
                                                       std::size_t m) {
  std::set<std::vector<int>> fam;
  for (SignPattern sub = 1; sub < (SignPattern{1} << m); ++sub) {
    std::vector<int> cols;
    for (std::size_t i = 0; i < m; ++i)
      if (sub & (SignPattern{1} << i)) cols.push_back(static_cast<int>(i));
    std::set<SignPattern> proj;
    for (SignPattern p : pats) {
      SignPattern q = 0;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (p & (SignPattern{1} << cols[i])) q |= (SignPattern{1} << i);
      proj.insert(q);
    }
    if (proj.size() == (SignPattern{1} << cols.size())) fam.insert(cols);
  }
  return fam;
}

std::set<SignPattern> random_pattern_set(SplitMix64& rng, std::size_t m) {
  std::set<SignPattern> pats;
  int n = static_cast<int>(rng.next_int(1, static_cast<int>(1 << m)));
  while (static_cast<int>(pats.size()) < n)
    pats.insert(rng.next_u64() & ((SignPattern{1} << m) - 1));
  return pats;
}

// squared interpolation loss as a one-slot family: the anchor is a global
// minimum, so differences can never be negative
class LossEvaluator : public BatchEvaluator {
 public:
  LossEvaluator(Parameter anchor, std::vector<std::vector<Rational>> batch)
      : arch_(anchor.arch()), batch_(std::move(batch)) {
    for (const auto& z : batch_) labels_.push_back(forward(anchor, z).output);
  }
  std::size_t param_dim() const override { return arch_.param_count(); }
  std::size_t batch_size() const override { return 1; }
  std::vector<Rational> evaluate(const std::vector<Rational>& theta) const override {
    Parameter p = Parameter::from_theta(arch_, theta);
    Rational loss = 0;
    for (std::size_t i = 0; i < batch_.size(); ++i) {
      Rational d = forward(p, batch_[i]).output - labels_[i];
      loss += d * d;
    }
    return {loss / Rational(2 * static_cast<long>(batch_.size()))};
  }

 private:
  Architecture arch_;
  std::vector<std::vector<Rational>> batch_;
  std::vector<Rational> labels_;
};

}  // namespace

TEST_CASE("rank-gap family realizes all 16 patterns at every radius") {
  DifferenceFamily fam = rank_gap_difference();
  for (const Rational& eps : {Rational(1), Rational(1, 8)}) {
    LevelSample level = sample_sign_patterns(fam, eps, 10000, 7);
    CHECK(level.patterns.size() == 16);
  }
}

TEST_CASE("ball samples stay strictly inside the radius, exactly") {
  std::vector<Rational> theta0 = {Rational(1, 3), Rational(-7, 5), Rational(0)};
  Rational eps(3, 7);
  SplitMix64 rng(99);
  for (int i = 0; i < 300; ++i) {
    auto p = sample_ball_point(theta0, eps, rng);
    Rational dist2 = 0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      Rational d = p[c] - theta0[c];
      dist2 += d * d;
    }
    CHECK(dist2 < eps * eps);
  }
}

TEST_CASE("the zero family rejects every sample") {
  DifferenceFamily fam = zero_difference(3);
  LevelSample level = sample_sign_patterns(fam, Rational(1), 200, 7);
  CHECK(level.patterns.empty());
  CHECK(level.rejected == 200);
}

TEST_CASE("the worked network example reaches exactly 8 patterns") {
  DifferenceFamily fam = example_difference();
  LevelSample level = sample_sign_patterns(fam, Rational(1, 4), 6000, 7);
  CHECK(level.patterns.size() == 8);
}

TEST_CASE("persistent capacity of the rank-gap family is 16") {
  SignPatternSet caps = persistent_capacity(rank_gap_difference(), geometric_schedule(4),
                                            10000, 7);
  CHECK(caps.persisted.size() == 16);
}

TEST_CASE("persistent capacity of the zero family is 0") {
  SignPatternSet caps = persistent_capacity(zero_difference(2), geometric_schedule(4), 100, 7);
  CHECK(caps.persisted.empty());
}

TEST_CASE("persistent capacity of the worked network example is 8") {
  SignPatternSet caps = persistent_capacity(example_difference(), geometric_schedule(4),
                                            6000, 7);
  CHECK(caps.persisted.size() == 8);
}

TEST_CASE("persisted intersection is monotone in schedule length") {
  SignPatternSet caps = persistent_capacity(example_difference(), geometric_schedule(5),
                                            1500, 11);
  std::set<SignPattern> running = caps.levels[0].patterns;
  std::size_t prev = running.size();
  for (std::size_t k = 1; k < caps.levels.size(); ++k) {
    std::set<SignPattern> inter;
    std::set_intersection(running.begin(), running.end(), caps.levels[k].patterns.begin(),
                          caps.levels[k].patterns.end(), std::inserter(inter, inter.begin()));
    running = std::move(inter);
    CHECK(running.size() <= prev);
    prev = running.size();
  }
  CHECK(running == caps.persisted);
}

TEST_CASE("schedule validation") {
  DifferenceFamily fam = zero_difference(2);
  CHECK_THROWS_AS(persistent_capacity(fam, {}, 10, 1), InputError);
  CHECK_THROWS_AS(persistent_capacity(fam, {Rational(1), Rational(1)}, 10, 1), InputError);
  CHECK_THROWS_AS(persistent_capacity(fam, {Rational(-1)}, 10, 1), InputError);
}

TEST_CASE("shifting fixes the full cube and single rows") {
  CHECK(shifting(full_cube(3), 3) == full_cube(3));
  std::set<SignPattern> single = {0b000};
  CHECK(shifting(single, 3) == single);
}

TEST_CASE("shifting the Remark set yields max popcount 1") {
  auto shifted = shifting(remark_patterns(), 3);
  CHECK(shifted.size() == 4);
  int maxpop = 0;
  for (SignPattern p : shifted) maxpop = std::max(maxpop, std::popcount(p));
  CHECK(maxpop == 1);
}

TEST_CASE("shifting preserves cardinality and creates no new shattered subsets") {
  SplitMix64 rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.next_int(1, 5));
    auto pats = random_pattern_set(rng, m);
    auto shifted = shifting(pats, m);
    CHECK(shifted.size() == pats.size());

    auto fam_in = exhaustive_shattered_family(pats, m);
    auto fam_out = exhaustive_shattered_family(shifted, m);
    for (const auto& s : fam_out) CHECK(fam_in.count(s) == 1);

    // every shifted row's +1 positions are shattered by the shifted set
    for (SignPattern row : shifted) {
      std::vector<int> support;
      for (std::size_t i = 0; i < m; ++i)
        if (row & (SignPattern{1} << i)) support.push_back(static_cast<int>(i));
      if (!support.empty()) CHECK(fam_out.count(support) == 1);
    }
  }
}

TEST_CASE("max shattered subset equals the exhaustive oracle") {
  CHECK(max_shattered_subset(remark_patterns(), 3).size == 1);
  CHECK(max_shattered_subset(full_cube(3), 3).size == 3);

  SplitMix64 rng(73);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.next_int(1, 5));
    auto pats = random_pattern_set(rng, m);
    ShatterWitness w = max_shattered_subset(pats, m);
    CHECK(w.size == exhaustive_max_shattered(pats, m));
    CHECK(static_cast<int>(w.witness.size()) == w.size);

    // the witness is genuinely shattered
    std::set<SignPattern> proj;
    for (SignPattern p : pats) {
      SignPattern q = 0;
      for (std::size_t i = 0; i < w.witness.size(); ++i)
        if (p & (SignPattern{1} << w.witness[i])) q |= (SignPattern{1} << i);
      proj.insert(q);
    }
    CHECK(proj.size() == (SignPattern{1} << w.size));

    // the shift-based count is a lower bound for the exact one
    int maxpop = 0;
    for (SignPattern p : shifting(pats, m)) maxpop = std::max(maxpop, std::popcount(p));
    CHECK(maxpop <= w.size);

    // and Sauer-Shelah holds with the exact size
    CHECK(sauer_check(pats, m, w.size));
  }
}

TEST_CASE("sauer bound examples") {
  CHECK(sauer_check(remark_patterns(), 3, 1));        // 4 <= 1 + 3
  CHECK(sauer_check(full_cube(3), 3, 3));             // 8 <= 8
  CHECK_FALSE(sauer_check(full_cube(3), 3, 2));       // 8 > 7
}

TEST_CASE("psi bracket of the rank-gap family is (4, 4)") {
  RankConfig exact;
  exact.mode = RankMode::kExact;
  int upper = r_RR_rank(family_jacobian(rank_gap_family()));
  REQUIRE(upper == 4);
  PsiBracket bracket = psi_bracket(rank_gap_difference(), geometric_schedule(4), 10000,
                                   upper, 7);
  CHECK(bracket.lower == 4);
  CHECK(bracket.upper == 4);
}

TEST_CASE("psi bracket of the worked network example is (3, 3)") {
  Parameter p = example_network();
  std::vector<std::vector<Rational>> batch = {{Rational(-1)}, {Rational(1, 2)},
                                              {Rational(3, 2)}};
  int upper = r_RR_rank(algebraic_jacobian(p, batch));
  REQUIRE(upper == 3);
  PsiBracket bracket = psi_bracket(example_difference(), geometric_schedule(4), 6000,
                                   upper, 7);
  CHECK(bracket.lower == 3);
  CHECK(bracket.upper == 3);
}

TEST_CASE("psi bracket of the zero family is (0, 0)") {
  PsiBracket bracket = psi_bracket(zero_difference(2), geometric_schedule(3), 100, 0, 7);
  CHECK(bracket.lower == 0);
  CHECK(bracket.upper == 0);
}

TEST_CASE("psi lower bound dominates the batch functional dimension") {
  SplitMix64 rng(79);
  Architecture arch({2, 3, 1});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Rational> theta(arch.param_count());
    for (auto& t : theta) t = Rational(rng.next_int(-50, 50), 13);
    Parameter p = Parameter::from_theta(arch, theta);

    std::vector<std::vector<Rational>> batch;
    while (batch.size() < 3) {
      std::vector<Rational> x = {Rational(rng.next_int(-20, 20), 8),
                                 Rational(rng.next_int(-20, 20), 8)};
      if (is_parametrically_smooth(p, x) &&
          std::find(batch.begin(), batch.end(), x) == batch.end())
        batch.push_back(x);
    }
    int dim_ba = batch_functional_dimension(p, batch);
    int upper = r_RR_rank(algebraic_jacobian(p, batch));
    auto eval = std::make_shared<NetworkBatchEvaluator>(arch, batch);
    DifferenceFamily fam(eval, p.unroll());
    PsiBracket bracket = psi_bracket(fam, geometric_schedule(4), 4000, upper, 100 + trial);
    CHECK(bracket.lower >= dim_ba);
    CHECK(bracket.lower <= bracket.upper);
  }
}

TEST_CASE("a strict loss minimum cannot be persistently pseudo-shattered") {
  Parameter p = example_network();
  auto eval = std::make_shared<LossEvaluator>(
      p, std::vector<std::vector<Rational>>{{Rational(-1)}, {Rational(1, 2)},
                                            {Rational(3, 2)}});
  DifferenceFamily fam(eval, p.unroll());
  SignPatternSet caps = persistent_capacity(fam, geometric_schedule(3), 500, 7);
  // loss differences from a global minimum are never negative: the all-minus
  // pattern (encoded 0) cannot appear
  CHECK(caps.persisted.count(0) == 0);
  for (const auto& level : caps.levels) CHECK(level.patterns.count(0) == 0);
}
