#pragma once

#include "reludim/family.hpp"
#include "reludim/network.hpp"
#include "reludim/rng.hpp"

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

namespace reludim {

/// Evaluates a parameterized family on a fixed batch: theta -> R^m.
class BatchEvaluator {
 public:
  virtual ~BatchEvaluator() = default;
  virtual std::size_t param_dim() const = 0;
  virtual std::size_t batch_size() const = 0;
  virtual std::vector<Rational> evaluate(const std::vector<Rational>& theta) const = 0;
};

/// ReLU network restricted to a batch of input points.
class NetworkBatchEvaluator : public BatchEvaluator {
 public:
  NetworkBatchEvaluator(Architecture arch, std::vector<std::vector<Rational>> batch);

  std::size_t param_dim() const override { return arch_.param_count(); }
  std::size_t batch_size() const override { return batch_.size(); }
  std::vector<Rational> evaluate(const std::vector<Rational>& theta) const override;

 private:
  Architecture arch_;
  std::vector<std::vector<Rational>> batch_;
};

/// Globally polynomial family; the batch is implicit in the slots.
class FamilyBatchEvaluator : public BatchEvaluator {
 public:
  explicit FamilyBatchEvaluator(PolyFamily fam) : fam_(std::move(fam)) {}

  std::size_t param_dim() const override { return fam_.param_dim(); }
  std::size_t batch_size() const override { return fam_.slot_count(); }
  std::vector<Rational> evaluate(const std::vector<Rational>& theta) const override {
    return fam_.evaluate(theta);
  }

 private:
  PolyFamily fam_;
};

/// D_{theta0}(theta, z_i) = F_theta(z_i) - F_theta0(z_i) on the fixed batch.
class DifferenceFamily {
 public:
  DifferenceFamily(std::shared_ptr<const BatchEvaluator> eval, std::vector<Rational> theta0);

  std::size_t param_dim() const { return eval_->param_dim(); }
  std::size_t batch_size() const { return eval_->batch_size(); }
  const std::vector<Rational>& anchor() const { return theta0_; }

  std::vector<Rational> difference(const std::vector<Rational>& theta) const;

 private:
  std::shared_ptr<const BatchEvaluator> eval_;
  std::vector<Rational> theta0_;
  std::vector<Rational> base_;
};

/// Sign pattern on a batch of m <= 63 points; bit i set iff sign +1.
using SignPattern = std::uint64_t;

struct LevelSample {
  Rational eps;
  std::set<SignPattern> patterns;
  std::size_t samples = 0;
  std::size_t rejected = 0;  // draws with some exact-zero coordinate
};

struct SamplerConfig {
  int denom_bits = 40;  // ball samples are rationalized on a 2^-bits lattice
};

/// Uniform draw from B_eps(theta0), rationalized onto a dyadic lattice;
/// exact-norm checked, so membership in the open ball is certain.
std::vector<Rational> sample_ball_point(const std::vector<Rational>& theta0,
                                        const Rational& eps, SplitMix64& rng,
                                        int denom_bits = 40);

/// Samples theta uniformly from the exact-rational ball B_eps(theta0),
/// keeping sample signs exact; draws hitting V_Z (any zero coordinate) are
/// rejected and counted.
LevelSample sample_sign_patterns(const DifferenceFamily& fam, const Rational& eps,
                                 std::size_t n_samples, std::uint64_t seed,
                                 const SamplerConfig& cfg = {});

struct SignPatternSet {
  std::size_t batch_size = 0;
  std::vector<LevelSample> levels;       // in schedule order
  std::set<SignPattern> persisted;       // intersection across levels
};

/// Targeted witnesses for patterns a uniform draw is unlikely to hit:
/// picks a rank-realizing row subset W of the Jacobian at the anchor,
/// solves J_W delta = s exactly for every sub-pattern s, and walks the
/// step into the ball until the exact sign evaluation confirms it. Every
/// inserted pattern is therefore certified by a concrete parameter in
/// B_eps(theta0).
void first_order_completion(const DifferenceFamily& fam, const RationalMatrix& jacobian,
                            const Rational& eps, std::set<SignPattern>& patterns);

/// Finite-schedule approximation of the persistent binary capacity:
/// the intersection of per-level pattern sets over a strictly decreasing
/// eps schedule. When the Jacobian at the anchor is supplied, each level
/// is augmented with the first-order witnesses.
SignPatternSet persistent_capacity(const DifferenceFamily& fam,
                                   const std::vector<Rational>& schedule,
                                   std::size_t n_per_level, std::uint64_t seed,
                                   const SamplerConfig& cfg = {},
                                   const RationalMatrix* jacobian = nullptr);

/// Down-compression to a fixpoint: a +1 becomes -1 whenever the flip does
/// not duplicate an existing row. Output has the same cardinality, every
/// subset it shatters was shattered by the input, and every output row's
/// +1 positions are shattered by the output.
std::set<SignPattern> shifting(const std::set<SignPattern>& patterns, std::size_t m);

struct ShatterWitness {
  int size = 0;
  std::vector<int> witness;  // coordinate indices of a maximal shattered subset
};

/// Largest subset of coordinates on which the patterns realize the full
/// sub-cube, by levelwise search over the (downward-closed) family of
/// shattered subsets. Exact, unlike the max row popcount after shifting,
/// which can undershoot.
ShatterWitness max_shattered_subset(const std::set<SignPattern>& patterns, std::size_t m);

/// Largest subset whose projections cover the full sub-cube at every
/// sampled level. This is the finite-schedule reading of persistent
/// pseudoshattering; intersecting full-batch patterns first would lose
/// subsets whose pattern extensions drift across levels.
ShatterWitness max_persistently_shattered(const SignPatternSet& samples);

/// |patterns| <= sum_{i<=d} C(m, i).
bool sauer_check(const std::set<SignPattern>& patterns, std::size_t m, int d);

struct PsiBracket {
  int lower = 0;  // certified by observed shattering at every level
  int upper = 0;  // the supplied rank bound (r_RR of the algebraic Jacobian)
  std::vector<int> witness;
  SignPatternSet samples;
};

/// Brackets the batch persistent pseudodimension: lower from the persisted
/// pattern set, upper from the rank bound. Equality certifies psi_Z at
/// sampling confidence.
PsiBracket psi_bracket(const DifferenceFamily& fam, const std::vector<Rational>& schedule,
                       std::size_t n_per_level, int rank_upper, std::uint64_t seed,
                       const SamplerConfig& cfg = {},
                       const RationalMatrix* jacobian = nullptr);

}  // namespace reludim
