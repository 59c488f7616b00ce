#include "reludim/shatter.hpp"

#include "reludim/errors.hpp"
#include "reludim/rng.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>

namespace reludim {

NetworkBatchEvaluator::NetworkBatchEvaluator(Architecture arch,
                                             std::vector<std::vector<Rational>> batch)
    : arch_(std::move(arch)), batch_(std::move(batch)) {}

std::vector<Rational> NetworkBatchEvaluator::evaluate(const std::vector<Rational>& theta) const {
  Parameter p = Parameter::from_theta(arch_, theta);
  std::vector<Rational> out;
  out.reserve(batch_.size());
  for (const auto& z : batch_) out.push_back(forward(p, z).output);
  return out;
}

DifferenceFamily::DifferenceFamily(std::shared_ptr<const BatchEvaluator> eval,
                                   std::vector<Rational> theta0)
    : eval_(std::move(eval)), theta0_(std::move(theta0)) {
  if (theta0_.size() != eval_->param_dim())
    throw InputError("anchor parameter arity does not match the family");
  if (eval_->batch_size() > 63)
    throw InputError("sign patterns support at most 63 batch points");
  base_ = eval_->evaluate(theta0_);
}

std::vector<Rational> DifferenceFamily::difference(const std::vector<Rational>& theta) const {
  auto v = eval_->evaluate(theta);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= base_[i];
  return v;
}

// The 0.999 margin absorbs the lattice rounding; the exact norm check
// makes membership certain.
std::vector<Rational> sample_ball_point(const std::vector<Rational>& theta0,
                                        const Rational& eps, SplitMix64& rng, int denom_bits) {
  const std::size_t D = theta0.size();
  const double eps_d = to_double(eps);
  const BigInt denom = BigInt(1) << denom_bits;
  const double denom_d = std::ldexp(1.0, denom_bits);

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> g(D);
    double norm2 = 0.0;
    for (auto& v : g) {
      v = rng.next_gaussian();
      norm2 += v * v;
    }
    double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    double radius =
        eps_d * std::pow(rng.next_double(), 1.0 / static_cast<double>(D)) * 0.999;

    std::vector<Rational> point(D);
    Rational dist2 = 0;
    for (std::size_t i = 0; i < D; ++i) {
      double delta = g[i] / norm * radius;
      auto num = static_cast<long long>(std::llround(delta * denom_d));
      Rational step(BigInt(num), denom);
      point[i] = theta0[i] + step;
      dist2 += step * step;
    }
    if (dist2 < eps * eps) return point;
  }
  throw InternalError("ball sampling failed to land inside the radius");
}

LevelSample sample_sign_patterns(const DifferenceFamily& fam, const Rational& eps,
                                 std::size_t n_samples, std::uint64_t seed,
                                 const SamplerConfig& cfg) {
  if (eps <= 0) throw InputError("sampling radius must be positive");
  if (n_samples < 1) throw InputError("need at least one sample");
  LevelSample level;
  level.eps = eps;
  const std::size_t m = fam.batch_size();

  for (std::size_t s = 0; s < n_samples; ++s) {
    SplitMix64 rng(derive_seed(seed, s));
    auto theta = sample_ball_point(fam.anchor(), eps, rng, cfg.denom_bits);
    auto diff = fam.difference(theta);
    ++level.samples;

    SignPattern pat = 0;
    bool zero_hit = false;
    for (std::size_t i = 0; i < m; ++i) {
      int sg = sign_of(diff[i]);
      if (sg == 0) {
        zero_hit = true;  // theta lies in V_Z, excluded by definition
        break;
      }
      if (sg > 0) pat |= (SignPattern{1} << i);
    }
    if (zero_hit) {
      ++level.rejected;
    } else {
      level.patterns.insert(pat);
    }
  }
  return level;
}

void first_order_completion(const DifferenceFamily& fam, const RationalMatrix& jacobian,
                            const Rational& eps, std::set<SignPattern>& patterns) {
  const std::size_t m = fam.batch_size();
  if (jacobian.rows() != m || jacobian.cols() != fam.param_dim())
    throw InputError("jacobian shape does not match the difference family");

  // independent rows of J = pivot columns of J^T
  RrefResult rt = rref(jacobian.transposed());
  const std::vector<std::size_t>& rows = rt.pivot_cols;
  const std::size_t r = rows.size();
  if (r == 0 || r > 12) return;

  RationalMatrix jw(r, jacobian.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < jacobian.cols(); ++c) jw.at(i, c) = jacobian.at(rows[i], c);

  for (SignPattern target = 0; target < (SignPattern{1} << r); ++target) {
    // solve J_W delta = s with free variables pinned to zero
    RationalMatrix aug(r, jw.cols() + 1);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t c = 0; c < jw.cols(); ++c) aug.at(i, c) = jw.at(i, c);
      aug.at(i, jw.cols()) = (target & (SignPattern{1} << i)) ? 1 : -1;
    }
    RrefResult sol = rref(aug);
    std::vector<Rational> delta(jw.cols(), Rational(0));
    bool consistent = true;
    for (std::size_t i = 0; i < sol.pivot_cols.size(); ++i) {
      if (sol.pivot_cols[i] == jw.cols()) {
        consistent = false;  // cannot happen for a full-row-rank system
        break;
      }
      delta[sol.pivot_cols[i]] = sol.rref.at(i, jw.cols());
    }
    if (!consistent) continue;

    Rational delta_norm2 = dot(delta, delta);
    if (delta_norm2 == 0) continue;
    // largest halving of eps with |t delta| < eps/2, checked exactly
    Rational t = eps;
    while (t * t * delta_norm2 * 4 >= eps * eps) t /= 2;

    for (int shrink = 0; shrink < 24; ++shrink, t /= 8) {
      std::vector<Rational> theta = fam.anchor();
      for (std::size_t c = 0; c < delta.size(); ++c) theta[c] += t * delta[c];
      auto diff = fam.difference(theta);
      SignPattern pat = 0;
      bool zero_hit = false;
      for (std::size_t i = 0; i < m; ++i) {
        int sg = sign_of(diff[i]);
        if (sg == 0) {
          zero_hit = true;
          break;
        }
        if (sg > 0) pat |= (SignPattern{1} << i);
      }
      if (zero_hit) continue;
      // accept once the targeted coordinates carry the intended signs
      bool matches = true;
      for (std::size_t i = 0; i < r; ++i) {
        bool want = (target & (SignPattern{1} << i)) != 0;
        bool got = (pat & (SignPattern{1} << rows[i])) != 0;
        if (want != got) {
          matches = false;
          break;
        }
      }
      if (matches) {
        patterns.insert(pat);
        break;
      }
    }
  }
}

SignPatternSet persistent_capacity(const DifferenceFamily& fam,
                                   const std::vector<Rational>& schedule,
                                   std::size_t n_per_level, std::uint64_t seed,
                                   const SamplerConfig& cfg, const RationalMatrix* jacobian) {
  if (schedule.empty()) throw InputError("epsilon schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] <= 0) throw InputError("epsilon schedule entries must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw InputError("epsilon schedule must be strictly decreasing");
  }

  SignPatternSet result;
  result.batch_size = fam.batch_size();
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    LevelSample level =
        sample_sign_patterns(fam, schedule[k], n_per_level, derive_seed(seed, 0xE45, k), cfg);
    if (jacobian) first_order_completion(fam, *jacobian, schedule[k], level.patterns);
    if (k == 0) {
      result.persisted = level.patterns;
    } else {
      std::set<SignPattern> inter;
      std::set_intersection(result.persisted.begin(), result.persisted.end(),
                            level.patterns.begin(), level.patterns.end(),
                            std::inserter(inter, inter.begin()));
      result.persisted = std::move(inter);
    }
    result.levels.push_back(std::move(level));
  }
  return result;
}

std::set<SignPattern> shifting(const std::set<SignPattern>& patterns, std::size_t m) {
  if (m > 63) throw InputError("shifting supports at most 63 coordinates");
  std::set<SignPattern> rows = patterns;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      const SignPattern bit = SignPattern{1} << i;
      // snapshot: each row is visited once per column pass
      std::vector<SignPattern> with_bit;
      for (SignPattern r : rows)
        if (r & bit) with_bit.push_back(r);
      for (SignPattern r : with_bit) {
        SignPattern shifted = r & ~bit;
        if (!rows.count(shifted)) {
          rows.erase(r);
          rows.insert(shifted);
          changed = true;
        }
      }
    }
  }
  return rows;
}

namespace {

bool subset_shattered(const std::set<SignPattern>& patterns, const std::vector<int>& subset) {
  const std::size_t k = subset.size();
  std::set<SignPattern> seen;
  for (SignPattern p : patterns) {
    SignPattern proj = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (p & (SignPattern{1} << subset[i])) proj |= (SignPattern{1} << i);
    seen.insert(proj);
    if (seen.size() == (SignPattern{1} << k)) return true;
  }
  return false;
}

}  // namespace

namespace {

// apriori-style growth over the downward-closed family of subsets passing
// `accept`
ShatterWitness grow_shattered(std::size_t m, std::size_t max_patterns,
                              const std::function<bool(const std::vector<int>&)>& accept) {
  ShatterWitness best;
  std::vector<std::vector<int>> frontier{{}};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier) {
      int start = s.empty() ? 0 : s.back() + 1;
      for (int j = start; j < static_cast<int>(m); ++j) {
        std::vector<int> cand = s;
        cand.push_back(j);
        if (static_cast<std::size_t>(1) << cand.size() > max_patterns) continue;
        if (accept(cand)) {
          if (static_cast<int>(cand.size()) > best.size) {
            best.size = static_cast<int>(cand.size());
            best.witness = cand;
          }
          next.push_back(std::move(cand));
        }
      }
    }
    frontier = std::move(next);
  }
  return best;
}

}  // namespace

ShatterWitness max_shattered_subset(const std::set<SignPattern>& patterns, std::size_t m) {
  if (patterns.empty()) return {};
  return grow_shattered(m, patterns.size(), [&](const std::vector<int>& cand) {
    return subset_shattered(patterns, cand);
  });
}

ShatterWitness max_persistently_shattered(const SignPatternSet& samples) {
  if (samples.levels.empty()) return {};
  std::size_t min_patterns = samples.levels.front().patterns.size();
  for (const auto& level : samples.levels)
    min_patterns = std::min(min_patterns, level.patterns.size());
  if (min_patterns == 0) return {};
  return grow_shattered(samples.batch_size, min_patterns, [&](const std::vector<int>& cand) {
    for (const auto& level : samples.levels)
      if (!subset_shattered(level.patterns, cand)) return false;
    return true;
  });
}

bool sauer_check(const std::set<SignPattern>& patterns, std::size_t m, int d) {
  if (d < 0) throw InputError("sauer bound needs d >= 0");
  BigInt sum = 0;
  BigInt binom = 1;
  for (int i = 0; i <= d && i <= static_cast<int>(m); ++i) {
    sum += binom;
    binom = binom * static_cast<int>(m - i) / (i + 1);
  }
  return BigInt(patterns.size()) <= sum;
}

PsiBracket psi_bracket(const DifferenceFamily& fam, const std::vector<Rational>& schedule,
                       std::size_t n_per_level, int rank_upper, std::uint64_t seed,
                       const SamplerConfig& cfg, const RationalMatrix* jacobian) {
  PsiBracket bracket;
  bracket.samples = persistent_capacity(fam, schedule, n_per_level, seed, cfg, jacobian);
  ShatterWitness w = max_persistently_shattered(bracket.samples);
  bracket.lower = w.size;
  bracket.witness = std::move(w.witness);
  bracket.upper = rank_upper;

  // A lower bound above the rank bound means the schedule has not converged:
  // large radii still reach parameters with different activation structure,
  // where the local linear dependences among the evaluation rows do not
  // bind. Persistence is an eps -> 0 limit, so refine until the excess
  // patterns die out.
  Rational eps = schedule.back();
  for (int extension = 0; bracket.lower > bracket.upper && extension < 24; ++extension) {
    eps /= 2;
    std::size_t k = bracket.samples.levels.size();
    LevelSample level =
        sample_sign_patterns(fam, eps, n_per_level, derive_seed(seed, 0xE45, k), cfg);
    if (jacobian) first_order_completion(fam, *jacobian, eps, level.patterns);
    std::set<SignPattern> inter;
    std::set_intersection(bracket.samples.persisted.begin(), bracket.samples.persisted.end(),
                          level.patterns.begin(), level.patterns.end(),
                          std::inserter(inter, inter.begin()));
    bracket.samples.persisted = std::move(inter);
    bracket.samples.levels.push_back(std::move(level));
    ShatterWitness wr = max_persistently_shattered(bracket.samples);
    bracket.lower = wr.size;
    bracket.witness = std::move(wr.witness);
  }
  if (bracket.lower > bracket.upper)
    throw InternalError("observed shattering exceeds the rank upper bound");
  return bracket;
}

}  // namespace reludim
