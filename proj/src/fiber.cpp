#include "reludim/fiber.hpp"

#include "reludim/errors.hpp"
#include "reludim/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace reludim {

namespace {

std::vector<Rational> evaluate_batch(const Parameter& param,
                                     const std::vector<std::vector<Rational>>& batch) {
  std::vector<Rational> out;
  out.reserve(batch.size());
  for (const auto& z : batch) out.push_back(forward(param, z).output);
  return out;
}

std::vector<TernaryPattern> batch_patterns(const Parameter& param,
                                           const std::vector<std::vector<Rational>>& batch) {
  std::vector<TernaryPattern> pats;
  pats.reserve(batch.size());
  for (const auto& z : batch) pats.push_back(ternary_label(param, z));
  return pats;
}

bool hidden_patterns_match(const std::vector<TernaryPattern>& a,
                           const std::vector<TernaryPattern>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& sa = a[i].signs;
    const auto& sb = b[i].signs;
    for (std::size_t l = 0; l + 1 < sa.size(); ++l)
      if (sa[l] != sb[l]) return false;
  }
  return true;
}

Rational max_abs(const std::vector<Rational>& v) {
  Rational m = 0;
  for (const auto& x : v) {
    Rational a = x < 0 ? -x : x;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace

std::vector<std::vector<Rational>> jacobian_null_space(
    const Parameter& param, const std::vector<std::vector<Rational>>& batch) {
  const std::size_t D = param.arch().param_count();
  if (batch.empty()) {
    // the kernel of an empty map is everything
    std::vector<std::vector<Rational>> basis;
    for (std::size_t i = 0; i < D; ++i) {
      std::vector<Rational> e(D, Rational(0));
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  PolyMatrix jac = algebraic_jacobian(param, batch);
  return null_space(jac.instantiate(param.unroll()));
}

bool constancy_order_check(const Parameter& param,
                           const std::vector<std::vector<Rational>>& batch,
                           const std::vector<Rational>& direction,
                           const std::vector<Rational>& t_grid) {
  if (t_grid.empty()) throw InputError("constancy check needs at least one step size");
  const auto theta0 = param.unroll();
  if (direction.size() != theta0.size())
    throw InputError("direction length does not match the parameter dimension");
  const auto base_values = evaluate_batch(param, batch);
  const auto base_patterns = batch_patterns(param, batch);

  struct Pair {
    Rational t, dev;
  };
  std::vector<Pair> measured;
  for (Rational t : t_grid) {
    bool landed = false;
    for (int halving = 0; halving < 12 && !landed; ++halving) {
      std::vector<Rational> theta = theta0;
      for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += t * direction[i];
      Parameter moved = Parameter::from_theta(param.arch(), theta);
      if (!hidden_patterns_match(base_patterns, batch_patterns(moved, batch))) {
        t /= 2;
        continue;
      }
      auto values = evaluate_batch(moved, batch);
      for (std::size_t i = 0; i < values.size(); ++i) values[i] -= base_values[i];
      measured.push_back({t, max_abs(values)});
      landed = true;
    }
    if (!landed)
      throw InputError("activation pattern changed at every trial step; step too large");
  }

  std::sort(measured.begin(), measured.end(),
            [](const Pair& a, const Pair& b) { return a.t > b.t; });
  std::size_t fit = measured.size();
  for (std::size_t i = 0; i < measured.size(); ++i)
    if (measured[i].dev != 0) {
      fit = i;
      break;
    }
  if (fit == measured.size()) return true;  // identically constant along v

  const Rational& t_fit = measured[fit].t;
  const Rational& dev_fit = measured[fit].dev;
  for (std::size_t i = fit + 1; i < measured.size(); ++i) {
    // dev <= 2 C t^2 with C = dev_fit / t_fit^2, cross-multiplied
    if (measured[i].dev * t_fit * t_fit > 2 * dev_fit * measured[i].t * measured[i].t)
      return false;
  }
  return true;
}

FiberWalkReport fiber_walk(const Parameter& param,
                           const std::vector<std::vector<Rational>>& batch,
                           const FiberWalkConfig& cfg) {
  FiberWalkReport report;
  report.final_theta = param.unroll();
  if (batch.empty()) {
    report.success = true;
    return report;
  }
  if (!real_rank_stability_check(param, batch, cfg.rank_cfg)) {
    report.error = "parameter is not in the real rank stable set for this batch";
    return report;
  }

  const Architecture& arch = param.arch();
  const std::size_t D = arch.param_count();
  const std::size_t m = batch.size();
  const PolyMatrix jac = algebraic_jacobian(param, batch);  // valid while patterns hold
  const auto base_values = evaluate_batch(param, batch);
  const auto base_patterns = batch_patterns(param, batch);
  const int base_rank = rank_rational(jac.instantiate(param.unroll()));
  report.ranks.push_back(base_rank);

  SplitMix64 rng(derive_seed(cfg.seed, 0xF1BE));
  std::vector<Rational> theta = param.unroll();

  auto rationalize = [](const std::vector<double>& v) {
    std::vector<Rational> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = rational_from_double(v[i]);
    return out;
  };

  // the symbolic Jacobian doubles as the GN model while patterns hold
  auto jacobian_at = [&](const std::vector<double>& point) {
    Eigen::MatrixXd j(m, D);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < D; ++c) j(r, c) = jac.at(r, c).eval_double(point);
    return j;
  };
  auto residual_at = [&](const Parameter& p) {
    auto values = evaluate_batch(p, batch);
    Eigen::VectorXd r(m);
    for (std::size_t i = 0; i < m; ++i) r(i) = to_double(values[i] - base_values[i]);
    return r;
  };

  for (int step = 0; step < cfg.steps; ++step) {
    auto kernel = null_space(jac.instantiate(theta));
    if (kernel.empty()) {
      report.success = true;  // rank D: the fiber is locally a single point
      return report;
    }

    // random unit combination of the kernel basis
    std::vector<double> dir(D, 0.0);
    for (const auto& k : kernel) {
      double w = rng.next_gaussian();
      for (std::size_t i = 0; i < D; ++i) dir[i] += w * to_double(k[i]);
    }
    double norm = 0.0;
    for (double v : dir) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;

    std::vector<double> theta_d(D);
    for (std::size_t i = 0; i < D; ++i) theta_d[i] = to_double(theta[i]);

    double scale = cfg.step_size / norm;
    bool landed = false;
    for (int halving = 0; halving < 8 && !landed; ++halving, scale /= 2) {
      std::vector<double> cand = theta_d;
      for (std::size_t i = 0; i < D; ++i) cand[i] += scale * dir[i];
      {
        Parameter moved = Parameter::from_theta(arch, rationalize(cand));
        if (!hidden_patterns_match(base_patterns, batch_patterns(moved, batch))) continue;
      }

      // Gauss-Newton correction back onto the fiber (min-norm steps)
      bool converged = false;
      for (int it = 0; it < cfg.max_gn_iterations && !converged; ++it) {
        Parameter cur = Parameter::from_theta(arch, rationalize(cand));
        Eigen::VectorXd r = residual_at(cur);
        if (r.lpNorm<Eigen::Infinity>() <= cfg.tolerance) {
          converged = true;
          break;
        }
        Eigen::MatrixXd j = jacobian_at(cand);
        Eigen::VectorXd delta = j.completeOrthogonalDecomposition().solve(r);
        for (std::size_t i = 0; i < D; ++i) cand[i] -= delta(i);
      }
      if (!converged) {
        report.error = "Gauss-Newton correction failed to converge within the iteration cap";
        return report;
      }

      auto cand_rat = rationalize(cand);
      Parameter corrected = Parameter::from_theta(arch, cand_rat);
      if (!hidden_patterns_match(base_patterns, batch_patterns(corrected, batch))) continue;

      int rank_now = rank_rational(jac.instantiate(cand_rat));
      if (rank_now != base_rank) {
        report.error = "rank changed along the walk; left the stable stratum";
        return report;
      }

      auto values = evaluate_batch(corrected, batch);
      for (std::size_t i = 0; i < m; ++i) values[i] -= base_values[i];
      Rational dev = max_abs(values);
      double dev_d = to_double(dev);
      report.max_deviation = std::max(report.max_deviation, dev_d);
      report.step_residuals.push_back(dev_d);
      report.ranks.push_back(rank_now);
      theta = cand_rat;
      report.final_theta = std::move(cand_rat);
      landed = true;
    }
    if (!landed) {
      report.error = "step crossed an activation boundary at every attempted size";
      return report;
    }
    ++report.steps_taken;
  }
  report.success = true;
  return report;
}

Rational gradient_rowspace_check(const Parameter& param,
                                 const std::vector<std::vector<Rational>>& batch,
                                 const std::vector<Rational>& labels) {
  if (labels.size() != batch.size())
    throw InputError("label count does not match the batch size");
  const std::size_t D = param.arch().param_count();
  if (batch.empty()) return Rational(0);

  RationalMatrix jac(0, D);
  std::vector<Rational> grad(D, Rational(0));
  const Rational scale(1, static_cast<long>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto row = numeric_gradient(param, batch[i]);
    Rational err = forward(param, batch[i]).output - labels[i];
    for (std::size_t c = 0; c < D; ++c) grad[c] += scale * err * row[c];
    jac.append_row(row);
  }
  auto residual = orthogonal_to_rowspace(jac, grad);
  return dot(residual, residual);
}

}  // namespace reludim
