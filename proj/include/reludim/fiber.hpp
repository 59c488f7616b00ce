#pragma once

#include "reludim/fundim.hpp"
#include "reludim/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace reludim {

/// Exact rational basis of ker(J E_Z |_theta); dimension D - dim_ba_fun.
std::vector<std::vector<Rational>> jacobian_null_space(
    const Parameter& param, const std::vector<std::vector<Rational>>& batch);

/// Verifies that moving from theta along v changes E_Z only to second
/// order: fits C on the largest step with nonzero deviation and requires
/// deviation <= 2 C t^2 on the smaller steps, all in exact arithmetic.
/// Steps that leave the activation pattern are halved first.
bool constancy_order_check(const Parameter& param,
                           const std::vector<std::vector<Rational>>& batch,
                           const std::vector<Rational>& direction,
                           const std::vector<Rational>& t_grid);

struct FiberWalkConfig {
  int steps = 20;
  double step_size = 1e-2;
  double tolerance = 1e-9;
  int max_gn_iterations = 50;
  std::uint64_t seed = 1;
  RankConfig rank_cfg;
};

struct FiberWalkReport {
  int steps_taken = 0;
  double max_deviation = 0.0;             // exact |E_Z(theta_t) - E_Z(theta_0)|_inf
  std::vector<double> step_residuals;     // post-correction residual per step
  std::vector<int> ranks;                 // batch functional dimension per step
  std::vector<Rational> final_theta;
  bool success = false;
  std::string error;
};

/// Alternates a random null-space step with Gauss-Newton correction back
/// onto the batch fiber. The parameter must be in the real rank stable set
/// for the batch; activation patterns are re-verified exactly after every
/// float move and the rank must stay constant.
FiberWalkReport fiber_walk(const Parameter& param,
                           const std::vector<std::vector<Rational>>& batch,
                           const FiberWalkConfig& cfg = {});

/// Squared norm of the component of grad L_Z orthogonal to the row space
/// of J E_Z |_theta, for the squared loss against the given labels.
/// Exactly zero in rational arithmetic.
Rational gradient_rowspace_check(const Parameter& param,
                                 const std::vector<std::vector<Rational>>& batch,
                                 const std::vector<Rational>& labels);

}  // namespace reludim
