#pragma once

#include "reludim/network.hpp"
#include "reludim/paths.hpp"
#include "reludim/polyrank.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace reludim {

/// The four ranks of one (parameter, batch) pair plus the inequality-chain
/// verdict dim_ba_fun <= r_R <= r_RR <= rank_alpha.
struct RankProfile {
  int dim_ba_fun = 0;
  int r_R = 0;
  int r_RR = 0;
  int rank_alpha = 0;
  bool chain_ok = false;
  std::size_t batch_size = 0;
  std::size_t param_dim = 0;
  std::size_t path_count = 0;
};

/// Exact gradient of F_theta(x) with respect to theta via backpropagation
/// through the fixed activation pattern. Independent of the symbolic route;
/// x must be parametrically smooth.
std::vector<Rational> numeric_gradient(const Parameter& param, const std::vector<Rational>& x);

/// rank(J E_Z |_theta): the algebraic Jacobian instantiated at theta.
int batch_functional_dimension(const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch);

/// Computes all four ranks. r_R additionally absorbs the rank at theta
/// itself, which is always a valid lower bound for the ring rank.
RankProfile rank_profile(const Parameter& param, const std::vector<std::vector<Rational>>& batch,
                         const RankConfig& rank_cfg = {}, std::size_t path_cap = 1000000);

/// True iff dim_ba_fun equals r_R of the algebraic Jacobian (the real rank
/// stability condition).
bool real_rank_stability_check(const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch,
                               const RankConfig& rank_cfg = {});

struct FunDimEstimate {
  int value = 0;                // achieved Jacobian rank, a certified lower bound
  bool certified_full = false;  // true iff value == D (a full batch was found)
  int samples_tried = 0;
  std::vector<std::vector<Rational>> batch;  // the accepted points
};

/// Greedy growth: sample points from a centered gaussian-like rational
/// lattice with increasing spread, keep a point iff its gradient enlarges
/// the accumulated row span; stop at rank D or after `patience` consecutive
/// non-improving samples. Throws InputError when no smooth point turns up
/// at all within the patience window.
FunDimEstimate estimate_functional_dimension(const Parameter& param, int patience,
                                             std::uint64_t seed);

}  // namespace reludim
