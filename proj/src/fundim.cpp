#include "reludim/fundim.hpp"

#include "reludim/errors.hpp"
#include "reludim/rng.hpp"

#include <algorithm>

namespace reludim {

std::vector<Rational> numeric_gradient(const Parameter& param, const std::vector<Rational>& x) {
  const Architecture& arch = param.arch();
  const int d = arch.depth();

  // forward pass keeping post-activation values per layer
  std::vector<std::vector<Rational>> acts;  // acts[l] = activations entering layer l+1
  std::vector<std::vector<int>> signs;
  acts.push_back(x);
  for (int l = 1; l <= d; ++l) {
    std::vector<Rational> pre(arch.width(l));
    std::vector<int> sg(arch.width(l));
    for (int j = 0; j < arch.width(l); ++j) {
      Rational s = param.bias(l)[j];
      for (int i = 0; i < arch.width(l - 1); ++i) s += param.weight(l).at(j, i) * acts[l - 1][i];
      sg[j] = sign_of(s);
      if (l < d && s < 0) s = 0;
      pre[j] = s;
    }
    signs.push_back(std::move(sg));
    acts.push_back(std::move(pre));
  }
  for (int l = 0; l + 1 < d; ++l)
    for (int s : signs[l])
      if (s == 0) throw InputError("gradient requested at a non-smooth point");

  // backward pass: delta[j] = dF/d(pre-activation of neuron j in layer l)
  std::vector<Rational> theta_grad(arch.param_count(), Rational(0));
  std::vector<Rational> delta(1, Rational(1));
  for (int l = d; l >= 1; --l) {
    for (int j = 0; j < arch.width(l); ++j) {
      if (delta[j] == 0) continue;
      theta_grad[arch.bias_index(l, j)] = delta[j];
      for (int i = 0; i < arch.width(l - 1); ++i)
        theta_grad[arch.weight_index(l, j, i)] = delta[j] * acts[l - 1][i];
    }
    if (l == 1) break;
    std::vector<Rational> prev(arch.width(l - 1), Rational(0));
    for (int i = 0; i < arch.width(l - 1); ++i) {
      if (signs[l - 2][i] <= 0) continue;  // inactive neuron blocks the path
      Rational s = 0;
      for (int j = 0; j < arch.width(l); ++j) s += param.weight(l).at(j, i) * delta[j];
      prev[i] = s;
    }
    delta = std::move(prev);
  }
  return theta_grad;
}

int batch_functional_dimension(const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch) {
  if (batch.empty()) return 0;
  PolyMatrix jac = algebraic_jacobian(param, batch);
  return rank_rational(jac.instantiate(param.unroll()));
}

RankProfile rank_profile(const Parameter& param, const std::vector<std::vector<Rational>>& batch,
                         const RankConfig& rank_cfg, std::size_t path_cap) {
  RankProfile profile;
  profile.batch_size = batch.size();
  profile.param_dim = param.arch().param_count();

  PathTable table = enumerate_complete_paths(param.arch(), path_cap);
  profile.path_count = table.size();

  if (batch.empty()) {
    profile.chain_ok = true;
    return profile;
  }

  PolyMatrix jac = algebraic_jacobian(param, batch);
  profile.dim_ba_fun = rank_rational(jac.instantiate(param.unroll()));
  // the instantiated rank at theta itself lower-bounds r_R as well
  profile.r_R = std::max(r_R_rank(jac, rank_cfg), profile.dim_ba_fun);
  profile.r_RR = r_RR_rank(jac);
  profile.rank_alpha = rank_rational(activation_matrix(table, param, batch).real);

  const int m = static_cast<int>(batch.size());
  const int D = static_cast<int>(profile.param_dim);
  profile.chain_ok = profile.dim_ba_fun <= profile.r_R && profile.r_R <= profile.r_RR &&
                     profile.r_RR <= profile.rank_alpha &&
                     profile.r_RR <= std::min(m, D) &&
                     profile.rank_alpha <= std::min<std::int64_t>(m, profile.path_count);
  return profile;
}

bool real_rank_stability_check(const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch,
                               const RankConfig& rank_cfg) {
  if (batch.empty()) return true;
  PolyMatrix jac = algebraic_jacobian(param, batch);
  int dim_ba = rank_rational(jac.instantiate(param.unroll()));
  return dim_ba == r_R_rank(jac, rank_cfg);
}

FunDimEstimate estimate_functional_dimension(const Parameter& param, int patience,
                                             std::uint64_t seed) {
  if (patience < 1) throw InputError("patience must be positive");
  const Architecture& arch = param.arch();
  const std::size_t D = arch.param_count();
  const int n0 = arch.input_dim();

  FunDimEstimate est;
  RowSpan span(D);
  SplitMix64 rng(derive_seed(seed, 0x5EED));
  int since_improvement = 0;
  bool found_smooth = false;

  // denominator-64 lattice keeps points exact while the gaussian spread
  // drifts the walk across activation regions
  const std::int64_t lattice = 64;
  while (since_improvement < patience) {
    ++est.samples_tried;
    double spread = 1.0 + 0.1 * static_cast<double>(est.samples_tried);
    std::vector<Rational> x(n0);
    for (int i = 0; i < n0; ++i) {
      double g = rng.next_gaussian() * spread;
      auto num = static_cast<std::int64_t>(std::llround(g * static_cast<double>(lattice)));
      x[i] = Rational(num, lattice);
    }
    if (!is_parametrically_smooth(param, x)) {
      ++since_improvement;
      continue;
    }
    found_smooth = true;
    if (span.try_add(numeric_gradient(param, x))) {
      since_improvement = 0;
      est.batch.push_back(std::move(x));
      if (span.rank() == static_cast<int>(D)) break;
    } else {
      ++since_improvement;
    }
  }
  if (!found_smooth)
    throw InputError("no parametrically smooth point found within the patience budget");
  est.value = span.rank();
  est.certified_full = est.value == static_cast<int>(D);
  return est;
}

}  // namespace reludim
