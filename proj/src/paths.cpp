#include "reludim/paths.hpp"

#include "reludim/errors.hpp"

#include <string>

namespace reludim {

namespace {

// active = strictly positive pre-activation, one flag vector per hidden layer
std::vector<std::vector<bool>> hidden_activity(const Parameter& param,
                                               const std::vector<Rational>& x) {
  TernaryPattern pattern = ternary_label(param, x);
  std::vector<std::vector<bool>> act;
  for (int l = 0; l + 1 < static_cast<int>(pattern.signs.size()); ++l) {
    std::vector<bool> layer(pattern.signs[l].size());
    for (std::size_t i = 0; i < layer.size(); ++i) layer[i] = pattern.signs[l][i] > 0;
    act.push_back(std::move(layer));
  }
  return act;
}

void extend_path(const Architecture& arch, CompletePath& prefix, int layer,
                 std::size_t cap, std::vector<CompletePath>& out) {
  const int d = arch.depth();
  if (layer == d) {
    out.push_back(prefix);
    if (out.size() > cap)
      throw BudgetError("path enumeration exceeds cap of " + std::to_string(cap));
    return;
  }
  for (int v = 0; v < arch.width(layer + 1); ++v) {
    prefix.nodes.push_back(v);
    extend_path(arch, prefix, layer + 1, cap, out);
    prefix.nodes.pop_back();
  }
}

SparsePoly path_monomial(const Architecture& arch, const CompletePath& path) {
  const std::size_t D = arch.param_count();
  Monomial mono(D, 0);
  int layer = path.start_layer;
  if (path.kind == CompletePath::Kind::kBias) {
    mono[arch.bias_index(layer + 1, path.nodes[0])] += 1;
  } else {
    mono[arch.weight_index(layer + 1, path.nodes[0], path.start_index)] += 1;
  }
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    int l = layer + 1 + static_cast<int>(k);
    mono[arch.weight_index(l, path.nodes[k], path.nodes[k - 1])] += 1;
  }
  SparsePoly p(D);
  p.add_term(mono, Rational(1));
  return p;
}

}  // namespace

std::size_t PathTable::expected_count(const Architecture& arch) {
  const int d = arch.depth();
  std::size_t count = 1;  // input-started: prod_{l=0}^{d} n_l
  for (int l = 0; l <= d; ++l) count *= static_cast<std::size_t>(arch.width(l));
  for (int j = 0; j < d; ++j) {
    std::size_t c = 1;  // bias vertex of layer j
    for (int l = j + 1; l <= d; ++l) c *= static_cast<std::size_t>(arch.width(l));
    count += c;
  }
  return count;
}

PathTable enumerate_complete_paths(const Architecture& arch, std::size_t cap) {
  if (PathTable::expected_count(arch) > cap)
    throw BudgetError("architecture " + arch.to_string() + " has " +
                      std::to_string(PathTable::expected_count(arch)) +
                      " complete paths, above the cap of " + std::to_string(cap));
  std::vector<CompletePath> paths;
  const std::size_t D = arch.param_count();

  for (int i = 0; i < arch.input_dim(); ++i) {
    CompletePath p;
    p.kind = CompletePath::Kind::kInput;
    p.start_layer = 0;
    p.start_index = i;
    p.monomial = SparsePoly(D);
    extend_path(arch, p, 0, cap, paths);
  }
  for (int j = 0; j < arch.depth(); ++j) {
    CompletePath p;
    p.kind = CompletePath::Kind::kBias;
    p.start_layer = j;
    p.start_index = 0;
    p.monomial = SparsePoly(D);
    extend_path(arch, p, j, cap, paths);
  }
  for (auto& p : paths) p.monomial = path_monomial(arch, p);
  return PathTable(arch, std::move(paths));
}

std::vector<bool> open_paths(const PathTable& table, const Parameter& param,
                             const std::vector<Rational>& x) {
  const Architecture& arch = table.arch();
  const int d = arch.depth();
  auto active = hidden_activity(param, x);
  std::vector<bool> mask(table.size());
  for (std::size_t pi = 0; pi < table.size(); ++pi) {
    const CompletePath& p = table.paths()[pi];
    bool open = true;
    // nodes cover layers start_layer+1 .. d; ReLU applies through layer d-1
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      int layer = p.start_layer + 1 + static_cast<int>(k);
      if (layer >= d) break;
      if (!active[layer - 1][p.nodes[k]]) {
        open = false;
        break;
      }
    }
    mask[pi] = open;
  }
  return mask;
}

std::size_t expected_open_count(const Architecture& arch, const TernaryPattern& pattern) {
  const int d = arch.depth();
  std::vector<std::size_t> active_count(d - 1);
  for (int l = 1; l < d; ++l) {
    std::size_t c = 0;
    for (int s : pattern.signs[l - 1])
      if (s > 0) ++c;
    active_count[l - 1] = c;
  }
  auto open_through = [&](int first_hidden) {
    std::size_t c = 1;
    for (int l = first_hidden; l < d; ++l) c *= active_count[l - 1];
    return c;
  };
  std::size_t total = static_cast<std::size_t>(arch.input_dim()) * open_through(1);
  for (int j = 0; j < d; ++j) total += open_through(j + 1);
  return total;
}

SparsePoly algebraic_representation(const PathTable& table, const Parameter& param,
                                    const std::vector<Rational>& x) {
  if (!is_parametrically_smooth(param, x))
    throw InputError("(theta, x) is not a parametrically smooth point");
  const Architecture& arch = table.arch();
  const std::size_t D = arch.param_count();
  const std::size_t n0 = static_cast<std::size_t>(arch.input_dim());
  auto mask = open_paths(table, param, x);

  SparsePoly p(D + n0);
  for (std::size_t pi = 0; pi < table.size(); ++pi) {
    if (!mask[pi]) continue;
    const CompletePath& path = table.paths()[pi];
    // embed the theta-monomial into the joint (theta, x) ring
    for (const auto& [mono, coef] : path.monomial.terms()) {
      Monomial joint(D + n0, 0);
      for (std::size_t i = 0; i < D; ++i) joint[i] = mono[i];
      if (path.kind == CompletePath::Kind::kInput)
        joint[D + static_cast<std::size_t>(path.start_index)] += 1;
      p.add_term(joint, coef);
    }
  }
  return p;
}

std::vector<SparsePoly> algebraic_evaluation(const Parameter& param,
                                             const std::vector<std::vector<Rational>>& batch) {
  const Architecture& arch = param.arch();
  const std::size_t D = arch.param_count();
  std::vector<SparsePoly> result;
  result.reserve(batch.size());

  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    const auto& z = batch[bi];
    ForwardResult fwd = forward(param, z);
    if (!fwd.pattern.hidden_no_zeros())
      throw InputError("batch point " + std::to_string(bi) +
                       " is not parametrically smooth for this parameter");

    // compose layer maps symbolically, gating by the exact activation pattern
    std::vector<SparsePoly> act;
    for (const Rational& c : z) act.push_back(SparsePoly::constant(D, c));
    for (int l = 1; l <= arch.depth(); ++l) {
      std::vector<SparsePoly> next;
      for (int j = 0; j < arch.width(l); ++j) {
        SparsePoly pre = SparsePoly::variable(D, arch.bias_index(l, j));
        for (int i = 0; i < arch.width(l - 1); ++i)
          pre += SparsePoly::variable(D, arch.weight_index(l, j, i)) * act[i];
        if (l < arch.depth() && fwd.pattern.signs[l - 1][j] < 0) pre = SparsePoly(D);
        next.push_back(std::move(pre));
      }
      act = std::move(next);
    }
    result.push_back(std::move(act[0]));
  }
  return result;
}

PolyMatrix algebraic_jacobian(const Parameter& param,
                              const std::vector<std::vector<Rational>>& batch) {
  const std::size_t D = param.arch().param_count();
  auto polys = algebraic_evaluation(param, batch);
  PolyMatrix jac(polys.size(), D, D);
  for (std::size_t r = 0; r < polys.size(); ++r)
    for (std::size_t c = 0; c < D; ++c) jac.at(r, c) = polys[r].partial(c);
  return jac;
}

ActivationMatrixPair activation_matrix(const PathTable& table, const Parameter& param,
                                       const std::vector<std::vector<Rational>>& batch) {
  const Architecture& arch = table.arch();
  const std::size_t n0 = static_cast<std::size_t>(arch.input_dim());

  ActivationMatrixPair pair;
  pair.algebraic = PolyMatrix(batch.size(), table.size(), n0);
  pair.real = RationalMatrix(batch.size(), table.size());

  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    if (!is_parametrically_smooth(param, batch[bi]))
      throw InputError("batch point " + std::to_string(bi) +
                       " is not parametrically smooth for this parameter");
    auto mask = open_paths(table, param, batch[bi]);
    for (std::size_t pi = 0; pi < table.size(); ++pi) {
      if (!mask[pi]) continue;
      const CompletePath& p = table.paths()[pi];
      if (p.kind == CompletePath::Kind::kBias) {
        pair.algebraic.at(bi, pi) = SparsePoly::constant(n0, Rational(1));
        pair.real.at(bi, pi) = 1;
      } else {
        pair.algebraic.at(bi, pi) =
            SparsePoly::variable(n0, static_cast<std::size_t>(p.start_index));
        pair.real.at(bi, pi) = batch[bi][static_cast<std::size_t>(p.start_index)];
      }
    }
  }
  return pair;
}

bool verify_path_factorization(const PathTable& table, const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch) {
  auto pair = activation_matrix(table, param, batch);
  auto evals = algebraic_evaluation(param, batch);
  const std::size_t D = param.arch().param_count();
  for (std::size_t bi = 0; bi < batch.size(); ++bi) {
    SparsePoly row_product(D);
    for (std::size_t pi = 0; pi < table.size(); ++pi) {
      const Rational& a = pair.real.at(bi, pi);
      if (a != 0) row_product += table.paths()[pi].monomial.scaled(a);
    }
    if (!(row_product == evals[bi])) return false;
  }
  return true;
}

}  // namespace reludim
