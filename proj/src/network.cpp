#include "reludim/network.hpp"

#include "reludim/errors.hpp"

#include <algorithm>
#include <sstream>

namespace reludim {

Architecture::Architecture(std::vector<int> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw InputError("architecture needs at least input and output layers");
  for (int w : widths_)
    if (w < 1) throw InputError("all layer widths must be positive");
  if (widths_.back() != 1)
    throw InputError("output dimension must be 1; networks with wider output are out of scope");
}

std::size_t Architecture::param_count() const {
  std::size_t d = 0;
  for (std::size_t l = 1; l < widths_.size(); ++l)
    d += static_cast<std::size_t>(widths_[l]) * (widths_[l - 1] + 1);
  return d;
}

std::size_t Architecture::weight_index(int layer, int neuron, int in) const {
  std::size_t off = 0;
  for (int l = 1; l < layer; ++l)
    off += static_cast<std::size_t>(width(l)) * (width(l - 1) + 1);
  return off + static_cast<std::size_t>(neuron) * (width(layer - 1) + 1) + in;
}

std::size_t Architecture::bias_index(int layer, int neuron) const {
  return weight_index(layer, neuron, width(layer - 1));
}

std::string Architecture::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i + 1 < widths_.size(); ++i) {
    if (i) os << ",";
    os << widths_[i];
  }
  os << "|" << widths_.back() << ")";
  return os.str();
}

Parameter::Parameter(Architecture arch, std::vector<RationalMatrix> weights,
                     std::vector<std::vector<Rational>> biases)
    : arch_(std::move(arch)), weights_(std::move(weights)), biases_(std::move(biases)) {
  const int d = arch_.depth();
  if (static_cast<int>(weights_.size()) != d || static_cast<int>(biases_.size()) != d)
    throw InputError("layer count mismatch between parameter and architecture");
  for (int l = 1; l <= d; ++l) {
    const auto& w = weights_[l - 1];
    if (w.rows() != static_cast<std::size_t>(arch_.width(l)) ||
        w.cols() != static_cast<std::size_t>(arch_.width(l - 1)))
      throw InputError("weight matrix shape mismatch at layer " + std::to_string(l));
    if (biases_[l - 1].size() != static_cast<std::size_t>(arch_.width(l)))
      throw InputError("bias vector length mismatch at layer " + std::to_string(l));
  }
}

Parameter Parameter::from_theta(const Architecture& arch, const std::vector<Rational>& theta) {
  if (theta.size() != arch.param_count())
    throw InputError("parameter vector length does not match architecture");
  std::vector<RationalMatrix> weights;
  std::vector<std::vector<Rational>> biases;
  for (int l = 1; l <= arch.depth(); ++l) {
    RationalMatrix w(arch.width(l), arch.width(l - 1));
    std::vector<Rational> b(arch.width(l));
    for (int j = 0; j < arch.width(l); ++j) {
      for (int i = 0; i < arch.width(l - 1); ++i) w.at(j, i) = theta[arch.weight_index(l, j, i)];
      b[j] = theta[arch.bias_index(l, j)];
    }
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  return Parameter(arch, std::move(weights), std::move(biases));
}

Parameter Parameter::zero(const Architecture& arch) {
  return from_theta(arch, std::vector<Rational>(arch.param_count(), Rational(0)));
}

std::vector<Rational> Parameter::unroll() const {
  std::vector<Rational> theta(arch_.param_count());
  for (int l = 1; l <= arch_.depth(); ++l) {
    for (int j = 0; j < arch_.width(l); ++j) {
      for (int i = 0; i < arch_.width(l - 1); ++i)
        theta[arch_.weight_index(l, j, i)] = weights_[l - 1].at(j, i);
      theta[arch_.bias_index(l, j)] = biases_[l - 1][j];
    }
  }
  return theta;
}

bool TernaryPattern::hidden_no_zeros() const {
  for (std::size_t l = 0; l + 1 < signs.size(); ++l)
    for (int s : signs[l])
      if (s == 0) return false;
  return true;
}

ForwardResult forward(const Parameter& param, const std::vector<Rational>& x) {
  const Architecture& arch = param.arch();
  if (x.size() != static_cast<std::size_t>(arch.input_dim()))
    throw InputError("input length does not match architecture");

  ForwardResult res;
  std::vector<Rational> act = x;
  for (int l = 1; l <= arch.depth(); ++l) {
    const auto& w = param.weight(l);
    const auto& b = param.bias(l);
    std::vector<Rational> pre(arch.width(l));
    std::vector<int> signs(arch.width(l));
    for (int j = 0; j < arch.width(l); ++j) {
      Rational s = b[j];
      for (int i = 0; i < arch.width(l - 1); ++i) s += w.at(j, i) * act[i];
      pre[j] = s;
      signs[j] = sign_of(s);
    }
    res.pattern.signs.push_back(std::move(signs));
    if (l < arch.depth()) {
      for (auto& v : pre)
        if (v < 0) v = 0;
    }
    act = std::move(pre);
  }
  res.output = act[0];
  return res;
}

double forward_double(const Parameter& param, const std::vector<double>& x) {
  const Architecture& arch = param.arch();
  if (x.size() != static_cast<std::size_t>(arch.input_dim()))
    throw InputError("input length does not match architecture");
  std::vector<double> act = x;
  for (int l = 1; l <= arch.depth(); ++l) {
    std::vector<double> pre(arch.width(l));
    for (int j = 0; j < arch.width(l); ++j) {
      double s = to_double(param.bias(l)[j]);
      for (int i = 0; i < arch.width(l - 1); ++i)
        s += to_double(param.weight(l).at(j, i)) * act[i];
      pre[j] = (l < arch.depth() && s < 0.0) ? 0.0 : s;
    }
    act = std::move(pre);
  }
  return act[0];
}

TernaryPattern ternary_label(const Parameter& param, const std::vector<Rational>& x) {
  return forward(param, x).pattern;
}

bool is_parametrically_smooth(const Parameter& param, const std::vector<Rational>& x) {
  return ternary_label(param, x).hidden_no_zeros();
}

bool GenericityReport::all_generic() const {
  return std::all_of(layers.begin(), layers.end(),
                     [](const LayerResult& l) { return l.generic && !l.skipped; });
}

bool GenericityReport::any_skipped() const {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerResult& l) { return l.skipped; });
}

GenericityReport layer_genericity_check(const Parameter& param, int cap) {
  const Architecture& arch = param.arch();
  GenericityReport report;
  for (int l = 1; l <= arch.depth(); ++l) {
    GenericityReport::LayerResult layer;
    const int n = arch.width(l);          // hyperplanes in this arrangement
    const int dim = arch.width(l - 1);    // ambient dimension
    if (n > cap) {
      layer.skipped = true;
      layer.generic = false;
      report.layers.push_back(std::move(layer));
      continue;
    }
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) subset.push_back(i);
      const int k = static_cast<int>(subset.size());

      RationalMatrix normals(k, dim);
      std::vector<Rational> rhs(k);
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < dim; ++c) normals.at(r, c) = param.weight(l).at(subset[r], c);
        rhs[r] = -param.bias(l)[subset[r]];
      }
      bool ok;
      if (k <= dim) {
        ok = rank_rational(normals) == k;
      } else {
        // over-determined intersections must be empty
        ok = !system_consistent(normals, rhs);
      }
      if (!ok) {
        layer.generic = false;
        layer.violations.push_back(subset);
      }
    }
    report.layers.push_back(std::move(layer));
  }
  return report;
}

}  // namespace reludim
