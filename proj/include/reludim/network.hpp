#pragma once

#include "reludim/linalg.hpp"
#include "reludim/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace reludim {

/// Feedforward ReLU architecture (n_0, ..., n_{d-1} | n_d) with n_d = 1.
class Architecture {
 public:
  explicit Architecture(std::vector<int> widths);

  const std::vector<int>& widths() const { return widths_; }
  int depth() const { return static_cast<int>(widths_.size()) - 1; }
  int input_dim() const { return widths_.front(); }
  int width(int layer) const { return widths_[static_cast<std::size_t>(layer)]; }

  /// D = sum over layers of n_l * (n_{l-1} + 1).
  std::size_t param_count() const;

  /// Unrolling order: per layer, per neuron, the weight row followed by the
  /// neuron's bias (the augmented matrix [W | b] in row-major order). This is
  /// the numbering under which the (1,2|1) architecture reads
  /// t5*relu(t1*x + t2) + t6*relu(t3*x + t4) + t7.
  std::size_t weight_index(int layer, int neuron, int in) const;  // 1-based layer, 0-based rest
  std::size_t bias_index(int layer, int neuron) const;

  bool operator==(const Architecture& other) const = default;

  std::string to_string() const;

 private:
  std::vector<int> widths_;
};

/// Exact-rational weights and biases for a fixed architecture.
class Parameter {
 public:
  Parameter(Architecture arch, std::vector<RationalMatrix> weights,
            std::vector<std::vector<Rational>> biases);

  static Parameter from_theta(const Architecture& arch, const std::vector<Rational>& theta);
  static Parameter zero(const Architecture& arch);

  const Architecture& arch() const { return arch_; }
  const RationalMatrix& weight(int layer) const { return weights_[layer - 1]; }
  const std::vector<Rational>& bias(int layer) const { return biases_[layer - 1]; }

  /// Round-trips exactly with from_theta.
  std::vector<Rational> unroll() const;

 private:
  Architecture arch_;
  std::vector<RationalMatrix> weights_;  // weights_[l-1] is n_l x n_{l-1}
  std::vector<std::vector<Rational>> biases_;
};

/// Per-neuron pre-activation signs, one vector per layer 1..d.
struct TernaryPattern {
  std::vector<std::vector<int>> signs;

  bool operator==(const TernaryPattern& other) const = default;

  /// No zero among hidden layers 1..d-1 (the output layer is affine and
  /// imposes no fold).
  bool hidden_no_zeros() const;
};

struct ForwardResult {
  Rational output;
  TernaryPattern pattern;
};

/// Exact evaluation by layer composition; records every pre-activation sign.
ForwardResult forward(const Parameter& param, const std::vector<Rational>& x);

/// Double-precision evaluation; used by the float64 number mode and the
/// fiber walks.
double forward_double(const Parameter& param, const std::vector<double>& x);

TernaryPattern ternary_label(const Parameter& param, const std::vector<Rational>& x);

bool is_parametrically_smooth(const Parameter& param, const std::vector<Rational>& x);

struct GenericityReport {
  struct LayerResult {
    bool generic = true;
    bool skipped = false;
    // subsets of hyperplane indices violating the codimension condition
    std::vector<std::vector<int>> violations;
  };
  std::vector<LayerResult> layers;

  bool all_generic() const;
  bool any_skipped() const;
};

/// Checks every layer's hyperplane arrangement for genericity: each subset
/// of size k <= n_{l-1} must meet in codimension k (stacked normals of full
/// rank), and larger subsets must have empty intersection. Layers wider
/// than `cap` are skipped, not failed.
GenericityReport layer_genericity_check(const Parameter& param, int cap = 12);

}  // namespace reludim
