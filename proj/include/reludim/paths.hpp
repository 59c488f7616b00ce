#pragma once

#include "reludim/network.hpp"
#include "reludim/poly.hpp"

#include <cstdint>
#include <vector>

namespace reludim {

/// Augmented computational graph: the architecture's graph plus one
/// distinguished bias vertex per layer 0..d-1. Edges carry parameter
/// indices into theta.
class AugmentedGraph {
 public:
  explicit AugmentedGraph(Architecture arch) : arch_(std::move(arch)) {}

  const Architecture& arch() const { return arch_; }

  /// Edge from ordinary vertex i of layer l-1 to ordinary vertex j of layer l.
  std::size_t weight_edge_param(int layer, int j, int i) const {
    return arch_.weight_index(layer, j, i);
  }
  /// Edge from the bias vertex of layer l to ordinary vertex k of layer l+1.
  std::size_t bias_edge_param(int from_layer, int k) const {
    return arch_.bias_index(from_layer + 1, k);
  }

 private:
  Architecture arch_;
};

/// One complete path: ends at the output vertex, starts at an input vertex
/// (kind kInput, start_index = input coordinate) or at the distinguished
/// bias vertex of layer start_layer (kind kBias).
struct CompletePath {
  enum class Kind { kInput, kBias };
  Kind kind;
  int start_layer;               // 0 for inputs, 0..d-1 for bias starts
  int start_index;               // input coordinate for kInput, else 0
  std::vector<int> nodes;        // ordinary vertex index per layer start_layer+1 .. d
  SparsePoly monomial;           // product of edge parameters, arity D
};

class PathTable {
 public:
  PathTable(Architecture arch, std::vector<CompletePath> paths)
      : arch_(std::move(arch)), paths_(std::move(paths)) {}

  const Architecture& arch() const { return arch_; }
  const std::vector<CompletePath>& paths() const { return paths_; }
  std::size_t size() const { return paths_.size(); }

  /// Count by the closed-form direct formula; equals size().
  static std::size_t expected_count(const Architecture& arch);

 private:
  Architecture arch_;
  std::vector<CompletePath> paths_;
};

/// Deterministic enumeration: inputs first (by coordinate), then the bias
/// vertices by layer; within a start, successor vertex indices run
/// lexicographically. Throws BudgetError above `cap` paths.
PathTable enumerate_complete_paths(const Architecture& arch, std::size_t cap = 1000000);

/// Mask over the table: open iff every hidden neuron on the path has
/// strictly positive pre-activation at x.
std::vector<bool> open_paths(const PathTable& table, const Parameter& param,
                             const std::vector<Rational>& x);

/// Open-path count from per-layer active-neuron counts; matches the mask's
/// popcount.
std::size_t expected_open_count(const Architecture& arch, const TernaryPattern& pattern);

/// The local polynomial P(theta, x) as a polynomial in (t1..tD, x1..x_{n0})
/// (theta variables first). Requires (theta, x) parametrically smooth.
SparsePoly algebraic_representation(const PathTable& table, const Parameter& param,
                                    const std::vector<Rational>& x);

/// E^R_Z: entry i is the formal polynomial in theta representing z_i's
/// evaluation map near the parameter. Built by direct symbolic composition
/// of the layer maps, so it stays available when path enumeration would
/// blow the cap. Rejects non-smooth points by index.
std::vector<SparsePoly> algebraic_evaluation(const Parameter& param,
                                             const std::vector<std::vector<Rational>>& batch);

/// |Z| x D matrix of formal gradients of E^R_Z.
PolyMatrix algebraic_jacobian(const Parameter& param,
                              const std::vector<std::vector<Rational>>& batch);

/// Batch-by-path activation matrices: entries x_j / 1 / 0 in the algebraic
/// version (polynomials in x), their per-row values at z_i in the real one.
struct ActivationMatrixPair {
  PolyMatrix algebraic;   // arity n0, entries in {0, 1, x_j}
  RationalMatrix real;
};

ActivationMatrixPair activation_matrix(const PathTable& table, const Parameter& param,
                                       const std::vector<std::vector<Rational>>& batch);

/// True iff row i of alpha(theta, Z) . Gamma equals E^R_{z_i} as formal
/// polynomials for every i; false signals an internal inconsistency.
bool verify_path_factorization(const PathTable& table, const Parameter& param,
                               const std::vector<std::vector<Rational>>& batch);

}  // namespace reludim
