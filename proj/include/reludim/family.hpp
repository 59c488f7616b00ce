#pragma once

#include "reludim/poly.hpp"

#include <string>
#include <vector>

namespace reludim {

/// Globally polynomial parameterized family: slot i holds the formal
/// polynomial E^R_{z_i}(theta) directly. Lets non-network families (the
/// rank-gap example in particular) run through the same rank and
/// shattering machinery as ReLU networks.
class PolyFamily {
 public:
  PolyFamily(std::size_t param_dim, std::vector<SparsePoly> slots);

  /// Parses {"D": 3, "slots": ["t1", "t2", "t3", "t3-t1^2+t2^2"]}-style
  /// slot expressions.
  static PolyFamily from_expressions(std::size_t param_dim,
                                     const std::vector<std::string>& slot_exprs);

  std::size_t param_dim() const { return param_dim_; }
  std::size_t slot_count() const { return slots_.size(); }
  const std::vector<SparsePoly>& slots() const { return slots_; }

  std::vector<Rational> evaluate(const std::vector<Rational>& theta) const;

 private:
  std::size_t param_dim_;
  std::vector<SparsePoly> slots_;
};

/// m x D matrix of formal partials of the slot polynomials.
PolyMatrix family_jacobian(const PolyFamily& fam);

/// Slot-wise E(theta) - E(theta0), exact.
std::vector<Rational> family_difference_eval(const PolyFamily& fam,
                                             const std::vector<Rational>& theta0,
                                             const std::vector<Rational>& theta);

}  // namespace reludim
