#pragma once

#include "reludim/linalg.hpp"
#include "reludim/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace reludim {

/// Exponent vector; length always equals the polynomial's arity.
using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order (total degree first). Fixed once so that
/// flattened coefficient matrices and printed polynomials are reproducible.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over the rationals in variables
/// t1..t_arity. Canonical: no zero coefficients are ever stored, so equal
/// polynomials compare equal as term maps.
class SparsePoly {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexLess>;

  SparsePoly() = default;
  explicit SparsePoly(std::size_t arity) : arity_(arity) {}

  static SparsePoly constant(std::size_t arity, const Rational& c);
  static SparsePoly variable(std::size_t arity, std::size_t index);

  std::size_t arity() const { return arity_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::uint32_t total_degree() const;

  void add_term(const Monomial& mono, const Rational& coef);

  SparsePoly operator+(const SparsePoly& other) const;
  SparsePoly operator-(const SparsePoly& other) const;
  SparsePoly operator*(const SparsePoly& other) const;
  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator-=(const SparsePoly& other);
  SparsePoly scaled(const Rational& c) const;
  bool operator==(const SparsePoly& other) const = default;

  /// Formal partial derivative with respect to variable `var_index`.
  SparsePoly partial(std::size_t var_index) const;

  /// Exact evaluation; point length must equal arity.
  Rational eval(const std::vector<Rational>& point) const;
  double eval_double(const std::vector<double>& point) const;

  /// Substitutes variables [offset, arity) with the given exact values,
  /// producing a polynomial of arity `offset`. Used for x -> z.
  SparsePoly substitute_tail(std::size_t offset, const std::vector<Rational>& values) const;

  /// "3/2*t1^2*t3 - t2 + 5" style; parses back with parse_poly.
  std::string to_string(const std::string& var_prefix = "t") const;

 private:
  std::size_t arity_ = 0;
  TermMap terms_;
};

/// Recursive-descent parser for the polynomial grammar: variables t1..tD
/// (prefix configurable), +, -, *, ^ with integer exponents, and
/// integer/rational literals like 7 or 3/2.
SparsePoly parse_poly(const std::string& text, std::size_t arity,
                      const std::string& var_prefix = "t");

/// Matrix over the polynomial ring; all entries share one arity.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t arity);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t arity() const { return arity_; }

  SparsePoly& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const SparsePoly& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Entry-wise evaluation at an exact point.
  RationalMatrix instantiate(const std::vector<Rational>& point) const;

  bool operator==(const PolyMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t arity_ = 0;
  std::vector<SparsePoly> data_;
};

}  // namespace reludim
