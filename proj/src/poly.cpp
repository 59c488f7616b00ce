#include "reludim/poly.hpp"

#include "reludim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace reludim {

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  std::uint64_t da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  std::uint64_t db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

SparsePoly SparsePoly::constant(std::size_t arity, const Rational& c) {
  SparsePoly p(arity);
  p.add_term(Monomial(arity, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(std::size_t arity, std::size_t index) {
  if (index >= arity) throw InputError("variable index out of range");
  SparsePoly p(arity);
  Monomial m(arity, 0);
  m[index] = 1;
  p.add_term(m, Rational(1));
  return p;
}

std::uint32_t SparsePoly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [mono, coef] : terms_)
    d = std::max(d, std::accumulate(mono.begin(), mono.end(), std::uint32_t{0}));
  return d;
}

void SparsePoly::add_term(const Monomial& mono, const Rational& coef) {
  if (mono.size() != arity_) throw InputError("monomial arity mismatch");
  if (coef == 0) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(mono, coef);
  } else {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

SparsePoly SparsePoly::operator+(const SparsePoly& other) const {
  SparsePoly r = *this;
  r += other;
  return r;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
  if (arity_ != other.arity_) throw InputError("polynomial arity mismatch");
  for (const auto& [mono, coef] : other.terms_) add_term(mono, coef);
  return *this;
}

SparsePoly SparsePoly::operator-(const SparsePoly& other) const {
  SparsePoly r = *this;
  r -= other;
  return r;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& other) {
  if (arity_ != other.arity_) throw InputError("polynomial arity mismatch");
  for (const auto& [mono, coef] : other.terms_) add_term(mono, -coef);
  return *this;
}

SparsePoly SparsePoly::operator-() const { return scaled(Rational(-1)); }

SparsePoly SparsePoly::scaled(const Rational& c) const {
  SparsePoly r(arity_);
  if (c == 0) return r;
  for (const auto& [mono, coef] : terms_) r.terms_.emplace(mono, coef * c);
  return r;
}

SparsePoly SparsePoly::operator*(const SparsePoly& other) const {
  if (arity_ != other.arity_) throw InputError("polynomial arity mismatch");
  SparsePoly r(arity_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m(arity_);
      for (std::size_t i = 0; i < arity_; ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

SparsePoly SparsePoly::partial(std::size_t var_index) const {
  if (var_index >= arity_) throw InputError("partial derivative variable out of range");
  SparsePoly r(arity_);
  for (const auto& [mono, coef] : terms_) {
    if (mono[var_index] == 0) continue;
    Monomial m = mono;
    Rational c = coef * Rational(m[var_index]);
    m[var_index] -= 1;
    r.add_term(m, c);
  }
  return r;
}

Rational SparsePoly::eval(const std::vector<Rational>& point) const {
  if (point.size() != arity_) throw InputError("evaluation point length mismatch");
  Rational sum = 0;
  for (const auto& [mono, coef] : terms_) {
    Rational t = coef;
    for (std::size_t i = 0; i < arity_; ++i) {
      for (std::uint32_t k = 0; k < mono[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

double SparsePoly::eval_double(const std::vector<double>& point) const {
  if (point.size() != arity_) throw InputError("evaluation point length mismatch");
  double sum = 0.0;
  for (const auto& [mono, coef] : terms_) {
    double t = to_double(coef);
    for (std::size_t i = 0; i < arity_; ++i) t *= std::pow(point[i], mono[i]);
    sum += t;
  }
  return sum;
}

SparsePoly SparsePoly::substitute_tail(std::size_t offset,
                                       const std::vector<Rational>& values) const {
  if (offset + values.size() != arity_)
    throw InputError("substitution values do not cover the tail variables");
  SparsePoly r(offset);
  for (const auto& [mono, coef] : terms_) {
    Rational c = coef;
    for (std::size_t i = offset; i < arity_; ++i)
      for (std::uint32_t k = 0; k < mono[i]; ++k) c *= values[i - offset];
    Monomial head(mono.begin(), mono.begin() + offset);
    r.add_term(head, c);
  }
  return r;
}

std::string SparsePoly::to_string(const std::string& var_prefix) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  // highest grlex term first
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, coef] = *it;
    Rational c = coef;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;

    bool any_var = std::any_of(mono.begin(), mono.end(), [](std::uint32_t e) { return e > 0; });
    bool coef_shown = !any_var || c != 1;
    if (coef_shown) os << rational_to_string(c);
    bool need_star = coef_shown;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      if (need_star) os << "*";
      os << var_prefix << (i + 1);
      if (mono[i] > 1) os << "^" << mono[i];
      need_star = true;
    }
  }
  return os.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, std::size_t arity, const std::string& var_prefix)
      : s_(text), arity_(arity), prefix_(var_prefix) {}

  SparsePoly parse() {
    SparsePoly p = expr();
    skip_ws();
    if (pos_ != s_.size()) throw InputError("trailing garbage in polynomial: " + s_);
    return p;
  }

 private:
  SparsePoly expr() {
    SparsePoly acc = term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        acc += term();
      } else if (peek() == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  SparsePoly term() {
    SparsePoly acc = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  SparsePoly factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -factor();
    }
    if (peek() == '+') {
      ++pos_;
      return factor();
    }
    SparsePoly base = atom();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw InputError("missing exponent in polynomial: " + s_);
      int e = std::stoi(s_.substr(start, pos_ - start));
      SparsePoly p = SparsePoly::constant(arity_, Rational(1));
      for (int i = 0; i < e; ++i) p = p * base;
      return p;
    }
    return base;
  }

  SparsePoly atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      SparsePoly p = expr();
      skip_ws();
      if (peek() != ')') throw InputError("unbalanced parenthesis in polynomial: " + s_);
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (s_.compare(pos_, prefix_.size(), prefix_) == 0) return variable();
    throw InputError("unexpected character in polynomial: " + s_);
  }

  SparsePoly number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string num = s_.substr(start, pos_ - start);
    // a '/' directly after digits continues the rational literal
    if (peek() == '/') {
      std::size_t save = pos_;
      ++pos_;
      std::size_t dstart = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (dstart == pos_) {
        pos_ = save;
      } else {
        num += "/" + s_.substr(dstart, pos_ - dstart);
      }
    }
    return SparsePoly::constant(arity_, parse_rational(num));
  }

  SparsePoly variable() {
    pos_ += prefix_.size();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw InputError("variable without index in polynomial: " + s_);
    std::size_t idx = static_cast<std::size_t>(std::stoull(s_.substr(start, pos_ - start)));
    if (idx < 1 || idx > arity_)
      throw InputError("variable index out of range in polynomial: " + s_);
    return SparsePoly::variable(arity_, idx - 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t arity_;
  std::string prefix_;
};

}  // namespace

SparsePoly parse_poly(const std::string& text, std::size_t arity,
                      const std::string& var_prefix) {
  return PolyParser(text, arity, var_prefix).parse();
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t arity)
    : rows_(rows), cols_(cols), arity_(arity), data_(rows * cols, SparsePoly(arity)) {}

RationalMatrix PolyMatrix::instantiate(const std::vector<Rational>& point) const {
  RationalMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c).eval(point);
  return m;
}

}  // namespace reludim
