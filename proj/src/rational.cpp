#include "reludim/rational.hpp"

#include "reludim/errors.hpp"

#include <cctype>
#include <cmath>

namespace reludim {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InputError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw InputError("malformed rational literal: " + text);
    BigInt p(num), q(den);
    if (q == 0) throw InputError("zero denominator in rational literal: " + text);
    return Rational(p, q);
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (head.empty() || head == "+" || head == "-") head += "0";
    if (!is_integer_token(head)) throw InputError("malformed rational literal: " + text);
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InputError("malformed rational literal: " + text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt whole(head);
    BigInt digits = frac.empty() ? BigInt(0) : BigInt(frac);
    bool neg = s[0] == '-';
    BigInt p = whole * scale + (neg ? -digits : digits);
    return Rational(p, scale);
  }

  if (!is_integer_token(s)) throw InputError("malformed rational literal: " + text);
  return Rational(BigInt(s));
}

std::string rational_to_string(const Rational& r) { return r.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite double cannot become a rational");
  return Rational(x);
}

int sign_of(const Rational& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

std::vector<Rational> rationals_from_doubles(const std::vector<double>& xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(rational_from_double(x));
  return out;
}

}  // namespace reludim
