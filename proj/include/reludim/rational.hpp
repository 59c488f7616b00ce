#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

namespace reludim {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Parses "p", "p/q" (optionally signed) or a decimal like "-1.25" exactly.
/// Rejects zero denominators and garbage with InputError.
Rational parse_rational(const std::string& text);

/// Canonical "p" or "p/q" form, round-trips through parse_rational.
std::string rational_to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double x);

int sign_of(const Rational& r);

std::vector<Rational> rationals_from_doubles(const std::vector<double>& xs);

}  // namespace reludim
