#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace tvf {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Accepts "p/q", integers and plain decimals ("-0.25"). Throws DomainError.
Rational parse_rational(std::string_view text);
/// Canonical "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);
double to_double(const Rational& r);
/// Largest integer <= r.
Integer floor(const Rational& r);

} // namespace tvf
