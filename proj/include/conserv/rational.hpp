#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace conserv {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p/q", "p", or a finite decimal such as "-1.25"; the result is canonical.
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is one).
std::string to_string(const Rational& q);

Integer binomial(unsigned long n, unsigned long k);
Integer factorial(unsigned long n);

}  // namespace conserv
