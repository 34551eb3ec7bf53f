#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace trigonal {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p/q" or a finite decimal such as "0.25" into a canonical rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Exact n-th root of a rational when it exists.
bool exact_root(const Rational& q, unsigned n, Rational& root);

double to_double(const Rational& q);

}  // namespace trigonal
