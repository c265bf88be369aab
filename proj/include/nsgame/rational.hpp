#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace nsgame {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Renders `p/q`, or `p` when the denominator is 1.
std::string to_string(const Rational& r);

/// Parses `p/q` or an integer literal. Throws Error(parse_error).
Rational parse_rational(std::string_view text);

/// Nearest double, then nudged one ulp up/down so the result bounds `r`.
double to_double_up(const Rational& r);
double to_double_down(const Rational& r);

/// Exact rational value of a finite double.
Rational from_double(double d);

/// First continued-fraction convergent of x within `tol * max(1, |x|)`,
/// with denominator <= max_den; falls back to the last admissible convergent.
Rational approximate(double x, std::int64_t max_den, double tol = 1e-9);

/// Upper bound on log2(r) for r > 0; uses the exponent for huge operands.
double log2_up(const Rational& r);

std::size_t bit_size(const Rational& r);

}  // namespace nsgame
