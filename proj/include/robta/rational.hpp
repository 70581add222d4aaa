#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace robta {

/// Exact rational number. Every clock value, delay and perturbation in the
/// library is one of these; floating point never enters region membership.
using Rational = mpq_class;

/// Renders as "n" or "n/d" in lowest terms.
std::string to_string(const Rational& q);

/// Accepts "n", "n/d" and finite decimals such as "0.25" or "-1.5".
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Largest integer not greater than q.
long floor_of(const Rational& q);

/// q - floor(q), always in [0,1).
Rational fract(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace robta
