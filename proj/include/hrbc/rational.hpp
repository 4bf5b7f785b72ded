#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hrbc {

/// Exact rational used for every literal in models and automata.
/// Compare only against other Rationals: under C++20 rewritten comparisons,
/// `r == 0` recurses inside boost.
using Rational = boost::rational<std::int64_t>;

/// Parses `123`, `0.05`, `1e-3` or `2.5E2` exactly. Returns nullopt on
/// malformed input or when the value does not fit in 64-bit terms.
std::optional<Rational> parse_rational(std::string_view text);

/// Decimal text without exponent when the denominator has only the prime
/// factors 2 and 5 (`0.05`, `-3`), otherwise `p/q`.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

bool is_integer(const Rational& value);

/// Truncates toward zero, the way integer division behaves in the source
/// language.
Rational truncate(const Rational& value);

}  // namespace hrbc
