#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace gmclp {

using Rational = boost::rational<std::int64_t>;

/// Parses "7", "-3", or "5/4". Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// "num" when the denominator is 1, otherwise "num/den".
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) {
  return boost::rational_cast<double>(value);
}

inline bool is_integral(const Rational& value) { return value.denominator() == 1; }

}  // namespace gmclp
