#pragma once

#include "folpsi/coeff.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace folpsi {

/// Parses a coefficient expression into the exact ring.
///
/// Grammar: numbers (integer or decimal, read exactly), coordinate names,
/// the imaginary unit `I`, binary + - * /, unary -, `^` with a non-negative
/// integer exponent, and sin(.)/cos(.) whose argument is an integer-linear
/// combination of coordinates. Division is only by nonzero constants.
/// Errors throw ParseError tagged with `field` and the 1-based column.
Coeff parse_coeff(std::string_view text, const std::vector<std::string>& names,
                  const std::string& field = "expr");

}  // namespace folpsi
