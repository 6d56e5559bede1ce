#pragma once

#include <string_view>

#include "nfold/scalar_function.hpp"

namespace nfold::cli {

/// Parses an arithmetic expression in one variable:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
/// Names are the variable, the constants pi and i, and the functions exp,
/// log, sqrt, sin, cos, sinh, cosh, tanh, atan. Throws ParseError with the
/// offending position.
ScalarFunction parse_expression(std::string_view text, std::string_view variable = "q");

}  // namespace nfold::cli
