#pragma once

#include <utility>

#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

/// Rational-function normal form over atoms (symbols, builtin calls,
/// arbitrary functions). tan/cot become sin/cos, sin/cos of sums and integer
/// multiples are expanded, cos(a)^2 is rewritten as 1 - sin(a)^2, sqrt(a)^2
/// as a, exp of a sum is split. Symbols are taken to be positive, so
/// sqrt(x^2) is x. Falls back to the input if coefficients overflow.
Expr simplify(const Expr& e);

/// Numerator and denominator of the normal form.
std::pair<Expr, Expr> fraction(const Expr& e);

/// True when the normal form is exactly 0.
bool simplifies_to_zero(const Expr& e);

}  // namespace boltzclass
