#pragma once

#include <map>
#include <string>

#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

using Substitution = std::map<std::string, Expr, std::less<>>;

/// d e / d var with the full chain rule; arbitrary functions produce
/// partial-derivative atoms.
Expr differentiate(const Expr& e, std::string_view var);

/// Simultaneous replacement of symbols.
Expr substitute(const Expr& e, const Substitution& s);

/// Replaces every occurrence of the subexpression `what` (structural match).
Expr replace(const Expr& e, const Expr& what, const Expr& with);

/// Rebuilds `e` with the same head and new children.
Expr rebuild(const Expr& e, std::vector<Expr> children);

}  // namespace boltzclass
