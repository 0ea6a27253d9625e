#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parses the expression grammar:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' signed-int | '^' '(' expr ')')?
///   atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' atom
///
/// `PsiK(...)` / `OmegaK(...)` are arbitrary functions of K arguments and
/// `PsiK_i_j(...)` their partial derivatives. A leading '-' negates the whole
/// factor, so "-x^2" is -(x^2).
Expr parse(std::string_view text);

}  // namespace boltzclass
