#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Env = std::map<std::string, double, std::less<>>;

/// Value of an arbitrary function at `args`: a fixed pseudo-random number in
/// [0.5, 1.5] determined by (name, slots, args rounded to 1e-9 relative, seed).
/// Distinct derivative atoms are independent.
double abstract_value(const std::string& name, const std::vector<int>& slots, const std::vector<double>& args,
                      std::uint64_t seed);

using AbstractOracle =
    std::function<double(const std::string& name, const std::vector<int>& slots, const std::vector<double>& args)>;

/// A smooth oracle: each arbitrary function is a fixed random sum of
/// exponentials sum_j A_j exp(b_j . a), with exact partial derivatives, so
/// finite differences of evaluated expressions match evaluated derivatives.
AbstractOracle smooth_oracle(std::uint64_t seed);

/// Floating-point evaluation. Throws DomainError on sqrt/ln of a negative
/// number, division by zero, a missing symbol or a non-finite result.
double eval_numeric(const Expr& e, const Env& env, std::uint64_t seed = 0);
double eval_numeric(const Expr& e, const Env& env, const AbstractOracle& oracle);

/// Postfix program for repeated evaluation of an expression without
/// arbitrary functions; `vars` fixes the order of the argument array.
class CompiledExpr {
public:
    CompiledExpr(const Expr& e, const std::vector<std::string>& vars);
    /// Same domain errors as eval_numeric.
    double operator()(const double* values) const;

private:
    enum class Op : std::uint8_t { Const, Var, Add, Mul, PowInt, Pow, Call };
    struct Instr {
        Op op;
        std::uint8_t fn = 0;
        std::uint32_t n = 0;
        double c = 0;
    };
    void emit(const Expr& e, const std::vector<std::string>& vars);
    std::vector<Instr> code_;
    std::size_t depth_ = 0;
};

}  // namespace boltzclass
