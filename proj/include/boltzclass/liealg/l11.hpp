#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "boltzclass/expr/rational.hpp"
#include "boltzclass/liealg/vector_field.hpp"

namespace boltzclass {

inline constexpr int kL11 = 11;

/// Coefficients c^1..c^11 of Y = c^j X_j (index 0 holds c^1).
using BasisCombo = std::array<Expr, kL11>;

/// The eleven generators in Cartesian coordinates x,y,z,u,v,w,t,f.
const std::vector<VectorField>& l11_basis();

/// Y = sum_j c^j basis[j].
VectorField combine(const BasisCombo& c, const std::vector<VectorField>& basis);

struct NotInSpan : std::runtime_error {
    NotInSpan(VectorField r, const std::string& what) : std::runtime_error(what), residual(std::move(r)) {}
    VectorField residual;
};

/// Exact decomposition of a field whose coefficients are polynomials of
/// degree <= 1 in the coordinates; throws NotInSpan otherwise.
BasisCombo decompose_in_basis(const VectorField& vf, const std::vector<VectorField>& basis);

using StructureConstants = std::array<std::array<std::array<Rational, kL11>, kL11>, kL11>;

/// table[i][j] = coefficients of [X_{i+1}, X_{j+1}].
StructureConstants commutator_table();

/// Residual of the Jacobi identity for (X_i, X_j, X_k), simplified coefficient-wise.
VectorField jacobi_residual(int i, int j, int k);

/// h = -2 c^11: the multiplier of the determining equation.
Expr h_multiplier(const BasisCombo& c);

/// Combo from "beta4+7+alpha11"-style text: terms separated by '+', each an
/// optional coefficient (rational, parameter name, or "-") followed by the
/// generator index. Greek letters in UTF-8 are accepted for parameters.
BasisCombo parse_combo(const std::string& text);

std::string combo_str(const BasisCombo& c);

}  // namespace boltzclass
