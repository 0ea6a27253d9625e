#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "boltzclass/expr/expr.hpp"
#include "boltzclass/expr/zero_test.hpp"

namespace boltzclass {

/// Ordered coordinate names of a chart; the last one is always f.
using Coords = std::array<std::string, 8>;

const Coords& cartesian_coords();

/// X = sum_k xi^k d/d(coords[k]); the entry for f is eta.
struct VectorField {
    std::string chart = "cartesian";
    Coords coords = cartesian_coords();
    std::array<Expr, 8> coeff{};

    [[nodiscard]] int index_of(std::string_view name) const;
    [[nodiscard]] const Expr& operator[](std::string_view name) const { return coeff[index_of(name)]; }
    Expr& operator[](std::string_view name) { return coeff[index_of(name)]; }
    [[nodiscard]] const Expr& eta() const { return coeff[7]; }

    /// Human-readable "a*d_x + b*d_y ..." form.
    [[nodiscard]] std::string str() const;
};

VectorField zero_field(const std::string& chart, const Coords& coords);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& s, const VectorField& a);
VectorField simplify(const VectorField& a);

/// X(e) = sum_k xi^k de/dcoord_k.
Expr apply(const VectorField& vf, const Expr& e);

/// [a, b]^k = a(b^k) - b(a^k), simplified.
VectorField lie_bracket(const VectorField& a, const VectorField& b);

/// Coefficient-wise zero test of a - b.
bool same_field(const VectorField& a, const VectorField& b, const DomainGuard& guard, std::uint64_t seed,
                ZeroVerdict* worst = nullptr);

}  // namespace boltzclass
