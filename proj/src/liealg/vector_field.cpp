#include "boltzclass/liealg/vector_field.hpp"

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

const Coords& cartesian_coords() {
    static const Coords c{"x", "y", "z", "u", "v", "w", "t", "f"};
    return c;
}

int VectorField::index_of(std::string_view name) const {
    for (int i = 0; i < 8; ++i) {
        if (coords[i] == name) return i;
    }
    throw std::out_of_range("coordinate " + std::string(name) + " not in chart " + chart);
}

std::string VectorField::str() const {
    std::string out;
    for (int i = 0; i < 8; ++i) {
        if (coeff[i].is_zero()) continue;
        const Expr& c = coeff[i];
        std::string term;
        if (c.is_one()) {
            term = "d_" + coords[i];
        } else if (c.is(Kind::Sum)) {
            term = "(" + c.str() + ")*d_" + coords[i];
        } else if (c == Expr(-1)) {
            term = "-d_" + coords[i];
        } else {
            term = c.str() + "*d_" + coords[i];
        }
        if (out.empty()) {
            out = term;
        } else if (term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out.empty() ? "0" : out;
}

VectorField zero_field(const std::string& chart, const Coords& coords) {
    VectorField v;
    v.chart = chart;
    v.coords = coords;
    return v;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int i = 0; i < 8; ++i) r.coeff[i] = a.coeff[i] + b.coeff[i];
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int i = 0; i < 8; ++i) r.coeff[i] = a.coeff[i] - b.coeff[i];
    return r;
}

VectorField operator*(const Expr& s, const VectorField& a) {
    VectorField r = a;
    for (auto& c : r.coeff) c = s * c;
    return r;
}

VectorField simplify(const VectorField& a) {
    VectorField r = a;
    for (auto& c : r.coeff) c = simplify(c);
    return r;
}

Expr apply(const VectorField& vf, const Expr& e) {
    std::vector<Expr> terms;
    for (int i = 0; i < 8; ++i) {
        if (vf.coeff[i].is_zero()) continue;
        terms.push_back(vf.coeff[i] * differentiate(e, vf.coords[i]));
    }
    return Expr::sum(std::move(terms));
}

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int i = 0; i < 8; ++i) r.coeff[i] = simplify(apply(a, b.coeff[i]) - apply(b, a.coeff[i]));
    return r;
}

bool same_field(const VectorField& a, const VectorField& b, const DomainGuard& guard, std::uint64_t seed,
                ZeroVerdict* worst) {
    bool ok = true;
    for (int i = 0; i < 8; ++i) {
        ZeroVerdict v = is_identically_zero(a.coeff[i] - b.coeff[i], guard, seed + static_cast<std::uint64_t>(i));
        if (worst && (v.status > worst->status)) *worst = v;
        if (v.status == ZeroStatus::Nonzero) ok = false;
    }
    return ok;
}

}  // namespace boltzclass
