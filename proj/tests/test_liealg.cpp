#include <doctest.h>

#include <random>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"
#include "boltzclass/liealg/l11.hpp"

using namespace boltzclass;

namespace {

const VectorField& X(int i) { return l11_basis().at(i - 1); }

bool zero_field_p(const VectorField& v) {
    for (const auto& c : v.coeff) {
        if (!simplify(c).is_zero()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("basis formulas") {
    CHECK(X(4).str() == "t*d_x + d_u");
    CHECK(X(11)["f"] == parse("-f"));
    CHECK(X(11)["t"] == sym("t"));
    CHECK(X(7)["z"] == sym("y"));
    CHECK(X(7)["y"] == parse("-z"));
    CHECK(X(7)["w"] == sym("v"));
    CHECK(X(7)["v"] == parse("-w"));
}

TEST_CASE("apply") {
    CHECK(simplify(apply(X(11), parse("f*t"))).is_zero());
    CHECK(simplify(apply(X(4), parse("u - x/t"))).is_zero());
    Expr q = parse("Psi8(x,y,z,u,v,w,t,f)");
    Expr expect = parse(
        "t*Psi8_7(x,y,z,u,v,w,t,f) + x*Psi8_1(x,y,z,u,v,w,t,f) + y*Psi8_2(x,y,z,u,v,w,t,f) + "
        "z*Psi8_3(x,y,z,u,v,w,t,f) - f*Psi8_8(x,y,z,u,v,w,t,f)");
    CHECK(simplify(apply(X(11), q) - expect).is_zero());
}

TEST_CASE("brackets") {
    CHECK(zero_field_p(lie_bracket(X(1), X(2))));
    CHECK(zero_field_p(lie_bracket(X(10), X(4)) - X(1)));
    CHECK(zero_field_p(lie_bracket(X(1), X(9)) - X(2)));
    // derivation property on a sample function
    Expr g = parse("x*u + t^2*f");
    for (int i = 1; i <= 11; ++i) {
        for (int j = 1; j <= 11; ++j) {
            Expr lhs = apply(lie_bracket(X(i), X(j)), g);
            Expr rhs = apply(X(i), apply(X(j), g)) - apply(X(j), apply(X(i), g));
            CHECK(simplify(lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("decompose") {
    BasisCombo c = decompose_in_basis(X(1), l11_basis());
    CHECK(c[0].is_one());
    for (int k = 1; k < kL11; ++k) CHECK(c[k].is_zero());
    c = decompose_in_basis(lie_bracket(X(10), X(4)), l11_basis());
    CHECK(c[0].is_one());
    VectorField bad;
    bad["f"] = sym("x");
    CHECK_THROWS_AS(decompose_in_basis(bad, l11_basis()), NotInSpan);
    BasisCombo sym_combo = parse_combo("beta4+7+alpha11");
    BasisCombo back = decompose_in_basis(combine(sym_combo, l11_basis()), l11_basis());
    for (int k = 0; k < kL11; ++k) CHECK(simplify(back[k] - sym_combo[k]).is_zero());
}

TEST_CASE("commutator table") {
    StructureConstants t = commutator_table();
    for (int i = 0; i < kL11; ++i) {
        for (int k = 0; k < kL11; ++k) CHECK(t[i][i][k].is_zero());
        for (int j = 0; j < kL11; ++j) {
            for (int k = 0; k < kL11; ++k) CHECK(t[i][j][k] == -t[j][i][k]);
        }
    }
    // [X10, X11] = X10, [X4, X11] = 0 (x -> x, t -> t scale alike)
    CHECK(t[9][10][9] == Rational(1));
    for (int k = 0; k < kL11; ++k) CHECK(t[3][10][k].is_zero());
    int triples = 0;
    for (int i = 0; i < kL11; ++i) {
        for (int j = i + 1; j < kL11; ++j) {
            for (int k = j + 1; k < kL11; ++k) {
                CHECK(zero_field_p(jacobi_residual(i, j, k)));
                ++triples;
            }
        }
    }
    CHECK(triples == 165);
}

TEST_CASE("h multiplier") {
    BasisCombo c = parse_combo("11");
    CHECK(h_multiplier(c) == Expr(-2));
    CHECK(h_multiplier(parse_combo("4")).is_zero());
    CHECK(h_multiplier(parse_combo("beta4+7+alpha11")) == parse("-2*alpha"));
    CHECK(h_multiplier(parse_combo("\xce\xb2" "4+7+\xce\xb1" "11")) == parse("-2*alpha"));
}

TEST_CASE("parse_combo") {
    BasisCombo c = parse_combo("beta4+7");
    CHECK(c[3] == sym("beta"));
    CHECK(c[6].is_one());
    c = parse_combo("-delta2+beta3+4");
    CHECK(c[1] == parse("-delta"));
    CHECK(c[2] == sym("beta"));
    CHECK(c[3].is_one());
    c = parse_combo("1/2*3-(a+b)*5");
    CHECK(c[2] == parse("1/2"));
    CHECK(c[4] == parse("-a-b"));
    CHECK(combo_str(parse_combo("beta4+7+alpha11")) == "beta4+7+alpha11");
    CHECK_THROWS_AS(parse_combo("beta4++7"), std::invalid_argument);
    CHECK_THROWS_AS(parse_combo("12"), std::invalid_argument);
    CHECK_THROWS_AS(parse_combo(""), std::invalid_argument);
}

TEST_CASE("bracket bilinearity on random combos") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        BasisCombo a, b;
        for (int k = 0; k < kL11; ++k) {
            a[k] = Expr(d(rng));
            b[k] = Expr(d(rng));
        }
        VectorField lhs = lie_bracket(combine(a, l11_basis()), combine(b, l11_basis()));
        StructureConstants t = commutator_table();
        BasisCombo expect;
        expect.fill(Expr(0));
        for (int i = 0; i < kL11; ++i) {
            for (int j = 0; j < kL11; ++j) {
                for (int k = 0; k < kL11; ++k) {
                    expect[k] = expect[k] + a[i] * b[j] * Expr(t[i][j][k]);
                }
            }
        }
        CHECK(zero_field_p(lhs - combine(expect, l11_basis())));
    }
}
