#include <cmath>
#include <random>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/eval.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"
#include "boltzclass/expr/zero_test.hpp"
#include "doctest.h"

using namespace boltzclass;

namespace {

Expr P(const char* s) { return parse(s); }

bool same(const Expr& a, const Expr& b) { return simplify(a - b).is_zero(); }

// Random small expression over x, y, t built from the grammar's operators.
Expr random_expr(std::mt19937_64& rng, int depth) {
    static const char* leaves[] = {"x", "y", "t", "2", "3/2"};
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    if (depth == 0) return P(leaves[pick(5)]);
    Expr a = random_expr(rng, depth - 1);
    Expr b = random_expr(rng, depth - 1);
    switch (pick(9)) {
        case 0:
            return a + b;
        case 1:
            return a - b;
        case 2:
            return a * b;
        case 3:
            return a / (Expr(2) + b * b);
        case 4:
            return sin(a);
        case 5:
            return exp(a / Expr(4));
        case 6:
            return sqrt(Expr(1) + a * a);
        case 7:
            return arctan(a);
        default:
            return Expr::abstract("Psi", {a, b});
    }
}

double fd(const Expr& e, Env env, const std::string& var, std::uint64_t seed) {
    const double h = 1e-5;
    double x0 = env[var];
    auto oracle = smooth_oracle(seed);
    env[var] = x0 + h;
    double fp = eval_numeric(e, env, oracle);
    env[var] = x0 - h;
    double fm = eval_numeric(e, env, oracle);
    return (fp - fm) / (2 * h);
}

}  // namespace

TEST_CASE("parse builds canonical trees") {
    Expr e = P("t^-2 * Psi7(x/t, y/t, z/t, u, v, w, f*t)");
    REQUIRE(e.is(Kind::Product));
    CHECK(e.size() == 2);
    bool saw_pow = false, saw_psi = false;
    for (const auto& c : e.children()) {
        if (c.is(Kind::Power)) {
            saw_pow = c.child(0).is_symbol("t") && c.child(1) == Expr(-2);
        }
        if (c.is(Kind::Abstract)) saw_psi = c.name() == "Psi" && c.size() == 7;
    }
    CHECK(saw_pow);
    CHECK(saw_psi);

    CHECK(P("0").is_zero());
    Expr cf = P("C*f^2");
    REQUIRE(cf.is(Kind::Product));
    CHECK(cf.child(0).is_symbol("C"));
    CHECK(cf.child(1) == pow(sym("f"), Expr(2)));
}

TEST_CASE("parse errors carry offsets") {
    try {
        P("x + * y");
        FAIL("no throw");
    } catch (const ParseError& err) {
        CHECK(err.offset() == 4);
    }
    CHECK_THROWS_AS(P("foo(x)"), ParseError);
    CHECK_THROWS_AS(P("Psi3(x, y)"), ParseError);
    CHECK_THROWS_AS(P("(x + y"), ParseError);
    CHECK_THROWS_AS(P("x ^ y"), ParseError);
    CHECK_NOTHROW(P("x^(alpha)"));
}

TEST_CASE("unary minus binds to the factor") {
    CHECK(same(P("-x^2"), -(P("x") * P("x"))));
    CHECK(same(P("-x*y"), P("-(x*y)")));
    CHECK(same(P("2^-1"), P("1/2")));
}

TEST_CASE("print round trips") {
    for (const char* s : {"t^-2 * Psi7(x/t, y/t, z/t, u, v, w, f*t)", "-x^2 + 3/2*y - x/t^2", "C*f^2",
                          "exp(-2*alpha*t)*Omega3_1_2(u, v, w)", "sqrt(V^2 + W^2)*ln(t) - arctan(w/v)",
                          "(x + y)^(alpha)", "-1/3*x^-3*(y + 1)", "f^(3/4)", "(-2)^(x)"}) {
        Expr e = P(s);
        CHECK_MESSAGE(P(e.str().c_str()) == e, s << " -> " << e.str());
    }
}

TEST_CASE("differentiate examples") {
    CHECK(differentiate(P("x/t"), "t") == P("-x/t^2"));
    CHECK(differentiate(P("sqrt(v^2+w^2)"), "u").is_zero());
    Expr e = P("t^-2*Psi2(x/t, f*t)");
    Expr d = differentiate(e, "t");
    Expr expect = P("-2*t^-3*Psi2(x/t, f*t) + t^-2*(-x*t^-2*Psi2_1(x/t, f*t) + f*Psi2_2(x/t, f*t))");
    CHECK(same(d, expect));
    std::mt19937_64 rng(7);
    DomainGuard g = DomainGuard::standard();
    for (int i = 0; i < 10; ++i) {
        auto env = g.sample({"x", "t", "f"}, rng);
        REQUIRE(env);
        double num = fd(e, *env, "t", 11);
        double an = eval_numeric(d, *env, smooth_oracle(11));
        CHECK(std::fabs(num - an) <= 1e-6 * std::max(1.0, std::fabs(an)));
    }
}

TEST_CASE("substitute examples") {
    CHECK(same(substitute(P("x/t"), {{"x", P("r*cos(theta)")}}), P("r*cos(theta)/t")));
    CHECK(substitute(P("f*t"), {{"f", P("t^-1*Omega")}}) == P("Omega"));
    Expr vw = substitute(P("v^2 + w^2"),
                         {{"v", P("V*cos(theta) - W*sin(theta)")}, {"w", P("V*sin(theta) + W*cos(theta)")}});
    CHECK(simplify(vw) == P("V^2 + W^2"));
    CHECK(substitute(P("x + y"), {{"x", P("y")}, {"y", P("x")}}) == P("y + x"));
}

TEST_CASE("simplify examples") {
    CHECK(simplify(P("(V*cos(theta) - W*sin(theta))^2 + (V*sin(theta) + W*cos(theta))^2")) == P("V^2 + W^2"));
    CHECK(simplify(P("t*(x/t)")) == P("x"));
    CHECK(simplify(P("Psi2(x, y) - Psi2(x, y)")).is_zero());
    CHECK(simplify(P("Psi1(x*t/t) - Psi1(x)")).is_zero());
    CHECK(simplify(P("(x^2 - y^2)/(x - y)")) == P("x + y"));
    CHECK(simplify(P("1/(x+1) + 1/(x-1) - 2*x/(x^2-1)")).is_zero());
    CHECK(simplify(P("sqrt(r^2*cos(theta)^2 + r^2*sin(theta)^2)")) == P("r"));
    CHECK(simplify(P("sin(theta - epsilon) - sin(theta)*cos(epsilon) + cos(theta)*sin(epsilon)")).is_zero());
    CHECK(simplify(P("tan(x)*cos(x) - sin(x)")).is_zero());
    CHECK(simplify(P("exp(a + b) - exp(a)*exp(b)")).is_zero());
    CHECK(simplify(P("exp(2*a) - exp(a)^2")).is_zero());
    CHECK(simplify(P("ln(x*t) - ln(x) - ln(t)")).is_zero());
    CHECK(simplify(P("exp(ln(t)*alpha) - t^(alpha)")).is_zero());
    CHECK(simplify(P("t^(alpha + 1) - t*t^(alpha)")).is_zero());
    CHECK(simplify(P("sqrt(y^2+z^2)^3 - (y^2+z^2)*sqrt(y^2+z^2)")).is_zero());
    CHECK(simplify(P("1/sqrt(x) - sqrt(x)/x")).is_zero());
    CHECK(simplify(P("sin(2*x) - 2*sin(x)*cos(x)")).is_zero());
    CHECK_FALSE(simplify(P("sin(x)^2 + cos(x)^2 - 2")).is_zero());
}

TEST_CASE("eval examples") {
    CHECK(eval_numeric(P("x/t"), {{"x", 2.0}, {"t", 4.0}}) == doctest::Approx(0.5));
    CHECK(std::fabs(eval_numeric(P("sin(theta)^2 + cos(theta)^2"), {{"theta", 0.37}}) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(eval_numeric(P("ln(x)"), {{"x", -1.0}}), DomainError);
    CHECK_THROWS_AS(eval_numeric(P("1/(x - 1)"), {{"x", 1.0}}), DomainError);
    Expr a = P("Psi2(x, y) + Psi2_1(x, y)");
    Env env{{"x", 0.3}, {"y", 0.9}};
    CHECK(eval_numeric(a, env, 5) == eval_numeric(a, env, 5));
    CHECK(eval_numeric(a, env, 5) != eval_numeric(a, env, 6));
}

TEST_CASE("zero test verdicts") {
    DomainGuard g = DomainGuard::standard();
    CHECK(is_identically_zero(P("Psi1(x) - Psi1(x)"), g, 1).status == ZeroStatus::SymbolicZero);
    auto v = is_identically_zero(P("x/t - 1"), g, 1);
    CHECK(v.status == ZeroStatus::Nonzero);
    REQUIRE(v.witness);
    CHECK(std::fabs(v.residual) > 1e-8);
    // arctan(tan) identity is outside the normal form: caught numerically.
    DomainGuard h = g;
    h.intervals["s"] = {0.1, 1.4};
    auto w = is_identically_zero(P("arctan(tan(s)) - s"), h, 3);
    CHECK(w.status == ZeroStatus::NumericZero);
    CHECK(w.samples_used == kZeroTestPoints);
    DomainGuard bad = g;
    bad.intervals["q"] = {-2.0, -1.0};
    CHECK_THROWS_AS(is_identically_zero(P("ln(q) + q"), bad, 1), GuardTooTight);
}

TEST_CASE("Clairaut and finite differences on random expressions") {
    std::mt19937_64 rng(2024);
    DomainGuard g = DomainGuard::standard();
    for (int i = 0; i < 40; ++i) {
        Expr e = random_expr(rng, 3);
        Expr dxy = differentiate(differentiate(e, "x"), "y");
        Expr dyx = differentiate(differentiate(e, "y"), "x");
        auto v = is_identically_zero(dxy - dyx, g, static_cast<std::uint64_t>(i));
        CHECK_MESSAGE(v.status != ZeroStatus::Nonzero, e.str());

        Expr dx = differentiate(e, "x");
        for (int k = 0; k < 100; ++k) {
            auto env = g.sample({"x", "y", "t"}, rng);
            REQUIRE(env);
            double an = eval_numeric(dx, *env, smooth_oracle(99));
            double num = fd(e, *env, "x", 99);
            CHECK_MESSAGE(std::fabs(an - num) <= 1e-5 * std::max(1.0, std::fabs(an)), e.str());
        }
        CHECK(P(e.str().c_str()) == e);
    }
}

TEST_CASE("compiled evaluation matches the tree evaluator") {
    const std::vector<std::string> vars{"x", "y", "t"};
    for (const char* text : {"x^2*y - 3/2*t", "exp(-(x^2 + y^2)/(4*(1 + t^2)))*sqrt(t)", "sin(x)*cos(y)/t + ln(t)",
                             "arctan(y/x) - t^(1/3) + abs(x - y)", "cot(x) + tan(y)"}) {
        Expr e = parse(text);
        CompiledExpr c(e, vars);
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) {
            double v[] = {uniform(rng, 0.5, 2), uniform(rng, 0.5, 2), uniform(rng, 0.5, 2)};
            Env env{{"x", v[0]}, {"y", v[1]}, {"t", v[2]}};
            CHECK(c(v) == doctest::Approx(eval_numeric(e, env)).epsilon(1e-14));
        }
    }
    CompiledExpr bad(parse("ln(x)"), {"x"});
    double neg[] = {-1.0};
    CHECK_THROWS_AS(bad(neg), DomainError);
    CHECK_THROWS_AS(CompiledExpr(parse("z"), {"x"}), DomainError);
    CHECK_THROWS_AS(CompiledExpr(parse("Psi1(x)"), {"x"}), DomainError);
}
