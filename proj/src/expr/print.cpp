#include <string>
#include <vector>

#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

namespace {

std::string print(const Expr& e);

bool is_plain_atom(const Expr& e) {
    switch (e.kind()) {
        case Kind::Symbol:
        case Kind::Call:
        case Kind::Abstract:
        case Kind::AbstractPartial:
            return true;
        case Kind::Rational:
            return e.value().is_integer() && !e.value().is_negative();
        default:
            return false;
    }
}

std::string print_power_base(const Expr& b) { return is_plain_atom(b) ? print(b) : "(" + print(b) + ")"; }

std::string print_power(const Expr& base, const Expr& ex) {
    std::string out = print_power_base(base) + "^";
    if (ex.is_rational() && ex.value().is_integer()) return out + std::to_string(ex.value().num());
    return out + "(" + print(ex) + ")";
}

std::string print_factor(const Expr& f) {
    if (f.is(Kind::Sum)) return "(" + print(f) + ")";
    return print(f);
}

// Product with positive leading coefficient (sign handled by the caller).
std::string print_product(const Expr& e) {
    Rational coef(1);
    std::vector<std::string> num, den;
    for (const auto& f : e.children()) {
        if (f.is_rational()) {
            coef *= f.value();
        } else if (f.is(Kind::Power) && f.child(1).is_rational() && f.child(1).value().is_negative()) {
            const Rational& q = f.child(1).value();
            den.push_back(q == Rational(-1) ? print_factor(f.child(0)) : print_power(f.child(0), Expr(-q)));
        } else {
            num.push_back(print_factor(f));
        }
    }
    std::string out;
    if (coef.num() != 1 || num.empty()) out = std::to_string(coef.num());
    for (const auto& s : num) {
        if (!out.empty()) out += "*";
        out += s;
    }
    if (coef.den() != 1) out += "/" + std::to_string(coef.den());
    for (const auto& s : den) out += "/" + s;
    return out;
}

std::string print_args(const Expr& e) {
    std::string out = "(";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += ", ";
        out += print(e.child(i));
    }
    return out + ")";
}

std::string print(const Expr& e) {
    switch (e.kind()) {
        case Kind::Rational:
            return e.value().str();
        case Kind::Symbol:
            return e.name();
        case Kind::Power: {
            const Expr& ex = e.child(1);
            if (ex.is_rational() && ex.value().is_negative() && !ex.value().is_integer()) {
                return "1/" + print_power(e.child(0), Expr(-ex.value()));
            }
            return print_power(e.child(0), ex);
        }
        case Kind::Product:
            if (has_negative_sign(e)) {
                Expr n = -e;
                return "-" + (n.is(Kind::Product) ? print_product(n) : print_factor(n));
            }
            return print_product(e);
        case Kind::Sum: {
            std::string out;
            bool first = true;
            for (const auto& t : e.children()) {
                if (has_negative_sign(t)) {
                    out += first ? "-" : " - ";
                    out += print(-t);
                } else {
                    if (!first) out += " + ";
                    out += print(t);
                }
                first = false;
            }
            return out;
        }
        case Kind::Call:
            return std::string(builtin_name(e.builtin())) + "(" + print(e.child(0)) + ")";
        case Kind::Abstract:
            return e.name() + std::to_string(e.size()) + print_args(e);
        case Kind::AbstractPartial: {
            std::string out = e.name() + std::to_string(e.size());
            for (int s : e.slots()) out += "_" + std::to_string(s);
            return out + print_args(e);
        }
    }
    return "?";
}

}  // namespace

std::string Expr::str() const { return print(*this); }

}  // namespace boltzclass
