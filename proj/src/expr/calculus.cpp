#include "boltzclass/expr/calculus.hpp"

#include <stdexcept>
#include <unordered_map>

namespace boltzclass {

Expr rebuild(const Expr& e, std::vector<Expr> ch) {
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::Symbol:
            return e;
        case Kind::Power:
            return Expr::power(ch[0], ch[1]);
        case Kind::Product:
            return Expr::product(std::move(ch));
        case Kind::Sum:
            return Expr::sum(std::move(ch));
        case Kind::Call:
            return Expr::call(e.builtin(), ch[0]);
        case Kind::Abstract:
            return Expr::abstract(e.name(), std::move(ch));
        case Kind::AbstractPartial:
            return Expr::partial(e.name(), e.slots(), std::move(ch));
    }
    throw std::logic_error("rebuild: bad kind");
}

namespace {

class Differentiator {
public:
    explicit Differentiator(std::string_view var) : var_(var) {}

    Expr d(const Expr& e) {
        if (e.is_rational()) return Expr(0);
        if (e.is(Kind::Symbol)) return Expr(e.name() == var_ ? 1 : 0);
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        Expr r = compute(e);
        memo_.emplace(e, r);
        return r;
    }

private:
    Expr compute(const Expr& e) {
        if (!depends_on(e, var_)) return Expr(0);
        switch (e.kind()) {
            case Kind::Sum: {
                std::vector<Expr> t;
                for (const auto& c : e.children()) t.push_back(d(c));
                return Expr::sum(std::move(t));
            }
            case Kind::Product: {
                std::vector<Expr> t;
                auto ch = e.children();
                for (std::size_t i = 0; i < ch.size(); ++i) {
                    Expr di = d(ch[i]);
                    if (di.is_zero()) continue;
                    std::vector<Expr> f(ch.begin(), ch.end());
                    f[i] = di;
                    t.push_back(Expr::product(std::move(f)));
                }
                return Expr::sum(std::move(t));
            }
            case Kind::Power: {
                const Expr& b = e.child(0);
                const Expr& x = e.child(1);
                Expr db = d(b);
                if (!depends_on(x, var_)) return x * pow(b, x - Expr(1)) * db;
                return e * (d(x) * ln(b) + x * db / b);
            }
            case Kind::Call: {
                const Expr& a = e.child(0);
                Expr da = d(a);
                switch (e.builtin()) {
                    case Builtin::Sin:
                        return cos(a) * da;
                    case Builtin::Cos:
                        return -sin(a) * da;
                    case Builtin::Tan:
                        return pow(cos(a), Expr(-2)) * da;
                    case Builtin::Cot:
                        return -pow(sin(a), Expr(-2)) * da;
                    case Builtin::Arctan:
                        return da / (Expr(1) + pow(a, Expr(2)));
                    case Builtin::Exp:
                        return e * da;
                    case Builtin::Ln:
                        return da / a;
                    case Builtin::Sqrt:
                        return da / (Expr(2) * e);
                    case Builtin::Abs:
                        return a / e * da;
                }
                break;
            }
            case Kind::Abstract:
            case Kind::AbstractPartial: {
                std::vector<Expr> t;
                std::vector<Expr> args(e.children().begin(), e.children().end());
                for (std::size_t k = 0; k < args.size(); ++k) {
                    Expr dk = d(args[k]);
                    if (dk.is_zero()) continue;
                    std::vector<int> slots = e.slots();
                    slots.push_back(static_cast<int>(k) + 1);
                    t.push_back(Expr::partial(e.name(), std::move(slots), args) * dk);
                }
                return Expr::sum(std::move(t));
            }
            default:
                break;
        }
        throw std::logic_error("differentiate: unhandled node");
    }

    std::string_view var_;
    std::unordered_map<Expr, Expr, ExprHash> memo_;
};

class Replacer {
public:
    explicit Replacer(const Substitution& s) : s_(s) {}

    Expr run(const Expr& e) {
        if (e.is(Kind::Symbol)) {
            auto it = s_.find(e.name());
            return it == s_.end() ? e : it->second;
        }
        if (e.is_rational()) return e;
        auto m = memo_.find(e);
        if (m != memo_.end()) return m->second;
        std::vector<Expr> ch;
        ch.reserve(e.size());
        for (const auto& c : e.children()) ch.push_back(run(c));
        Expr r = rebuild(e, std::move(ch));
        memo_.emplace(e, r);
        return r;
    }

private:
    const Substitution& s_;
    std::unordered_map<Expr, Expr, ExprHash> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) { return Differentiator(var).d(e); }

Expr substitute(const Expr& e, const Substitution& s) {
    if (s.empty()) return e;
    return Replacer(s).run(e);
}

Expr replace(const Expr& e, const Expr& what, const Expr& with) {
    if (e == what) return with;
    if (e.size() == 0) return e;
    std::vector<Expr> ch;
    for (const auto& c : e.children()) ch.push_back(replace(c, what, with));
    return rebuild(e, std::move(ch));
}

}  // namespace boltzclass
