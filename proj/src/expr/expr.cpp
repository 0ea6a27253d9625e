#include "boltzclass/expr/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace boltzclass {

namespace {

constexpr std::array<std::string_view, 9> kBuiltinNames = {"sin", "cos", "tan", "cot", "arctan",
                                                           "exp", "ln",  "sqrt", "abs"};

std::size_t mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::size_t hash_string(std::string_view s) {
    std::size_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::shared_ptr<Node> make_node(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

void finish_hash(Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL + 17;
    switch (n.kind) {
        case Kind::Rational:
            h = mix(h, std::hash<std::int64_t>{}(n.value.num()));
            h = mix(h, std::hash<std::int64_t>{}(n.value.den()));
            break;
        case Kind::Symbol:
        case Kind::Abstract:
            h = mix(h, hash_string(n.name));
            break;
        case Kind::AbstractPartial:
            h = mix(h, hash_string(n.name));
            for (int s : n.slots) h = mix(h, static_cast<std::size_t>(s));
            break;
        case Kind::Call:
            h = mix(h, static_cast<std::size_t>(n.fn));
            break;
        default:
            break;
    }
    for (const auto& a : n.args) h = mix(h, a.hash());
    n.hash = h;
}

const Expr& zero_expr() {
    static const Expr z{Rational(0)};
    return z;
}

}  // namespace

std::string_view builtin_name(Builtin fn) { return kBuiltinNames[static_cast<std::size_t>(fn)]; }

std::optional<Builtin> builtin_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kBuiltinNames.size(); ++i) {
        if (kBuiltinNames[i] == name) return static_cast<Builtin>(i);
    }
    return std::nullopt;
}

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(Rational r) {
    auto n = make_node(Kind::Rational);
    n->value = r;
    finish_hash(*n);
    node_ = std::move(n);
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Builtin Expr::builtin() const { return node_->fn; }
const std::vector<int>& Expr::slots() const { return node_->slots; }
std::span<const Expr> Expr::children() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Rational:
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        case Kind::Symbol:
            return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Kind::Call:
            if (a.builtin() != b.builtin()) return a.builtin() < b.builtin() ? -1 : 1;
            break;
        case Kind::Abstract:
        case Kind::AbstractPartial:
            if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
            if (a.slots() != b.slots()) return a.slots() < b.slots() ? -1 : 1;
            break;
        default:
            break;
    }
    auto ca = a.children();
    auto cb = b.children();
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        int c = compare(ca[i], cb[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
    if (e.is_rational()) return {e.value(), Expr(1)};
    if (e.is(Kind::Product) && e.child(0).is_rational()) {
        auto ch = e.children();
        if (ch.size() == 2) return {ch[0].value(), ch[1]};
        auto n = make_node(Kind::Product);
        n->args.assign(ch.begin() + 1, ch.end());
        finish_hash(*n);
        return {ch[0].value(), Expr(std::move(n))};
    }
    return {Rational(1), e};
}

bool has_negative_sign(const Expr& e) {
    if (e.is_rational()) return e.value().is_negative();
    if (e.is(Kind::Product)) return e.child(0).is_rational() && e.child(0).value().is_negative();
    return false;
}

Expr Expr::symbol(std::string name) {
    auto n = make_node(Kind::Symbol);
    n->name = std::move(name);
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (t.is(Kind::Sum)) {
            for (const auto& c : t.children()) flat.push_back(c);
        } else {
            flat.push_back(std::move(t));
        }
    }
    std::map<Expr, Rational, ExprLess> acc;
    for (const auto& t : flat) {
        auto [c, rest] = split_coefficient(t);
        if (c.is_zero()) continue;
        auto it = acc.find(rest);
        if (it == acc.end()) {
            acc.emplace(rest, c);
        } else {
            it->second += c;
        }
    }
    std::vector<Expr> out;
    for (auto& [rest, c] : acc) {
        if (c.is_zero()) continue;
        if (rest.is_one()) {
            out.emplace_back(c);
        } else if (c.is_one()) {
            out.push_back(rest);
        } else {
            std::vector<Expr> f;
            f.emplace_back(c);
            if (rest.is(Kind::Product)) {
                for (const auto& x : rest.children()) f.push_back(x);
            } else {
                f.push_back(rest);
            }
            auto n = make_node(Kind::Product);
            n->args = std::move(f);
            finish_hash(*n);
            out.emplace_back(Expr(std::move(n)));
        }
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    auto n = make_node(Kind::Sum);
    n->args = std::move(out);
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    Rational coef(1);
    std::map<Expr, std::vector<Expr>, ExprLess> bases;
    std::vector<Expr> stack = std::move(factors);
    while (!stack.empty()) {
        Expr f = std::move(stack.back());
        stack.pop_back();
        if (f.is(Kind::Product)) {
            for (const auto& c : f.children()) stack.push_back(c);
        } else if (f.is_rational()) {
            coef *= f.value();
        } else if (f.is(Kind::Power)) {
            bases[f.child(0)].push_back(f.child(1));
        } else {
            bases[f].emplace_back(1);
        }
    }
    if (coef.is_zero()) return zero_expr();
    std::vector<Expr> out;
    bool regroup = false;
    for (auto& [b, exps] : bases) {
        Expr p = Expr::power(b, exps.size() == 1 ? exps[0] : Expr::sum(exps));
        if (p.is_rational()) {
            coef *= p.value();
        } else {
            regroup = regroup || p.is(Kind::Product);
            out.push_back(std::move(p));
        }
    }
    if (coef.is_zero()) return zero_expr();
    if (regroup) {
        out.emplace_back(coef);
        return Expr::product(std::move(out));
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return Expr(coef);
    if (out.size() == 1 && coef.is_one()) return out[0];
    std::vector<Expr> args;
    if (!coef.is_one()) args.emplace_back(coef);
    for (auto& o : out) args.push_back(std::move(o));
    auto n = make_node(Kind::Product);
    n->args = std::move(args);
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, Expr exponent) {
    if (exponent.is_zero()) return Expr(1);
    if (exponent.is_one()) return base;
    if (base.is_one()) return Expr(1);
    if (base.is_zero()) {
        if (exponent.is_rational() && !exponent.value().is_negative()) return zero_expr();
        if (exponent.is_rational()) throw std::domain_error("0 raised to a negative power");
    }
    if (exponent.is_rational()) {
        const Rational& q = exponent.value();
        if (q.is_integer()) {
            if (base.is_rational()) return Expr(base.value().pow(q.num()));
            if (base.is(Kind::Power)) return Expr::power(base.child(0), base.child(1) * exponent);
            if (base.is(Kind::Product)) {
                std::vector<Expr> f;
                for (const auto& c : base.children()) f.push_back(Expr::power(c, exponent));
                return Expr::product(std::move(f));
            }
            if (base.is(Kind::Call) && base.builtin() == Builtin::Sqrt && (q.num() >= 2 || q.num() <= -2)) {
                // sqrt(a)^n = a^(n/2) * sqrt(a)^(n mod 2)
                std::int64_t n = q.num();
                std::int64_t half = n / 2;
                std::int64_t rem = n - 2 * half;
                Expr r = Expr::power(base.child(0), Expr(half));
                return rem == 0 ? r : Expr::product({r, Expr::power(base, Expr(rem))});
            }
        } else if (q.den() == 2) {
            return Expr::power(Expr::call(Builtin::Sqrt, base), Expr(q.num()));
        }
    }
    auto n = make_node(Kind::Power);
    n->args = {std::move(base), std::move(exponent)};
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::call(Builtin fn, Expr arg) {
    if (arg.is_rational()) {
        const Rational& q = arg.value();
        switch (fn) {
            case Builtin::Sin:
            case Builtin::Tan:
            case Builtin::Arctan:
                if (q.is_zero()) return zero_expr();
                break;
            case Builtin::Cos:
            case Builtin::Exp:
                if (q.is_zero()) return Expr(1);
                break;
            case Builtin::Ln:
                if (q.is_one()) return zero_expr();
                if (!q.is_negative() && q.is_zero()) throw std::domain_error("ln(0)");
                break;
            case Builtin::Abs:
                return Expr(q.is_negative() ? -q : q);
            case Builtin::Sqrt: {
                if (q.is_negative()) throw std::domain_error("sqrt of negative rational");
                auto isqrt = [](std::int64_t v) -> std::optional<std::int64_t> {
                    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
                    for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c) {
                        if (c * c == v) return c;
                    }
                    return std::nullopt;
                };
                auto a = isqrt(q.num());
                auto b = isqrt(q.den());
                if (a && b) return Expr(Rational(*a, *b));
                break;
            }
            case Builtin::Cot:
                break;
        }
    }
    // Odd / even symmetries.
    if (has_negative_sign(arg)) {
        switch (fn) {
            case Builtin::Sin:
            case Builtin::Tan:
            case Builtin::Cot:
            case Builtin::Arctan:
                return -Expr::call(fn, -arg);
            case Builtin::Cos:
            case Builtin::Abs:
                return Expr::call(fn, -arg);
            default:
                break;
        }
    }
    if (fn == Builtin::Ln && arg.is(Kind::Call) && arg.builtin() == Builtin::Exp) return arg.child(0);
    if (fn == Builtin::Exp && arg.is(Kind::Call) && arg.builtin() == Builtin::Ln) return arg.child(0);
    auto n = make_node(Kind::Call);
    n->fn = fn;
    n->args = {std::move(arg)};
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::abstract(std::string name, std::vector<Expr> args) {
    auto n = make_node(Kind::Abstract);
    n->name = std::move(name);
    n->args = std::move(args);
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::partial(std::string name, std::vector<int> slots, std::vector<Expr> args) {
    if (slots.empty()) return Expr::abstract(std::move(name), std::move(args));
    for (int s : slots) {
        if (s < 1 || static_cast<std::size_t>(s) > args.size()) {
            throw std::invalid_argument("partial slot out of range for " + name);
        }
    }
    std::sort(slots.begin(), slots.end());
    auto n = make_node(Kind::AbstractPartial);
    n->name = std::move(name);
    n->slots = std::move(slots);
    n->args = std::move(args);
    finish_hash(*n);
    return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw std::domain_error("symbolic division by zero");
    return Expr::product({a, Expr::power(b, Expr(-1))});
}

Expr sym(std::string name) { return Expr::symbol(std::move(name)); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::power(base, exponent); }
Expr sin(const Expr& a) { return Expr::call(Builtin::Sin, a); }
Expr cos(const Expr& a) { return Expr::call(Builtin::Cos, a); }
Expr tan(const Expr& a) { return Expr::call(Builtin::Tan, a); }
Expr cot(const Expr& a) { return Expr::call(Builtin::Cot, a); }
Expr arctan(const Expr& a) { return Expr::call(Builtin::Arctan, a); }
Expr exp(const Expr& a) { return Expr::call(Builtin::Exp, a); }
Expr ln(const Expr& a) { return Expr::call(Builtin::Ln, a); }
Expr sqrt(const Expr& a) { return Expr::call(Builtin::Sqrt, a); }
Expr abs(const Expr& a) { return Expr::call(Builtin::Abs, a); }

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    if (e.is(Kind::Symbol)) {
        out.insert(e.name());
        return;
    }
    for (const auto& c : e.children()) collect_symbols(c, out);
}

void collect_abstract(const Expr& e, std::set<Expr, ExprLess>& out) {
    if (e.is(Kind::Abstract) || e.is(Kind::AbstractPartial)) out.insert(e);
    for (const auto& c : e.children()) collect_abstract(c, out);
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

bool depends_on(const Expr& e, std::string_view name) {
    if (e.is(Kind::Symbol)) return e.name() == name;
    for (const auto& c : e.children()) {
        if (depends_on(c, name)) return true;
    }
    return false;
}

std::size_t node_count(const Expr& e) {
    std::size_t n = 1;
    for (const auto& c : e.children()) n += node_count(c);
    return n;
}

std::vector<Expr> abstract_atoms(const Expr& e) {
    std::set<Expr, ExprLess> s;
    collect_abstract(e, s);
    return {s.begin(), s.end()};
}

}  // namespace boltzclass
