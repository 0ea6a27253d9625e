#include "boltzclass/expr/simplify.hpp"

#include <climits>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace boltzclass {

namespace {

constexpr std::size_t kMaxTerms = 40000;
constexpr int kMaxMultipleAngle = 8;

struct LimitExceeded : std::runtime_error {
    LimitExceeded() : std::runtime_error("simplify: expression too large") {}
};

// Sparse Laurent monomial: (atom id, nonzero exponent), sorted by id.
using Mono = std::vector<std::pair<int, int>>;

// Lexicographic order on dense exponent vectors; compatible with multiplication.
int mono_cmp(const Mono& a, const Mono& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int ia = i < a.size() ? a[i].first : INT_MAX;
        int ib = j < b.size() ? b[j].first : INT_MAX;
        if (ia == ib) {
            if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
            ++i;
            ++j;
        } else if (ia < ib) {
            return a[i].second < 0 ? -1 : 1;
        } else {
            return b[j].second < 0 ? 1 : -1;
        }
    }
    return 0;
}

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return mono_cmp(a, b) < 0; }
};

using Poly = std::map<Mono, Rational, MonoLess>;

struct PolyLess {
    bool operator()(const Poly& a, const Poly& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
            int c = mono_cmp(ia->first, ib->first);
            if (c != 0) return c < 0;
            if (!(ia->second == ib->second)) return ia->second < ib->second;
        }
        return false;
    }
};

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            int e = a[i].second + b[j].second;
            if (e != 0) out.emplace_back(a[i].first, e);
            ++i;
            ++j;
        }
    }
    return out;
}

Mono mono_pow(const Mono& a, int k) {
    if (k == 0) return {};
    Mono out = a;
    for (auto& [id, e] : out) e *= k;
    return out;
}

void add_term(Poly& p, const Mono& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = p.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

void check_size(const Poly& p) {
    if (p.size() > kMaxTerms) throw LimitExceeded();
}

Poly poly_const(const Rational& c) {
    Poly p;
    add_term(p, {}, c);
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b) add_term(out, m, c);
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
        check_size(out);
    }
    return out;
}

Poly poly_scale(const Poly& a, const Rational& c, const Mono& m) {
    Poly out;
    if (c.is_zero()) return out;
    for (const auto& [ma, ca] : a) out.emplace(mono_mul(ma, m), ca * c);
    return out;
}

Poly poly_pow(const Poly& a, int k) {
    Poly r = poly_const(Rational(1));
    Poly b = a;
    while (k > 0) {
        if (k & 1) r = poly_mul(r, b);
        k >>= 1;
        if (k) b = poly_mul(b, b);
    }
    return r;
}

bool is_const(const Poly& p) { return p.empty() || (p.size() == 1 && p.begin()->first.empty()); }

// Per-atom minimum exponent; atoms missing from some term count as exponent 0.
Mono content_mono(const Poly& p) {
    std::map<int, int> lo;
    std::map<int, int> seen;
    for (const auto& [m, c] : p) {
        for (const auto& [id, e] : m) {
            auto it = lo.find(id);
            if (it == lo.end()) {
                lo[id] = e;
            } else {
                it->second = std::min(it->second, e);
            }
            ++seen[id];
        }
    }
    Mono out;
    for (auto& [id, e] : lo) {
        int v = seen[id] == static_cast<int>(p.size()) ? e : std::min(e, 0);
        if (v != 0) out.emplace_back(id, v);
    }
    return out;
}

struct Normalized {
    Rational coef;
    Mono mono;
    Poly prim;  // leading coefficient 1, no monomial content
};

Normalized normalize(const Poly& p) {
    Normalized n;
    Mono m = content_mono(p);
    Rational lead = p.rbegin()->second;
    n.coef = lead;
    n.mono = m;
    n.prim = poly_scale(p, Rational(1) / lead, mono_pow(m, -1));
    return n;
}

// Divides a Laurent polynomial `num` by a primitive polynomial `d` (non-negative
// exponents). Returns the quotient when the division is exact.
std::optional<Poly> exact_divide(const Poly& num, const Poly& d) {
    if (num.empty()) return Poly{};
    Mono shift = content_mono(num);
    Mono up;
    for (const auto& [id, e] : shift) {
        if (e < 0) up.emplace_back(id, -e);
    }
    Poly rem = poly_scale(num, Rational(1), up);
    const auto& [dl, dc] = *d.rbegin();
    Poly q;
    std::size_t steps = 0;
    while (!rem.empty()) {
        if (++steps > 4 * kMaxTerms) return std::nullopt;
        const auto [rl, rc] = *rem.rbegin();
        Mono t = mono_mul(rl, mono_pow(dl, -1));
        for (const auto& [id, e] : t) {
            if (e < 0) return std::nullopt;
        }
        Rational c = rc / dc;
        add_term(q, t, c);
        for (const auto& [m, cd] : d) add_term(rem, mono_mul(m, t), -(c * cd));
        check_size(rem);
    }
    return poly_scale(q, Rational(1), mono_pow(up, -1));
}

struct RF {
    Poly num;
    std::map<Poly, int, PolyLess> den;
};

RF rf_const(const Rational& c) { return RF{poly_const(c), {}}; }

bool positive_rational_sqrt(const Rational& q, Rational& out) {
    if (q.is_negative()) return false;
    auto isqrt = [](std::int64_t v) -> std::optional<std::int64_t> {
        auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
        for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c) {
            if (c * c == v) return c;
        }
        return std::nullopt;
    };
    auto a = isqrt(q.num());
    auto b = isqrt(q.den());
    if (!a || !b) return false;
    out = Rational(*a, *b);
    return true;
}

class Simplifier {
public:
    Expr canonical(const Expr& e) { return to_expr(convert(e)); }

    RF convert(const Expr& e) {
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        RF r = compute(e);
        memo_.emplace(e, r);
        return r;
    }

    Expr to_expr(const RF& r) {
        Expr n = poly_expr(r.num);
        if (r.den.empty()) return n;
        std::vector<Expr> f{n};
        for (const auto& [p, k] : r.den) {
            if (auto c = cos_square(p)) {
                f.push_back(Expr(k % 2 ? -1 : 1));
                f.push_back(pow(*c, Expr(-2 * k)));
            } else {
                f.push_back(pow(poly_expr(p), Expr(-k)));
            }
        }
        return Expr::product(std::move(f));
    }

    // The factor sin(a)^2 - 1 is printed as -cos(a)^2.
    std::optional<Expr> cos_square(const Poly& p) const {
        if (p.size() != 2) return std::nullopt;
        auto lo = p.begin();
        auto hi = std::next(lo);
        if (!lo->first.empty() || !(lo->second == Rational(-1)) || !hi->second.is_one()) return std::nullopt;
        if (hi->first.size() != 1 || hi->first[0].second != 2) return std::nullopt;
        for (const auto& [cid, sid] : cos_partner_) {
            if (sid == hi->first[0].first) return atoms_[cid];
        }
        return std::nullopt;
    }

    Expr poly_expr(const Poly& p) {
        std::vector<Expr> terms;
        terms.reserve(p.size());
        for (const auto& [m, c] : p) terms.push_back(mono_expr(m, c));
        return Expr::sum(std::move(terms));
    }

    Expr den_expr(const RF& r) {
        std::vector<Expr> f;
        for (const auto& [p, k] : r.den) {
            if (auto c = cos_square(p)) {
                f.push_back(Expr(k % 2 ? -1 : 1));
                f.push_back(pow(*c, Expr(2 * k)));
            } else {
                f.push_back(pow(poly_expr(p), Expr(k)));
            }
        }
        return Expr::product(std::move(f));
    }

private:
    Expr mono_expr(const Mono& m, const Rational& c) {
        std::vector<Expr> f;
        f.emplace_back(c);
        for (const auto& [id, e] : m) f.push_back(pow(atoms_[id], Expr(e)));
        return Expr::product(std::move(f));
    }

    int atom_id(const Expr& a) {
        auto it = ids_.find(a);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(atoms_.size());
        atoms_.push_back(a);
        ids_.emplace(a, id);
        return id;
    }

    RF rf_atom(const Expr& a, int k = 1) {
        int id = atom_id(a);
        Poly p;
        p.emplace(Mono{{id, k}}, Rational(1));
        return RF{std::move(p), {}};
    }

    // An Expr produced by a builtin constructor: a Call, or -Call for odd functions.
    RF rf_call_result(const Expr& e) {
        if (e.is_rational()) return rf_const(e.value());
        if (e.is(Kind::Call)) return rf_atom(e);
        if (e.is(Kind::Product) && e.size() == 2 && e.child(0).is_rational() && e.child(1).is(Kind::Call)) {
            RF r = rf_atom(e.child(1));
            return scale(r, e.child(0).value());
        }
        return convert(e);
    }

    static RF scale(RF r, const Rational& c) {
        r.num = poly_scale(r.num, c, {});
        if (r.num.empty()) r.den.clear();
        return r;
    }

    static Poly expand_den(const std::map<Poly, int, PolyLess>& den, const std::map<Poly, int, PolyLess>* minus) {
        Poly out = poly_const(Rational(1));
        for (const auto& [p, k] : den) {
            int e = k;
            if (minus) {
                auto it = minus->find(p);
                if (it != minus->end()) e -= it->second;
            }
            if (e > 0) out = poly_mul(out, poly_pow(p, e));
        }
        return out;
    }

    void cancel(RF& r) {
        if (r.num.empty()) {
            r.den.clear();
            return;
        }
        for (auto it = r.den.begin(); it != r.den.end();) {
            while (it->second > 0) {
                auto q = exact_divide(r.num, it->first);
                if (!q) break;
                r.num = std::move(*q);
                --it->second;
            }
            if (it->second == 0) {
                it = r.den.erase(it);
            } else {
                ++it;
            }
        }
    }

    RF add(const RF& a, const RF& b) {
        if (a.num.empty()) return b;
        if (b.num.empty()) return a;
        RF r;
        r.den = a.den;
        for (const auto& [p, k] : b.den) {
            auto& slot = r.den[p];
            slot = std::max(slot, k);
        }
        Poly na = a.den == r.den ? a.num : poly_mul(a.num, expand_den(r.den, &a.den));
        Poly nb = b.den == r.den ? b.num : poly_mul(b.num, expand_den(r.den, &b.den));
        r.num = poly_add(na, nb);
        check_size(r.num);
        cancel(r);
        return r;
    }

    RF mul(const RF& a, const RF& b) {
        if (a.num.empty() || b.num.empty()) return rf_const(Rational(0));
        RF red = reduce(poly_mul(a.num, b.num));
        RF r;
        r.num = std::move(red.num);
        r.den = a.den;
        for (const auto& [p, k] : b.den) r.den[p] += k;
        for (const auto& [p, k] : red.den) r.den[p] += k;
        cancel(r);
        return r;
    }

    std::map<Poly, int, PolyLess> factorize(Poly prim) {
        std::map<Poly, int, PolyLess> out;
        for (const auto& f : factors_) {
            if (is_const(prim)) break;
            if (f.size() > prim.size()) continue;
            while (!is_const(prim)) {
                auto q = exact_divide(prim, f);
                if (!q) break;
                ++out[f];
                prim = std::move(*q);
            }
        }
        if (!is_const(prim)) {
            Normalized n = normalize(prim);
            factors_.push_back(n.prim);
            ++out[n.prim];
        }
        return out;
    }

    RF inv(const RF& a) {
        if (a.num.empty()) throw std::domain_error("division by an expression that simplifies to 0");
        Normalized n = normalize(a.num);
        RF r;
        r.num = poly_scale(expand_den(a.den, nullptr), Rational(1) / n.coef, mono_pow(n.mono, -1));
        if (!is_const(n.prim)) r.den = factorize(n.prim);
        RF red = reduce(r.num);
        red.den.insert(r.den.begin(), r.den.end());
        cancel(red);
        return red;
    }

    RF rf_pow(const RF& a, std::int64_t k) {
        if (k == 0) return rf_const(Rational(1));
        if (k < 0) return rf_pow(inv(a), -k);
        if (a.den.empty() && a.num.size() == 1) {
            const auto& [m, c] = *a.num.begin();
            Poly p;
            p.emplace(mono_pow(m, static_cast<int>(k)), c.pow(k));
            return reduce(p);
        }
        RF r = rf_const(Rational(1));
        RF b = a;
        while (k > 0) {
            if (k & 1) r = mul(r, b);
            k >>= 1;
            if (k) b = mul(b, b);
        }
        return r;
    }

    // cos(a)^k -> cos(a)^(k mod 2) (1 - sin(a)^2)^(k div 2), also for k < 0;
    // sqrt(A)^k -> A^h sqrt(A)^r.
    RF reduce(const Poly& p) {
        Poly clean;
        Poly trig;
        RF inverse_trig = rf_const(Rational(0));
        for (const auto& [m, c] : p) {
            bool has_cos = false;
            for (const auto& [id, e] : m) {
                if ((e >= 2 || e <= -1) && cos_partner_.count(id)) has_cos = true;
            }
            if (!has_cos) {
                add_term(clean, m, c);
                continue;
            }
            Poly term = poly_const(c);
            Poly below = poly_const(Rational(1));
            Mono rest;
            for (const auto& [id, e] : m) {
                auto it = cos_partner_.find(id);
                if ((e >= 2 || e <= -1) && it != cos_partner_.end()) {
                    if (e % 2) rest.emplace_back(id, 1);
                    Poly one_minus;
                    add_term(one_minus, {}, Rational(1));
                    add_term(one_minus, Mono{{it->second, 2}}, Rational(-1));
                    if (e > 0) {
                        term = poly_mul(term, poly_pow(one_minus, e / 2));
                    } else {
                        below = poly_mul(below, poly_pow(one_minus, (1 - e) / 2));
                    }
                } else {
                    rest.emplace_back(id, e);
                }
            }
            if (is_const(below)) {
                for (const auto& [tm, tc] : term) add_term(trig, mono_mul(tm, rest), tc);
            } else {
                Poly top;
                for (const auto& [tm, tc] : term) add_term(top, mono_mul(tm, rest), tc);
                inverse_trig = add(inverse_trig, mul(RF{top, {}}, inv(RF{below, {}})));
            }
        }
        Poly all = poly_add(clean, trig);
        check_size(all);
        if (!inverse_trig.num.empty()) {
            RF head = reduce(all);
            return add(head, inverse_trig);
        }

        Poly plain;
        RF extra = rf_const(Rational(0));
        for (const auto& [m, c] : all) {
            bool dirty = false;
            for (const auto& [id, e] : m) {
                if ((e < 0 || e > 1) && sqrt_inner_.count(id)) dirty = true;
            }
            if (!dirty) {
                add_term(plain, m, c);
                continue;
            }
            Mono rest;
            RF factor = rf_const(c);
            for (const auto& [id, e] : m) {
                auto it = sqrt_inner_.find(id);
                if ((e < 0 || e > 1) && it != sqrt_inner_.end()) {
                    int h = e >= 0 ? e / 2 : -((-e + 1) / 2);
                    int rem = e - 2 * h;
                    if (rem) rest.emplace_back(id, rem);
                    RF inner = it->second;
                    factor = mul(factor, rf_pow(inner, h));
                } else {
                    rest.emplace_back(id, e);
                }
            }
            Poly rp;
            rp.emplace(rest, Rational(1));
            extra = add(extra, mul(factor, RF{rp, {}}));
        }
        if (extra.num.empty()) return RF{plain, {}};
        return add(RF{plain, {}}, extra);
    }

    bool positive_atom(const Expr& a) const {
        switch (a.kind()) {
            case Kind::Symbol:
                return true;
            case Kind::Call:
                switch (a.builtin()) {
                    case Builtin::Exp:
                    case Builtin::Sqrt:
                    case Builtin::Abs:
                        return true;
                    case Builtin::Sin:
                        return a.child(0).is(Kind::Symbol) && a.child(0).name().rfind("theta", 0) == 0;
                    default:
                        return false;
                }
            case Kind::Power:
                return (a.child(0).is_rational() && !a.child(0).value().is_negative()) || positive_atom(a.child(0));
            default:
                return false;
        }
    }

    RF compute(const Expr& e) {
        switch (e.kind()) {
            case Kind::Rational:
                return rf_const(e.value());
            case Kind::Symbol:
                return rf_atom(e);
            case Kind::Sum: {
                RF acc = rf_const(Rational(0));
                for (const auto& c : e.children()) acc = add(acc, convert(c));
                return acc;
            }
            case Kind::Product: {
                RF acc = rf_const(Rational(1));
                for (const auto& c : e.children()) acc = mul(acc, convert(c));
                return acc;
            }
            case Kind::Power:
                return convert_power(e.child(0), e.child(1));
            case Kind::Call:
                return convert_call(e.builtin(), e.child(0));
            case Kind::Abstract:
            case Kind::AbstractPartial: {
                std::vector<Expr> args;
                for (const auto& c : e.children()) args.push_back(canonical(c));
                return rf_atom(Expr::partial(e.name(), e.slots(), std::move(args)));
            }
        }
        throw std::logic_error("simplify: bad kind");
    }

    RF convert_power(const Expr& b, const Expr& x) {
        if (x.is_rational()) {
            const Rational& q = x.value();
            if (q.is_integer()) return rf_pow(convert(b), q.num());
            if (q.den() == 2) return rf_pow(convert_call(Builtin::Sqrt, b), q.num());
            return rf_pow(power_term(b, Expr(Rational(1, q.den()))), q.num());
        }
        RF xr = convert(x);
        if (!xr.den.empty()) return rf_atom(Expr::power(canonical(b), to_expr(xr)));
        RF acc = rf_const(Rational(1));
        for (const auto& [m, c] : xr.num) {
            if (m.empty()) {
                acc = mul(acc, convert_power(b, Expr(c)));
                continue;
            }
            Expr me = mono_expr(m, Rational(1, c.den()));
            acc = mul(acc, rf_pow(power_term(b, me), c.num()));
        }
        return acc;
    }

    // b^E for a non-integer exponent E that is a single monomial.
    RF power_term(const Expr& b, const Expr& ex) {
        RF br = convert(b);
        if (br.den.empty() && br.num.size() == 1) {
            const auto& [m, c] = *br.num.begin();
            bool ok = !c.is_negative();
            for (const auto& [id, k] : m) ok = ok && positive_atom(atoms_[id]);
            if (ok) {
                RF acc = c.is_one() ? rf_const(Rational(1)) : rf_atom(Expr::power(Expr(c), ex));
                for (const auto& [id, k] : m) {
                    const Expr& a = atoms_[id];
                    Expr kex = Expr(k) * ex;
                    RF part;
                    if (a.is(Kind::Power)) {
                        part = convert_power(a.child(0), a.child(1) * kex);
                    } else if (a.is(Kind::Call) && a.builtin() == Builtin::Exp) {
                        part = convert_call(Builtin::Exp, a.child(0) * kex);
                    } else {
                        part = rf_pow(rf_atom(Expr::power(a, ex)), k);
                    }
                    acc = mul(acc, part);
                }
                return acc;
            }
        }
        return rf_atom(Expr::power(to_expr(br), ex));
    }

    RF sin_cos(Builtin fn, const RF& ar) {
        Expr arg = to_expr(ar);
        if (!ar.den.empty() || ar.num.empty() || ar.num.size() == 1) {
            if (ar.den.empty() && ar.num.size() == 1) {
                const auto& [m, c] = *ar.num.begin();
                if (c.is_one() && m.size() == 1 && m[0].second == 1) {
                    const Expr& a = atoms_[m[0].first];
                    if (a.is(Kind::Call) && a.builtin() == Builtin::Arctan) {
                        const Expr& z = a.child(0);
                        Expr root = sqrt(Expr(1) + z * z);
                        return convert(fn == Builtin::Sin ? z / root : Expr(1) / root);
                    }
                }
                if (!m.empty() && c.is_integer() && (c.num() >= 2 || c.num() <= -2) &&
                    std::abs(c.num()) <= kMaxMultipleAngle) {
                    std::int64_t n = c.num();
                    RF base = RF{poly_scale(ar.num, Rational(1, n < 0 ? -n : n), {}), {}};
                    RF rest = RF{poly_scale(base.num, Rational((n < 0 ? -n : n) - 1), {}), {}};
                    RF s1 = sin_cos(Builtin::Sin, base), c1 = sin_cos(Builtin::Cos, base);
                    RF sr = sin_cos(Builtin::Sin, rest), cr = sin_cos(Builtin::Cos, rest);
                    RF r;
                    if (fn == Builtin::Sin) {
                        r = add(mul(s1, cr), mul(c1, sr));
                        if (n < 0) r = scale(r, Rational(-1));
                    } else {
                        r = add(mul(c1, cr), scale(mul(s1, sr), Rational(-1)));
                    }
                    return r;
                }
            }
            Expr call = Expr::call(fn, arg);
            if (fn == Builtin::Cos && call.is(Kind::Call)) register_cos(call);
            return rf_call_result(call);
        }
        auto first = ar.num.begin();
        RF t1{Poly{{first->first, first->second}}, {}};
        Poly restp = ar.num;
        restp.erase(first->first);
        RF rest{restp, {}};
        RF s1 = sin_cos(Builtin::Sin, t1), c1 = sin_cos(Builtin::Cos, t1);
        RF sr = sin_cos(Builtin::Sin, rest), cr = sin_cos(Builtin::Cos, rest);
        if (fn == Builtin::Sin) return add(mul(s1, cr), mul(c1, sr));
        return add(mul(c1, cr), scale(mul(s1, sr), Rational(-1)));
    }

    void register_cos(const Expr& c) {
        int cid = atom_id(c);
        if (cos_partner_.count(cid)) return;
        Expr s = Expr::call(Builtin::Sin, c.child(0));
        cos_partner_[cid] = atom_id(s);
    }

    RF convert_call(Builtin fn, const Expr& a) {
        RF ar = convert(a);
        switch (fn) {
            case Builtin::Sin:
            case Builtin::Cos:
                return sin_cos(fn, ar);
            case Builtin::Tan:
                return mul(sin_cos(Builtin::Sin, ar), inv(sin_cos(Builtin::Cos, ar)));
            case Builtin::Cot:
                return mul(sin_cos(Builtin::Cos, ar), inv(sin_cos(Builtin::Sin, ar)));
            case Builtin::Arctan:
                return rf_call_result(Expr::call(fn, to_expr(ar)));
            case Builtin::Exp:
                return convert_exp(ar);
            case Builtin::Ln:
                return convert_ln(ar);
            case Builtin::Sqrt:
                return convert_sqrt(ar);
            case Builtin::Abs:
                return convert_abs(ar);
        }
        throw std::logic_error("simplify: bad builtin");
    }

    RF convert_exp(const RF& ar) {
        if (!ar.den.empty()) return rf_atom(Expr::call(Builtin::Exp, to_expr(ar)));
        RF acc = rf_const(Rational(1));
        for (const auto& [m, c] : ar.num) {
            std::optional<std::size_t> log_at;
            for (std::size_t i = 0; i < m.size(); ++i) {
                const Expr& a = atoms_[m[i].first];
                if (m[i].second == 1 && a.is(Kind::Call) && a.builtin() == Builtin::Ln) {
                    log_at = i;
                    break;
                }
            }
            if (log_at) {
                Mono rest = m;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*log_at));
                acc = mul(acc, convert_power(atoms_[m[*log_at].first].child(0), mono_expr(rest, c)));
                continue;
            }
            Expr inner = mono_expr(m, Rational(1, c.den()));
            Expr call = Expr::call(Builtin::Exp, inner);
            RF part = call.is(Kind::Call) ? rf_atom(call) : convert(call);
            acc = mul(acc, rf_pow(part, c.num()));
        }
        return acc;
    }

    RF ln_atom(const Expr& a) {
        if (a.is(Kind::Call)) {
            switch (a.builtin()) {
                case Builtin::Exp:
                    return convert(a.child(0));
                case Builtin::Sqrt:
                    return scale(convert_call(Builtin::Ln, a.child(0)), Rational(1, 2));
                default:
                    break;
            }
        }
        if (a.is(Kind::Power)) return convert(a.child(1) * Expr::call(Builtin::Ln, a.child(0)));
        return rf_atom(Expr::call(Builtin::Ln, a));
    }

    RF convert_ln(const RF& ar) {
        if (ar.num.empty()) throw std::domain_error("ln(0)");
        Normalized n = normalize(ar.num);
        RF acc = rf_const(Rational(0));
        RF rest{n.prim, {}};
        rest.den = ar.den;
        Rational c = n.coef;
        if (c.is_negative()) {
            rest = scale(rest, Rational(-1));
            c = -c;
        }
        if (!c.is_one()) acc = add(acc, rf_call_result(Expr::call(Builtin::Ln, Expr(c))));
        Mono keep;
        for (const auto& [id, k] : n.mono) {
            if (positive_atom(atoms_[id])) {
                acc = add(acc, scale(ln_atom(atoms_[id]), Rational(k)));
            } else {
                keep.emplace_back(id, k);
            }
        }
        rest.num = poly_scale(rest.num, Rational(1), keep);
        Expr re = to_expr(rest);
        if (!re.is_one()) acc = add(acc, rf_call_result(Expr::call(Builtin::Ln, re)));
        return acc;
    }

    RF convert_sqrt(const RF& ar) {
        if (ar.num.empty()) return rf_const(Rational(0));
        Normalized n = normalize(ar.num);
        RF outside = rf_const(Rational(1));
        RF inside{n.prim, {}};
        Rational root;
        if (positive_rational_sqrt(n.coef, root)) {
            outside = rf_const(root);
        } else {
            inside = scale(inside, n.coef);
        }
        Mono out_m, in_m;
        for (const auto& [id, k] : n.mono) {
            if (positive_atom(atoms_[id])) {
                int h = k >= 0 ? k / 2 : -((-k + 1) / 2);
                int r = k - 2 * h;
                if (h) out_m.emplace_back(id, h);
                if (r) in_m.emplace_back(id, r);
            } else {
                in_m.emplace_back(id, k);
            }
        }
        outside.num = poly_scale(outside.num, Rational(1), out_m);
        inside.num = poly_scale(inside.num, Rational(1), in_m);
        for (const auto& [p, k] : ar.den) {
            int h = k / 2;
            if (h) outside.den[p] += h;
            if (k % 2) inside.den[p] += 1;
        }
        Expr ie = to_expr(inside);
        if (ie.is_one()) return outside;
        Expr call = Expr::call(Builtin::Sqrt, ie);
        if (!call.is(Kind::Call)) return mul(outside, convert(call));
        int id = atom_id(call);
        sqrt_inner_.emplace(id, inside);
        return mul(outside, rf_atom(call));
    }

    RF convert_abs(const RF& ar) {
        if (ar.num.empty()) return rf_const(Rational(0));
        if (ar.den.empty() && ar.num.size() == 1) {
            const auto& [m, c] = *ar.num.begin();
            bool ok = true;
            for (const auto& [id, k] : m) ok = ok && (k % 2 == 0 || positive_atom(atoms_[id]));
            if (ok) {
                Poly p;
                p.emplace(m, c.is_negative() ? -c : c);
                return RF{p, {}};
            }
        }
        return rf_call_result(Expr::call(Builtin::Abs, to_expr(ar)));
    }

    std::vector<Expr> atoms_;
    std::unordered_map<Expr, int, ExprHash> ids_;
    std::unordered_map<int, int> cos_partner_;
    std::unordered_map<int, RF> sqrt_inner_;
    std::vector<Poly> factors_;
    std::unordered_map<Expr, RF, ExprHash> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
    try {
        Simplifier s;
        return s.canonical(e);
    } catch (const std::overflow_error&) {
        return e;
    } catch (const LimitExceeded&) {
        return e;
    }
}

std::pair<Expr, Expr> fraction(const Expr& e) {
    try {
        Simplifier s;
        RF r = s.convert(e);
        return {s.poly_expr(r.num), s.den_expr(r)};
    } catch (const std::overflow_error&) {
        return {e, Expr(1)};
    } catch (const LimitExceeded&) {
        return {e, Expr(1)};
    }
}

bool simplifies_to_zero(const Expr& e) { return simplify(e).is_zero(); }

}  // namespace boltzclass
