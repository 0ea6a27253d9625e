#include "boltzclass/classify/classify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

namespace {

const std::vector<VectorField>& chart_basis(const Chart& chart) {
    static const std::vector<VectorField> cart = l11_basis();
    static const std::vector<VectorField> cyl = l11_basis(Chart::cylindrical());
    static const std::vector<VectorField> sph = l11_basis(Chart::spherical());
    switch (chart.kind) {
        case ChartKind::Cartesian:
            return cart;
        case ChartKind::Cylindrical:
            return cyl;
        case ChartKind::Spherical:
            return sph;
    }
    return cart;
}

void collect_denominators(const Expr& e, std::vector<Expr>& out) {
    if (e.is(Kind::Power) && e.child(1).is_rational() && e.child(1).value() < Rational(0)) {
        if (std::find(out.begin(), out.end(), e.child(0)) == out.end()) out.push_back(e.child(0));
    }
    for (const auto& c : e.children()) collect_denominators(c, out);
}

/// Rejects sample points where a denominator of `e` nearly vanishes.
void exclude_poles(DomainGuard& g, const Expr& e) {
    std::vector<Expr> dens;
    collect_denominators(e, dens);
    for (const auto& d : dens) {
        if (d.is(Kind::Symbol)) continue;
        g.exclusions.push_back([d](const Env& env) {
            try {
                return std::fabs(eval_numeric(d, env)) < 1e-3;
            } catch (const DomainError&) {
                return false;
            }
        });
    }
}

Check zero_check(std::string name, const Expr& residual, const DomainGuard& guard, std::uint64_t seed) {
    Expr r = simplify(residual);
    if (r.is_zero()) return make_check(std::move(name), ZeroVerdict{});
    try {
        ZeroVerdict v = numeric_zero_test(r, guard, seed);
        std::string detail = v.status == ZeroStatus::Nonzero ? "residual " + r.str() : std::string();
        return make_check(std::move(name), v, detail);
    } catch (const GuardTooTight&) {
        Check c;
        c.name = std::move(name);
        c.status = "error";
        c.detail = "no admissible sample point";
        return c;
    }
}

std::set<std::string> parameters_of(const Subalgebra& sub) {
    std::set<std::string> out;
    for (const auto& c : sub.generators) {
        for (const auto& e : c) {
            for (const auto& s : free_symbols(e)) out.insert(s);
        }
    }
    return out;
}

std::optional<Env> sample_point(const DomainGuard& g, const std::set<std::string>& syms, std::mt19937_64& rng,
                                const std::function<void(const Env&)>& probe) {
    for (int k = 0; k < 64; ++k) {
        auto env = g.sample(syms, rng);
        if (!env) return std::nullopt;
        try {
            probe(*env);
            return env;
        } catch (const DomainError&) {
        }
    }
    return std::nullopt;
}

}  // namespace

VectorField Subalgebra::field(int i) const { return simplify(combine(generators.at(i), chart_basis(*chart))); }

DomainGuard Subalgebra::guard() const {
    DomainGuard g = chart->guard();
    std::vector<Expr> ones;
    for (const auto& c : constraints) {
        if (c.rel == Relation::NonZero) {
            Expr e = c.expr;
            g.exclusions.push_back([e](const Env& env) {
                try {
                    return std::fabs(eval_numeric(e, env)) < 1e-3;
                } catch (const DomainError&) {
                    return false;
                }
            });
        } else if (c.rel == Relation::One) {
            ones.push_back(c.expr);
        }
    }
    if (!ones.empty()) {
        g.constraint = [ones, fb = g.fallback](Env& env, std::mt19937_64& rng) {
            for (const auto& e : ones) {
                auto syms = free_symbols(e);
                for (const auto& s : syms) {
                    if (!env.count(s)) env[s] = uniform(rng, fb.first, fb.second);
                }
                double v = eval_numeric(e, env);
                if (!(v > 1e-6)) return false;
                double k = 1.0 / std::sqrt(v);
                for (const auto& s : syms) env[s] *= k;
                if (std::fabs(eval_numeric(e, env) - 1.0) > 1e-12) return false;
            }
            return true;
        };
    }
    return g;
}

Subalgebra Subalgebra::from_row(const CatalogRow& row) {
    Subalgebra s;
    s.id = row.id;
    s.chart = &Chart::by_name(row.chart);
    s.generators = row.generators;
    s.constraints = row.constraints;
    return s;
}

Subalgebra Subalgebra::of(const std::string& chart, const std::vector<std::string>& combos) {
    Subalgebra s;
    s.chart = &Chart::by_name(chart);
    for (const auto& c : combos) s.generators.push_back(parse_combo(c));
    return s;
}

Expr determining_residual(const Subalgebra& sub, int i, const Expr& q) {
    const BasisCombo& c = sub.generators.at(i);
    Expr r = Expr(2) * c[10] * q + apply(sub.field(i), q);
    return simplify(r);
}

Expr generic_source(const Chart& chart) {
    std::vector<Expr> args;
    for (const auto& c : chart.coords) args.push_back(sym(c));
    return Expr::abstract("Psi", args);
}

std::string_view overall_name(Overall o) {
    switch (o) {
        case Overall::Pass:
            return "PASS";
        case Overall::PassNumeric:
            return "PASS-numeric";
        case Overall::Fail:
            return "FAIL";
        case Overall::Skip:
            return "SKIP";
    }
    return "?";
}

void settle(Verdict& v) {
    bool fail = false;
    bool numeric = false;
    for (const auto& c : v.checks) {
        fail = fail || !c.ok();
        numeric = numeric || c.numeric();
    }
    if (fail) {
        v.overall = Overall::Fail;
    } else if (v.overall != Overall::Skip) {
        v.overall = numeric ? Overall::PassNumeric : Overall::Pass;
    }
}

Verdict verify_source(const Subalgebra& sub, const Expr& q, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.id = sub.id;
    v.chart = sub.chart->name;
    v.what = "source";
    DomainGuard g = sub.guard();
    exclude_poles(g, q);
    for (int i = 0; i < sub.dimension(); ++i) {
        Expr r = determining_residual(sub, i, q);
        v.checks.push_back(zero_check("generator " + std::to_string(i + 1) + ": " + combo_str(sub.generators[i]), r, g,
                                      seed + static_cast<std::uint64_t>(i)));
    }
    settle(v);
    v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

Verdict verify_source_cartesian(const Subalgebra& sub, const Expr& q, std::uint64_t seed) {
    Subalgebra cart = sub;
    cart.chart = &Chart::cartesian();
    Expr qc = substitute(q, sub.chart->inverse);
    Verdict v = verify_source(cart, qc, seed);
    v.chart = "cartesian";
    return v;
}

int numeric_rank(std::vector<std::vector<double>> m, double rel) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    double scale = 0;
    for (const auto& r : m) {
        for (double x : r) scale = std::max(scale, std::fabs(x));
    }
    if (scale == 0) return 0;
    double tol = rel * scale;
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t p = row;
        for (std::size_t i = row + 1; i < rows; ++i) {
            if (std::fabs(m[i][col]) > std::fabs(m[p][col])) p = i;
        }
        if (std::fabs(m[p][col]) <= tol) continue;
        std::swap(m[p], m[row]);
        for (std::size_t i = row + 1; i < rows; ++i) {
            double f = m[i][col] / m[row][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

OrbitRanks orbit_ranks(const Subalgebra& sub, std::uint64_t seed) {
    std::vector<VectorField> fields;
    for (int i = 0; i < sub.dimension(); ++i) fields.push_back(sub.field(i));
    std::set<std::string> syms = parameters_of(sub);
    for (const auto& c : sub.chart->coords) syms.insert(c);
    DomainGuard g = sub.guard();
    std::mt19937_64 rng(seed);
    OrbitRanks out;
    std::vector<std::vector<double>> m;
    auto fill = [&](const Env& env) {
        m.assign(fields.size(), std::vector<double>(8));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            for (int k = 0; k < 8; ++k) m[i][k] = eval_numeric(fields[i].coeff[k], env);
        }
    };
    for (int p = 0; p < 8; ++p) {
        auto env = sample_point(g, syms, rng, fill);
        if (!env) continue;
        out.r_full = std::max(out.r_full, numeric_rank(m));
        for (auto& r : m) r.pop_back();
        out.r_xi = std::max(out.r_xi, numeric_rank(m));
    }
    return out;
}

InvariantRep InvariantRep::from_expr(const Expr& e) {
    InvariantRep rep;
    std::vector<Expr> omegas;
    for (const auto& a : abstract_atoms(e)) {
        if (a.is(Kind::Abstract)) omegas.push_back(a);
    }
    if (omegas.empty()) {
        rep.weight = simplify(substitute(e, Substitution{{"C", Expr(1)}}));
        return rep;
    }
    if (omegas.size() > 1) throw std::invalid_argument("representation has more than one arbitrary function: " + e.str());
    const Expr& om = omegas[0];
    rep.omega = om.name();
    rep.args.assign(om.children().begin(), om.children().end());
    rep.weight = simplify(e / om);
    if (!abstract_atoms(rep.weight).empty()) throw std::invalid_argument("representation is not weight * Omega: " + e.str());
    return rep;
}

Verdict verify_invariant_rep(const Subalgebra& sub, const std::optional<InvariantRep>& rep, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.id = sub.id;
    v.chart = sub.chart->name;
    v.what = "invariant";
    OrbitRanks ranks = orbit_ranks(sub, seed);
    std::string rank_text = "r_full=" + std::to_string(ranks.r_full) + ", r_xi=" + std::to_string(ranks.r_xi);
    if (!rep) {
        v.overall = Overall::Skip;
        v.checks.push_back(make_check("no f-dependent invariant: r_xi = r_full - 1", ranks.r_xi == ranks.r_full - 1, rank_text));
        settle(v);
        v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return v;
    }
    DomainGuard g = sub.guard();
    exclude_poles(g, rep->weight);
    for (const auto& a : rep->args) exclude_poles(g, a);
    Expr fw = simplify(sym("f") / rep->weight);
    std::uint64_t s = seed;
    for (int i = 0; i < sub.dimension(); ++i) {
        VectorField y = sub.field(i);
        std::string gen = "generator " + std::to_string(i + 1);
        for (int k = 0; k < rep->arity(); ++k) {
            v.checks.push_back(zero_check("invariance: " + gen + ", argument " + std::to_string(k + 1),
                                          apply(y, rep->args[k]), g, ++s));
        }
        v.checks.push_back(zero_check("invariance: " + gen + ", f/weight", apply(y, fw), g, ++s));
    }
    int m = rep->arity();
    v.checks.push_back(make_check("count: m + 1 = 8 - r_full", m + 1 == 8 - ranks.r_full,
                                  "m=" + std::to_string(m) + ", " + rank_text));
    std::vector<Expr> funcs = rep->args;
    funcs.push_back(fw);
    std::vector<std::vector<Expr>> jac;
    std::set<std::string> syms = parameters_of(sub);
    for (const auto& c : sub.chart->coords) syms.insert(c);
    for (const auto& fn : funcs) {
        std::vector<Expr> row;
        for (const auto& c : sub.chart->coords) row.push_back(differentiate(fn, c));
        for (const auto& x : free_symbols(fn)) syms.insert(x);
        jac.push_back(std::move(row));
    }
    std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
    std::vector<std::vector<double>> num;
    auto fill = [&](const Env& env) {
        num.assign(jac.size(), std::vector<double>(8));
        for (std::size_t i = 0; i < jac.size(); ++i) {
            for (int k = 0; k < 8; ++k) num[i][k] = eval_numeric(jac[i][k], env);
        }
    };
    int worst = m + 1;
    int points = 0;
    for (int p = 0; p < 8; ++p) {
        auto env = sample_point(g, syms, rng, fill);
        if (!env) continue;
        ++points;
        worst = std::min(worst, numeric_rank(num));
    }
    v.checks.push_back(make_check("independence: Jacobian rank m + 1", points == 8 && worst == m + 1,
                                  "min rank " + std::to_string(worst) + " of " + std::to_string(m + 1) + " over " +
                                      std::to_string(points) + " points"));
    settle(v);
    v.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

ReducedEquation reduced_differential_part(const InvariantRep& rep, const Chart& chart) {
    ReducedEquation out;
    std::vector<Expr> named;
    std::set<std::string> invariant_names;
    int p = 0;
    for (const auto& a : rep.args) {
        std::string n = a.is(Kind::Symbol) ? a.name() : "p" + std::to_string(++p);
        out.names.push_back(n);
        if (!a.is(Kind::Symbol)) out.definitions.emplace_back(n, a);
        named.push_back(sym(n));
        invariant_names.insert(n);
    }
    Expr f = rep.omega.empty() ? rep.weight : rep.weight * Expr::abstract(rep.omega, rep.args);
    Expr e = apply(transport_operator(chart), f);
    for (const auto& atom : abstract_atoms(e)) {
        Expr repl = atom.is(Kind::Abstract) ? Expr::abstract(atom.name(), named)
                                            : Expr::partial(atom.name(), atom.slots(), named);
        e = replace(e, atom, repl);
    }
    Substitution sol;
    for (const auto& [name, def] : out.definitions) {
        Expr a = simplify(substitute(def, sol));
        bool done = false;
        for (const auto& z : chart.coords) {
            if (z == "f" || invariant_names.count(z) || sol.count(z) || !depends_on(a, z)) continue;
            Expr da = simplify(differentiate(a, z));
            if (depends_on(da, z)) continue;
            Expr rest = simplify(a - da * sym(z));
            Expr zval = simplify((sym(name) - rest) / da);
            for (auto& [k, val] : sol) val = simplify(substitute(val, Substitution{{z, zval}}));
            sol[z] = zval;
            done = true;
            break;
        }
        if (!done) throw std::invalid_argument("cannot solve invariant " + name + " = " + def.str() + " for a coordinate");
    }
    e = simplify(substitute(e, sol));
    Expr pre(1);
    for (const auto& z : chart.coords) {
        if (invariant_names.count(z) || !depends_on(e, z) || e.is_zero()) continue;
        Expr k = simplify(sym(z) * differentiate(e, z) / e);
        if (k.is_rational()) pre = pre * pow(sym(z), k);
    }
    out.prefactor = simplify(pre);
    out.body = simplify(e / out.prefactor);
    for (const auto& z : chart.coords) {
        if (!invariant_names.count(z) && depends_on(out.body, z)) out.leftover.push_back(z);
    }
    return out;
}

std::string ReducedEquation::grouped() const {
    std::vector<Expr> atoms = abstract_atoms(body);
    Substitution back;
    Expr rest = body;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::string n = "atom_" + std::to_string(i);
        rest = replace(rest, atoms[i], sym(n));
    }
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        Expr c = simplify(differentiate(rest, "atom_" + std::to_string(i)));
        if (c.is_zero()) continue;
        std::string term;
        if (c.is_one()) {
            term = atoms[i].str();
        } else if (c == Expr(-1)) {
            term = "-" + atoms[i].str();
        } else if (c.is(Kind::Sum)) {
            term = "(" + c.str() + ")*" + atoms[i].str();
        } else {
            term = c.str() + "*" + atoms[i].str();
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

std::uint64_t row_seed(std::uint64_t seed, const std::string& id) {
    std::uint64_t h = fnv1a(id) ^ (seed * 0x9e3779b97f4a7c15ULL);
    h ^= h >> 31;
    return h;
}

namespace {

/// Maps parameters of a referenced row onto this row by matching generator supports.
Substitution ref_renaming(const CatalogRow& row, const CatalogRow& target) {
    Substitution out;
    for (const auto& gt : target.generators) {
        for (const auto& g : row.generators) {
            bool same = true;
            Substitution trial;
            for (int k = 0; k < kL11 && same; ++k) {
                if (gt[k].is_zero() != g[k].is_zero()) same = false;
                if (!same || gt[k].is_zero()) continue;
                if (gt[k].is(Kind::Symbol) && g[k].is(Kind::Symbol)) {
                    auto it = out.find(gt[k].name());
                    if (it != out.end() && it->second != g[k]) same = false;
                    trial[gt[k].name()] = g[k];
                } else if (gt[k] != g[k]) {
                    same = false;
                }
            }
            if (!same) continue;
            for (const auto& [k, v] : trial) out[k] = v;
            break;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = it->second.is_symbol(it->first) ? out.erase(it) : std::next(it);
    }
    return out;
}

}  // namespace

Verdict verify_row(const Catalog& cat, const CatalogRow& row, const std::string& what, std::uint64_t seed) {
    Subalgebra sub = Subalgebra::from_row(row);
    std::uint64_t s = row_seed(seed, row.id);
    bool source = what == "source";
    const Cell& own = source ? row.source : row.invariant;
    Substitution zeros;
    for (const auto& z : row.zero_parameters()) zeros[z] = Expr(0);
    Substitution rename;
    const CatalogRow* cur = &row;
    while ((source ? cur->source : cur->invariant).kind == Cell::Kind::Ref) {
        const CatalogRow* next = cat.find((source ? cur->source : cur->invariant).ref);
        Substitution step = ref_renaming(*cur, *next);
        Substitution composed = rename;
        for (const auto& [k, val] : step) composed[k] = substitute(val, rename);
        rename = composed;
        cur = next;
    }
    const Cell& cell = source ? cat.resolve_source(row) : cat.resolve_invariant(row);
    Verdict v;
    if (cell.kind == Cell::Kind::None) {
        if (source) {
            v.id = row.id;
            v.chart = row.chart;
            v.what = what;
            v.overall = Overall::Skip;
        } else {
            v = verify_invariant_rep(sub, std::nullopt, s);
        }
    } else {
        Expr e = substitute(substitute(cell.expr, rename), zeros);
        if (source) {
            v = verify_source(sub, e, s);
        } else {
            v = verify_invariant_rep(sub, InvariantRep::from_expr(e), s);
        }
    }
    if (own.kind == Cell::Kind::Ref) {
        v.note = "via ref:" + own.ref;
        for (const auto& [k, val] : rename) v.note += ", " + k + " -> " + val.str();
    }
    return v;
}

}  // namespace boltzclass
