#include "boltzclass/geometry/chart.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

namespace {

Substitution parse_map(std::initializer_list<std::pair<const char*, const char*>> m) {
    Substitution s;
    for (const auto& [k, v] : m) s[k] = parse(v);
    return s;
}

Chart make_cartesian() {
    Chart c;
    c.kind = ChartKind::Cartesian;
    c.name = "cartesian";
    c.coords = cartesian_coords();
    for (const auto& n : c.coords) {
        c.forward[n] = sym(n);
        c.inverse[n] = sym(n);
    }
    return c;
}

Chart make_cylindrical() {
    Chart c;
    c.kind = ChartKind::Cylindrical;
    c.name = "cylindrical";
    c.coords = {"x", "r", "theta", "u", "V", "W", "t", "f"};
    c.forward = parse_map({{"x", "x"},
                           {"y", "r*cos(theta)"},
                           {"z", "r*sin(theta)"},
                           {"u", "u"},
                           {"v", "V*cos(theta) - W*sin(theta)"},
                           {"w", "V*sin(theta) + W*cos(theta)"},
                           {"t", "t"},
                           {"f", "f"}});
    c.inverse = parse_map({{"x", "x"},
                           {"r", "sqrt(y^2 + z^2)"},
                           {"theta", "arctan(z/y)"},
                           {"u", "u"},
                           {"V", "(v*y + w*z)/sqrt(y^2 + z^2)"},
                           {"W", "(w*y - v*z)/sqrt(y^2 + z^2)"},
                           {"t", "t"},
                           {"f", "f"}});
    return c;
}

Chart make_spherical() {
    Chart c;
    c.kind = ChartKind::Spherical;
    c.name = "spherical";
    c.coords = {"r", "theta", "phi", "U", "V", "W", "t", "f"};
    c.forward = parse_map({{"x", "r*sin(theta)*cos(phi)"},
                           {"y", "r*sin(theta)*sin(phi)"},
                           {"z", "r*cos(theta)"},
                           {"u", "U*sin(theta)*cos(phi) + V*cos(theta)*cos(phi) - W*sin(phi)"},
                           {"v", "U*sin(theta)*sin(phi) + V*cos(theta)*sin(phi) + W*cos(phi)"},
                           {"w", "U*cos(theta) - V*sin(theta)"},
                           {"t", "t"},
                           {"f", "f"}});
    c.inverse = parse_map({{"r", "sqrt(x^2 + y^2 + z^2)"},
                           {"theta", "arctan(sqrt(x^2 + y^2)/z)"},
                           {"phi", "arctan(y/x)"},
                           {"U", "(u*x + v*y + w*z)/sqrt(x^2 + y^2 + z^2)"},
                           {"V", "(x*z*u + y*z*v - (x^2 + y^2)*w)/(sqrt(x^2 + y^2 + z^2)*sqrt(x^2 + y^2))"},
                           {"W", "(x*v - y*u)/sqrt(x^2 + y^2)"},
                           {"t", "t"},
                           {"f", "f"}});
    return c;
}

double wrap_angle(double a) {
    constexpr double two_pi = 2 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

}  // namespace

const Chart& Chart::cartesian() {
    static const Chart c = make_cartesian();
    return c;
}

const Chart& Chart::cylindrical() {
    static const Chart c = make_cylindrical();
    return c;
}

const Chart& Chart::spherical() {
    static const Chart c = make_spherical();
    return c;
}

const Chart& Chart::by_name(std::string_view name) {
    if (name == "cartesian") return cartesian();
    if (name == "cylindrical") return cylindrical();
    if (name == "spherical") return spherical();
    throw std::invalid_argument("unknown chart '" + std::string(name) + "'");
}

DomainGuard Chart::guard() const { return DomainGuard::standard(); }

Env to_chart(const Env& point, const Chart& from, const Chart& to) {
    Env cart;
    if (from.kind == ChartKind::Cartesian) {
        cart = point;
    } else {
        for (const auto& [name, e] : from.forward) cart[name] = eval_numeric(e, point);
        for (const auto& [k, v] : point) {
            if (!from.forward.count(k) && !cart.count(k)) cart[k] = v;
        }
    }
    if (to.kind == ChartKind::Cartesian) return cart;
    auto get = [&](const char* n) {
        auto it = cart.find(n);
        if (it == cart.end()) throw DomainError(std::string("missing coordinate ") + n);
        return it->second;
    };
    Env out;
    double x = get("x"), y = get("y"), z = get("z");
    if (to.kind == ChartKind::Cylindrical) {
        if (std::hypot(y, z) == 0.0) throw DomainError("guard violation: r = 0");
    } else {
        if (std::hypot(x, y) == 0.0) throw DomainError("guard violation: sin(theta) = 0");
    }
    for (const auto& [name, e] : to.inverse) {
        if (name == "theta" || name == "phi") continue;
        out[name] = eval_numeric(e, cart);
    }
    if (to.kind == ChartKind::Cylindrical) {
        out["theta"] = wrap_angle(std::atan2(z, y));
    } else {
        out["theta"] = std::atan2(std::hypot(x, y), z);
        out["phi"] = wrap_angle(std::atan2(y, x));
    }
    for (const auto& [k, v] : point) {
        if (!from.forward.count(k) && !out.count(k) && !from.inverse.count(k)) out[k] = v;
    }
    return out;
}

VectorField pushforward(const VectorField& vf, const Chart& target) {
    if (vf.chart == target.name) return vf;
    const Chart& from = Chart::by_name(vf.chart);
    // Components along d/d(cartesian), still written in the source coordinates.
    std::array<Expr, 8> cart;
    const Coords& cc = cartesian_coords();
    for (int j = 0; j < 8; ++j) {
        if (from.kind == ChartKind::Cartesian) {
            cart[j] = vf.coeff[j];
        } else {
            const Expr& fj = from.forward.at(cc[j]);
            std::vector<Expr> terms;
            for (int k = 0; k < 8; ++k) {
                if (!vf.coeff[k].is_zero()) terms.push_back(vf.coeff[k] * differentiate(fj, vf.coords[k]));
            }
            cart[j] = Expr::sum(std::move(terms));
        }
    }
    VectorField out = zero_field(target.name, target.coords);
    if (target.kind == ChartKind::Cartesian) {
        for (int j = 0; j < 8; ++j) out.coeff[j] = simplify(substitute(cart[j], from.inverse));
        return out;
    }
    // Source coordinates expressed in the target chart.
    Substitution to_target;
    if (from.kind == ChartKind::Cartesian) {
        to_target = target.forward;
    } else {
        for (const auto& [name, e] : from.inverse) to_target[name] = substitute(e, target.forward);
    }
    for (int m = 0; m < 8; ++m) {
        const Expr& gm = target.inverse.at(target.coords[m]);
        std::vector<Expr> terms;
        for (int j = 0; j < 8; ++j) {
            if (cart[j].is_zero()) continue;
            Expr dg = substitute(differentiate(gm, cc[j]), target.forward);
            terms.push_back(substitute(cart[j], to_target) * dg);
        }
        out.coeff[m] = simplify(Expr::sum(std::move(terms)));
    }
    return out;
}

std::vector<VectorField> l11_basis(const Chart& chart) {
    std::vector<VectorField> out;
    for (const auto& x : l11_basis()) out.push_back(pushforward(x, chart));
    return out;
}

VectorField transport_operator(const Chart& chart) {
    VectorField d;
    d["t"] = Expr(1);
    d["x"] = sym("u");
    d["y"] = sym("v");
    d["z"] = sym("w");
    return pushforward(d, chart);
}

double chart_round_trip_error(const Chart& chart, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DomainGuard g = chart.guard();
    std::set<std::string> names(chart.coords.begin(), chart.coords.end());
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        auto p = g.sample(names, rng);
        if (!p) throw GuardTooTight();
        Env back = to_chart(to_chart(*p, chart, Chart::cartesian()), Chart::cartesian(), chart);
        for (const auto& [k, v] : *p) {
            double d = std::fabs(back.at(k) - v);
            if (k == "theta" || k == "phi") d = std::min(d, 2 * std::numbers::pi - d);
            worst = std::max(worst, d);
        }
    }
    return worst;
}

}  // namespace boltzclass
