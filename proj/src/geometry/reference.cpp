#include <string>
#include <utility>
#include <vector>

#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"
#include "boltzclass/geometry/chart.hpp"

namespace boltzclass {

namespace {

struct Listed {
    const char* name;
    int index;  // 0-based generator index, -1 for the streaming operator
    std::vector<std::pair<const char*, const char*>> coeff;
};

const std::vector<Listed>& cylindrical_list() {
    static const std::vector<Listed> l = {
        {"X1c", 0, {{"x", "1"}}},
        {"X2c", 1, {{"r", "cos(theta)"}, {"theta", "-sin(theta)/r"}, {"V", "-W*sin(theta)/r"}, {"W", "V*sin(theta)/r"}}},
        {"X3c", 2, {{"r", "sin(theta)"}, {"theta", "cos(theta)/r"}, {"V", "W*cos(theta)/r"}, {"W", "-V*cos(theta)/r"}}},
        {"X4c", 3, {{"x", "t"}, {"u", "1"}}},
        {"X5c",
         4,
         {{"r", "t*cos(theta)"},
          {"theta", "-t*sin(theta)/r"},
          {"V", "cos(theta) - t*W*sin(theta)/r"},
          {"W", "t*V*sin(theta)/r - sin(theta)"}}},
        {"X6c",
         5,
         {{"r", "t*sin(theta)"},
          {"theta", "t*cos(theta)/r"},
          {"V", "sin(theta) + t*W*cos(theta)/r"},
          {"W", "cos(theta) - t*V*cos(theta)/r"}}},
        {"X7c", 6, {{"theta", "1"}}},
        {"X8c",
         7,
         {{"x", "r*sin(theta)"},
          {"r", "-x*sin(theta)"},
          {"theta", "-x*cos(theta)/r"},
          {"u", "V*sin(theta) + W*cos(theta)"},
          {"V", "-u*sin(theta) - x*W*cos(theta)/r"},
          {"W", "x*V*cos(theta)/r - u*cos(theta)"}}},
        {"X9c",
         8,
         {{"x", "-r*cos(theta)"},
          {"r", "x*cos(theta)"},
          {"theta", "-x*sin(theta)/r"},
          {"u", "-V*cos(theta) + W*sin(theta)"},
          {"V", "u*cos(theta) - x*W*sin(theta)/r"},
          {"W", "-u*sin(theta)"}}},
        {"X10c", 9, {{"t", "1"}}},
        {"X11c", 10, {{"t", "t"}, {"x", "x"}, {"r", "r"}, {"f", "-f"}}},
        {"transport-c",
         -1,
         {{"t", "1"}, {"x", "u"}, {"r", "V"}, {"theta", "W/r"}, {"V", "W^2/r"}, {"W", "-W*V/r"}}},
    };
    return l;
}

const std::vector<Listed>& spherical_list() {
    static const std::vector<Listed> l = {
        {"X7s",
         6,
         {{"theta", "-sin(phi)"},
          {"phi", "-cos(phi)*cot(theta)"},
          {"V", "-cos(phi)*W/sin(theta)"},
          {"W", "cos(phi)*V/sin(theta)"}}},
        {"X8s",
         7,
         {{"theta", "cos(phi)"},
          {"phi", "-sin(phi)*cot(theta)"},
          {"V", "-sin(phi)*W/sin(theta)"},
          {"W", "sin(phi)*V/sin(theta)"}}},
        {"X9s", 8, {{"phi", "1"}}},
        {"X10s", 9, {{"t", "1"}}},
        {"X11s", 10, {{"t", "t"}, {"r", "r"}, {"f", "-f"}}},
        {"transport-s",
         -1,
         {{"t", "1"},
          {"r", "U"},
          {"phi", "W/(r*sin(theta))"},
          {"theta", "V/r"},
          {"U", "(V^2 + W^2)/r"},
          {"V", "(W^2*cot(theta) - U*V)/r"},
          {"W", "-W*(U + V*cot(theta))/r"}}},
    };
    return l;
}

void check_list(Report& rep, const Chart& chart, const std::vector<Listed>& list, std::uint64_t seed) {
    auto basis = l11_basis(chart);
    std::vector<bool> listed(kL11, false);
    for (const auto& item : list) {
        VectorField ref = zero_field(chart.name, chart.coords);
        for (const auto& [c, e] : item.coeff) ref[c] = parse(e);
        VectorField got = item.index < 0 ? transport_operator(chart) : basis[item.index];
        if (item.index >= 0) listed[item.index] = true;
        Check worst;
        bool ok = true;
        for (int k = 0; k < 8; ++k) {
            ZeroVerdict v = is_identically_zero(got.coeff[k] - ref.coeff[k], chart.guard(), seed + k);
            if (v.status == ZeroStatus::Nonzero) {
                worst = make_check(item.name, v, "coefficient of d_" + chart.coords[k] + ": computed " +
                                                     simplify(got.coeff[k]).str() + ", listed " +
                                                     ref.coeff[k].str());
                ok = false;
                break;
            }
            if (v.status == ZeroStatus::NumericZero && worst.status != "numeric-zero") {
                worst = make_check(item.name, v);
            }
        }
        if (ok && worst.status.empty()) worst = make_check(item.name, ZeroVerdict{});
        worst.name = item.name;
        rep.checks.push_back(std::move(worst));
    }
    for (int j = 0; j < kL11; ++j) {
        if (listed[j]) continue;
        Check c;
        c.name = "X" + std::to_string(j + 1) + chart.name.substr(0, 1);
        c.status = "computed";
        c.detail = "no listed reference: " + basis[j].str();
        rep.checks.push_back(std::move(c));
    }
}

}  // namespace

Report verify_chart_generators(std::uint64_t seed) {
    Report rep;
    check_list(rep, Chart::cylindrical(), cylindrical_list(), seed);
    check_list(rep, Chart::spherical(), spherical_list(), seed);
    return rep;
}

namespace {

using Vec3 = std::array<Expr, 3>;

Vec3 vec(const char* a, const char* b, const char* c) { return {parse(a), parse(b), parse(c)}; }

Expr dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Frame columns of the chart at its own coordinates.
Vec3 apply_transpose(const std::array<Vec3, 3>& cols, const Vec3& v) {
    return {dot(cols[0], v), dot(cols[1], v), dot(cols[2], v)};
}

void frame_checks(Report& rep, const Chart& chart, const std::string& tag, const std::array<Vec3, 3>& cols,
                  const Vec3& g_local, const Vec3& n_local, const Vec3& n_cart, const Substitution& partner,
                  std::uint64_t seed) {
    DomainGuard guard = chart.guard();
    // g = v - v1, both velocities at the same spatial point.
    Vec3 g_cart = {chart.forward.at("u") - substitute(chart.forward.at("u"), partner),
                   chart.forward.at("v") - substitute(chart.forward.at("v"), partner),
                   chart.forward.at("w") - substitute(chart.forward.at("w"), partner)};
    Vec3 rg = apply_transpose(cols, g_cart);
    Vec3 rn = apply_transpose(cols, n_cart);
    for (int i = 0; i < 3; ++i) {
        rep.checks.push_back(make_check("g_" + tag + "[" + std::to_string(i) + "] = R^T g",
                                        is_identically_zero(rg[i] - g_local[i], guard, seed + i)));
    }
    for (int i = 0; i < 3; ++i) {
        rep.checks.push_back(make_check("n_" + tag + "[" + std::to_string(i) + "] = R^T n",
                                        is_identically_zero(rn[i] - n_local[i], guard, seed + 3 + i)));
    }
    rep.checks.push_back(make_check("g_" + tag + "^2 = g^2",
                                    is_identically_zero(dot(g_local, g_local) - dot(g_cart, g_cart), guard, seed + 6)));
    rep.checks.push_back(
        make_check("|n_" + tag + "|^2 = 1", is_identically_zero(dot(n_local, n_local) - Expr(1), guard, seed + 7)));
    rep.checks.push_back(make_check("g_" + tag + ".n_" + tag + " = g.n",
                                    is_identically_zero(dot(g_local, n_local) - dot(g_cart, n_cart), guard, seed + 8)));
}

}  // namespace

Report verify_frame_identities(std::uint64_t seed) {
    Report rep;
    {
        const Chart& c = Chart::cylindrical();
        std::array<Vec3, 3> cols = {vec("1", "0", "0"), vec("0", "cos(theta)", "sin(theta)"),
                                    vec("0", "-sin(theta)", "cos(theta)")};
        Substitution partner = {{"u", sym("u1")}, {"V", sym("V1")}, {"W", sym("W1")}};
        frame_checks(rep, c, "c", cols, vec("u - u1", "V - V1", "W - W1"),
                     vec("cos(theta1)", "cos(epsilon - theta)*sin(theta1)", "sin(epsilon - theta)*sin(theta1)"),
                     vec("cos(theta1)", "sin(theta1)*cos(epsilon)", "sin(theta1)*sin(epsilon)"), partner, seed);
    }
    {
        const Chart& c = Chart::spherical();
        std::array<Vec3, 3> cols = {vec("sin(theta)*cos(phi)", "sin(theta)*sin(phi)", "cos(theta)"),
                                    vec("cos(theta)*cos(phi)", "cos(theta)*sin(phi)", "-sin(theta)"),
                                    vec("-sin(phi)", "cos(phi)", "0")};
        Substitution partner = {{"U", sym("U1")}, {"V", sym("V1")}, {"W", sym("W1")}};
        frame_checks(rep, c, "s", cols, vec("U - U1", "V - V1", "W - W1"),
                     vec("cos(epsilon - phi)*sin(theta)*sin(theta1) + cos(theta1)*cos(theta)",
                         "cos(epsilon - phi)*cos(theta)*sin(theta1) - cos(theta1)*sin(theta)",
                         "sin(epsilon - phi)*sin(theta1)"),
                     vec("sin(theta1)*cos(epsilon)", "sin(theta1)*sin(epsilon)", "cos(theta1)"), partner, seed + 100);
    }
    return rep;
}

}  // namespace boltzclass
