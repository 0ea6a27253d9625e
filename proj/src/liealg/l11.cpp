#include "boltzclass/liealg/l11.hpp"

#include <cctype>
#include <optional>
#include <utility>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

namespace {

VectorField field(std::initializer_list<std::pair<const char*, const char*>> parts) {
    VectorField v;
    for (const auto& [coord, coef] : parts) v[coord] = parse(coef);
    return v;
}

std::optional<Rational> as_rational(const Expr& e) {
    if (e.is_rational()) return e.value();
    return std::nullopt;
}

}  // namespace

const std::vector<VectorField>& l11_basis() {
    static const std::vector<VectorField> basis = {
        field({{"x", "1"}}),
        field({{"y", "1"}}),
        field({{"z", "1"}}),
        field({{"x", "t"}, {"u", "1"}}),
        field({{"y", "t"}, {"v", "1"}}),
        field({{"z", "t"}, {"w", "1"}}),
        field({{"z", "y"}, {"y", "-z"}, {"w", "v"}, {"v", "-w"}}),
        field({{"x", "z"}, {"z", "-x"}, {"u", "w"}, {"w", "-u"}}),
        field({{"y", "x"}, {"x", "-y"}, {"v", "u"}, {"u", "-v"}}),
        field({{"t", "1"}}),
        field({{"t", "t"}, {"x", "x"}, {"y", "y"}, {"z", "z"}, {"f", "-f"}}),
    };
    return basis;
}

VectorField combine(const BasisCombo& c, const std::vector<VectorField>& basis) {
    VectorField r = zero_field(basis.at(0).chart, basis.at(0).coords);
    for (int j = 0; j < kL11; ++j) {
        if (c[j].is_zero()) continue;
        r = r + c[j] * basis[j];
    }
    return r;
}

BasisCombo decompose_in_basis(const VectorField& vf, const std::vector<VectorField>& basis) {
    const Coords& coords = vf.coords;
    Substitution zeros;
    for (const auto& c : coords) zeros[c] = Expr(0);
    // Row (k, mu): coefficient of monomial mu (1 or a coordinate) in slot k.
    auto monomial_coef = [&](const Expr& e, int mu) {
        Expr d = mu < 0 ? e : differentiate(e, coords[mu]);
        return simplify(substitute(d, zeros));
    };
    const int n = static_cast<int>(basis.size());
    std::vector<std::vector<Rational>> m;
    std::vector<Expr> rhs;
    for (int k = 0; k < 8; ++k) {
        for (int mu = -1; mu < 8; ++mu) {
            std::vector<Rational> row(n);
            bool any = false;
            for (int j = 0; j < n; ++j) {
                auto q = as_rational(monomial_coef(basis[j].coeff[k], mu));
                if (!q) throw std::invalid_argument("decompose_in_basis: basis coefficients must be polynomial");
                row[j] = *q;
                any = any || !q->is_zero();
            }
            Expr b = monomial_coef(vf.coeff[k], mu);
            if (!any && b.is_zero()) continue;
            m.push_back(std::move(row));
            rhs.push_back(b);
        }
    }
    // Gaussian elimination with exact rational pivots; the right-hand side may be symbolic.
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < n && r < static_cast<int>(m.size()); ++col) {
        int p = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i) {
            if (!m[i][col].is_zero()) {
                p = i;
                break;
            }
        }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        std::swap(rhs[p], rhs[r]);
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == r || m[i][col].is_zero()) continue;
            Rational f = m[i][col] / m[r][col];
            for (int j = col; j < n; ++j) m[i][j] -= f * m[r][j];
            rhs[i] = simplify(rhs[i] - Expr(f) * rhs[r]);
        }
        pivot_col.push_back(col);
        ++r;
    }
    BasisCombo c;
    c.fill(Expr(0));
    for (int i = 0; i < r; ++i) c[pivot_col[i]] = simplify(rhs[i] / Expr(m[i][pivot_col[i]]));
    VectorField residual = simplify(vf - combine(c, basis));
    for (const auto& e : residual.coeff) {
        if (!e.is_zero()) throw NotInSpan(residual, "not in span: residual " + residual.str());
    }
    return c;
}

StructureConstants commutator_table() {
    const auto& b = l11_basis();
    StructureConstants t{};
    for (int i = 0; i < kL11; ++i) {
        for (int j = i + 1; j < kL11; ++j) {
            BasisCombo c = decompose_in_basis(lie_bracket(b[i], b[j]), b);
            for (int k = 0; k < kL11; ++k) {
                auto q = as_rational(c[k]);
                if (!q) throw std::logic_error("non-rational structure constant");
                t[i][j][k] = *q;
                t[j][i][k] = -*q;
            }
        }
    }
    return t;
}

VectorField jacobi_residual(int i, int j, int k) {
    const auto& b = l11_basis();
    VectorField s = lie_bracket(b[i], lie_bracket(b[j], b[k])) + lie_bracket(b[j], lie_bracket(b[k], b[i])) +
                    lie_bracket(b[k], lie_bracket(b[i], b[j]));
    return simplify(s);
}

Expr h_multiplier(const BasisCombo& c) { return simplify(Expr(-2) * c[10]); }

namespace {

std::string ascii_greek(const std::string& s) {
    static const std::pair<const char*, const char*> table[] = {
        {"\xce\xb1", "alpha"}, {"\xce\xb2", "beta"},   {"\xce\xb3", "gamma"}, {"\xce\xb4", "delta"},
        {"\xcf\x83", "sigma"}, {"\xcf\x84", "tau"},    {"\xce\xbb", "lambda"}, {"\xce\xbc", "mu"},
        {"\xce\xbd", "nu"},    {"\xce\xba", "kappa"},  {"\xcf\x89", "omega"},
    };
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        bool hit = false;
        for (const auto& [g, a] : table) {
            std::string_view gv(g);
            if (s.compare(i, gv.size(), gv) == 0) {
                out += a;
                i += gv.size();
                hit = true;
                break;
            }
        }
        if (!hit) out += s[i++];
    }
    return out;
}

}  // namespace

BasisCombo parse_combo(const std::string& text) {
    std::string s = ascii_greek(text);
    BasisCombo c;
    c.fill(Expr(0));
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("bad generator combination '" + text + "': " + why);
    };
    bool first = true;
    while (true) {
        skip();
        if (i >= s.size()) break;
        Expr sign(1);
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = Expr(-1);
            ++i;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        Expr coef(1);
        if (i < s.size() && s[i] == '(') {
            int depth = 0;
            std::size_t start = i;
            for (; i < s.size(); ++i) {
                if (s[i] == '(') ++depth;
                if (s[i] == ')' && --depth == 0) break;
            }
            if (i >= s.size()) fail("unbalanced parenthesis");
            coef = parse(s.substr(start, i - start + 1));
            ++i;
            if (i < s.size() && s[i] == '*') ++i;
        } else if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
            std::size_t start = i;
            while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
            coef = sym(s.substr(start, i - start));
            if (i < s.size() && s[i] == '*') ++i;
        } else {
            std::size_t save = i;
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
            if (i < s.size() && s[i] == '*') {
                coef = parse(s.substr(save, i - save));
                ++i;
            } else {
                i = save;
            }
        }
        skip();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) fail("missing generator index");
        int idx = std::stoi(s.substr(start, i - start));
        if (idx < 1 || idx > kL11) fail("generator index out of range");
        c[idx - 1] = simplify(c[idx - 1] + sign * coef);
    }
    bool any = false;
    for (const auto& e : c) any = any || !e.is_zero();
    if (!any) fail("empty combination");
    return c;
}

std::string combo_str(const BasisCombo& c) {
    std::string out;
    for (int j = 0; j < kL11; ++j) {
        if (c[j].is_zero()) continue;
        std::string idx = std::to_string(j + 1);
        std::string term;
        if (c[j].is_one()) {
            term = idx;
        } else if (c[j] == Expr(-1)) {
            term = "-" + idx;
        } else if (c[j].is(Kind::Symbol)) {
            term = c[j].str() + idx;
        } else {
            term = "(" + c[j].str() + ")*" + idx;
        }
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

}  // namespace boltzclass
