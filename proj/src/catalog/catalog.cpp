#include "boltzclass/catalog/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& v, int line) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') throw CatalogError(line, "expected quoted value: " + v);
    return v.substr(1, v.size() - 2);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

const std::set<std::string>& chart_symbols(const std::string& chart) {
    static const std::map<std::string, std::set<std::string>> m = {
        {"cartesian", {"x", "y", "z", "u", "v", "w", "t", "f"}},
        {"cylindrical", {"x", "r", "theta", "u", "V", "W", "t", "f"}},
        {"spherical", {"r", "theta", "phi", "U", "V", "W", "t", "f"}},
    };
    auto it = m.find(chart);
    if (it == m.end()) throw CatalogError(0, "unknown chart " + chart);
    return it->second;
}

Constraint parse_constraint(const std::string& text, int line) {
    Constraint c;
    c.text = text;
    std::string lhs;
    std::string rhs;
    if (auto p = text.find("!="); p != std::string::npos) {
        lhs = text.substr(0, p);
        rhs = text.substr(p + 2);
        c.rel = Relation::NonZero;
    } else if (auto q = text.find('='); q != std::string::npos) {
        lhs = text.substr(0, q);
        rhs = text.substr(q + 1);
        rhs = trim(rhs);
        if (rhs == "0") {
            c.rel = Relation::Zero;
        } else if (rhs == "1") {
            c.rel = Relation::One;
        } else {
            throw CatalogError(line, "constraint must be '= 0', '= 1' or '!= 0': " + text);
        }
    } else {
        throw CatalogError(line, "bad constraint: " + text);
    }
    if (c.rel == Relation::NonZero && trim(rhs) != "0") throw CatalogError(line, "constraint must compare with 0: " + text);
    try {
        c.expr = parse(trim(lhs));
    } catch (const ParseError& e) {
        throw CatalogError(line, std::string("constraint: ") + e.what());
    }
    return c;
}

Cell parse_cell(const std::string& v, int line) {
    Cell c;
    c.text = v;
    if (v == "none") {
        c.kind = Cell::Kind::None;
    } else if (v.rfind("ref:", 0) == 0) {
        c.kind = Cell::Kind::Ref;
        c.ref = v.substr(4);
    } else {
        c.kind = Cell::Kind::Expr;
        std::string body = unquote(v, line);
        c.text = body;
        try {
            c.expr = parse(body);
        } catch (const ParseError& e) {
            throw CatalogError(line, std::string("expression: ") + e.what() + " at offset " +
                                         std::to_string(e.offset()) + " in '" + body + "'");
        }
    }
    return c;
}

BasisCombo zero_out(const BasisCombo& c, const Substitution& zeros) {
    if (zeros.empty()) return c;
    BasisCombo r;
    for (int k = 0; k < kL11; ++k) r[k] = simplify(substitute(c[k], zeros));
    return r;
}

void finish_row(CatalogRow& row) {
    auto dot = row.id.find('.');
    row.dimension = std::stoi(row.id.substr(0, dot));
    std::size_t end = dot + 1;
    while (end < row.id.size() && std::isdigit(static_cast<unsigned char>(row.id[end]))) ++end;
    row.base_id = row.id.substr(0, end);
    Substitution zeros;
    for (const auto& p : row.zero_parameters()) zeros[p] = Expr(0);
    for (const auto& c : row.raw_generators) row.generators.push_back(zero_out(c, zeros));
    if (!zeros.empty()) {
        for (Cell* cell : {&row.source, &row.invariant}) {
            if (cell->kind == Cell::Kind::Expr) cell->expr = substitute(cell->expr, zeros);
        }
    }
    for (const auto& c : row.raw_generators) {
        for (const auto& e : c) {
            for (const auto& s : free_symbols(e)) row.parameters.insert(s);
        }
    }
    for (const auto& c : row.constraints) {
        for (const auto& s : free_symbols(c.expr)) row.parameters.insert(s);
    }
}

}  // namespace

std::vector<std::string> CatalogRow::zero_parameters() const {
    std::vector<std::string> out;
    for (const auto& c : constraints) {
        if (c.rel == Relation::Zero && c.expr.is(Kind::Symbol)) out.push_back(c.expr.name());
    }
    return out;
}

const std::set<std::string>& parameter_names() {
    static const std::set<std::string> p = {"alpha", "beta", "gamma", "delta", "sigma", "tau", "C"};
    return p;
}

const std::map<int, int>& expected_row_counts() {
    static const std::map<int, int> m = {{1, 13}, {2, 27}, {3, 47}, {4, 50}, {5, 37}, {6, 25},
                                         {7, 14}, {8, 5},  {9, 2},  {10, 2}, {11, 1}};
    return m;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CatalogError(0, "cannot open catalog " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Catalog Catalog::parse(const std::string& text) {
    Catalog cat;
    cat.hash_ = fnv1a(text);
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    CatalogRow* cur = nullptr;
    std::set<std::string> seen_keys;
    auto close = [&] {
        if (!cur) return;
        for (const char* k : {"chart", "generators", "source", "invariant"}) {
            if (!seen_keys.count(k)) throw CatalogError(cur->line, "row " + cur->id + " lacks '" + k + "'");
        }
        finish_row(*cur);
    };
    while (std::getline(in, raw)) {
        ++line;
        std::string l = trim(raw);
        if (l.empty() || l[0] == '#') continue;
        if (l[0] == '[') {
            close();
            if (l.rfind("[row \"", 0) != 0 || l.size() < 9 || l.substr(l.size() - 2) != "\"]") {
                throw CatalogError(line, "bad section header: " + l);
            }
            std::string id = l.substr(6, l.size() - 8);
            if (id.empty() || !std::isdigit(static_cast<unsigned char>(id[0])) || id.find('.') == std::string::npos) {
                throw CatalogError(line, "bad row id '" + id + "'");
            }
            if (cat.index_.count(id)) throw CatalogError(line, "duplicate row id " + id);
            cat.index_[id] = cat.rows_.size();
            cat.rows_.emplace_back();
            cur = &cat.rows_.back();
            cur->id = id;
            cur->line = line;
            seen_keys.clear();
            continue;
        }
        if (!cur) throw CatalogError(line, "key outside a row section");
        auto eq = l.find('=');
        if (eq == std::string::npos) throw CatalogError(line, "expected key = value");
        std::string key = trim(l.substr(0, eq));
        std::string val = trim(l.substr(eq + 1));
        if (!seen_keys.insert(key).second) throw CatalogError(line, "duplicate key " + key);
        if (key == "chart") {
            if (val != "cartesian" && val != "cylindrical" && val != "spherical") {
                throw CatalogError(line, "unknown chart " + val);
            }
            cur->chart = val;
        } else if (key == "generators") {
            cur->generators_text = unquote(val, line);
            for (const auto& part : split_top(cur->generators_text, ',')) {
                try {
                    cur->raw_generators.push_back(parse_combo(part));
                } catch (const std::exception& e) {
                    throw CatalogError(line, e.what());
                }
            }
        } else if (key == "constraints") {
            std::string body = unquote(val, line);
            for (const auto& part : split_top(body, ',')) {
                if (!part.empty()) cur->constraints.push_back(parse_constraint(part, line));
            }
        } else if (key == "source") {
            cur->source = parse_cell(val, line);
        } else if (key == "invariant") {
            cur->invariant = parse_cell(val, line);
        } else {
            throw CatalogError(line, "unknown key " + key);
        }
    }
    close();
    cat.validate();
    return cat;
}

void Catalog::validate() const {
    for (const auto& row : rows_) {
        if (static_cast<int>(row.generators.size()) != row.dimension) {
            throw CatalogError(row.line, "row " + row.id + ": " + std::to_string(row.generators.size()) +
                                             " generators for a " + std::to_string(row.dimension) +
                                             "-dimensional subalgebra");
        }
        for (const auto& p : row.parameters) {
            if (!parameter_names().count(p)) throw CatalogError(row.line, "row " + row.id + ": unknown parameter " + p);
        }
        const auto& allowed = chart_symbols(row.chart);
        for (const Cell* cell : {&row.source, &row.invariant}) {
            if (cell->kind == Cell::Kind::Ref) {
                if (!find(cell->ref)) throw CatalogError(row.line, "row " + row.id + ": dangling reference " + cell->ref);
                continue;
            }
            if (cell->kind != Cell::Kind::Expr) continue;
            for (const auto& s : free_symbols(cell->expr)) {
                if (!allowed.count(s) && !parameter_names().count(s)) {
                    throw CatalogError(row.line, "row " + row.id + ": symbol " + s + " not in chart " + row.chart);
                }
            }
            for (const auto& a : abstract_atoms(cell->expr)) {
                const char* want = cell == &row.source ? "Psi" : "Omega";
                if (a.name().rfind(want, 0) != 0) {
                    throw CatalogError(row.line, "row " + row.id + ": unexpected function " + a.name());
                }
            }
        }
        (void)resolve(row, true);
        (void)resolve(row, false);
    }
    for (const auto& row : rows_) {
        for (const auto& other : select(row.base_id)) {
            if (other->chart != row.chart) throw CatalogError(row.line, "row " + row.id + ": chart differs between sub-rows");
        }
    }
}

const CatalogRow* Catalog::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &rows_[it->second];
}

std::vector<const CatalogRow*> Catalog::select(const std::string& id) const {
    std::vector<const CatalogRow*> out;
    for (const auto& r : rows_) {
        if (r.id == id || r.base_id == id) out.push_back(&r);
    }
    return out;
}

const Cell& Catalog::resolve(const CatalogRow& row, bool source) const {
    const CatalogRow* cur = &row;
    std::set<std::string> seen{row.id};
    while (true) {
        const Cell& c = source ? cur->source : cur->invariant;
        if (c.kind != Cell::Kind::Ref) return c;
        const CatalogRow* next = find(c.ref);
        if (!next) throw CatalogError(row.line, "row " + row.id + ": dangling reference " + c.ref);
        if (!seen.insert(next->id).second) throw CatalogError(row.line, "row " + row.id + ": reference cycle");
        cur = next;
    }
}

const Cell& Catalog::resolve_source(const CatalogRow& row) const { return resolve(row, true); }
const Cell& Catalog::resolve_invariant(const CatalogRow& row) const { return resolve(row, false); }

std::map<int, int> Catalog::counts_by_dimension() const {
    std::map<int, std::set<std::string>> ids;
    for (const auto& r : rows_) ids[r.dimension].insert(r.base_id);
    std::map<int, int> out;
    for (const auto& [d, s] : ids) out[d] = static_cast<int>(s.size());
    return out;
}

std::string Catalog::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

std::string print_row(const CatalogRow& row) {
    std::string out = "[row \"" + row.id + "\"]\n";
    out += "chart = " + row.chart + "\n";
    std::string gens;
    for (const auto& c : row.raw_generators) {
        if (!gens.empty()) gens += ",";
        gens += combo_str(c);
    }
    out += "generators = \"" + gens + "\"\n";
    std::string cons;
    for (const auto& c : row.constraints) {
        if (!cons.empty()) cons += ", ";
        cons += c.expr.str() + (c.rel == Relation::NonZero ? " != 0" : c.rel == Relation::Zero ? " = 0" : " = 1");
    }
    out += "constraints = \"" + cons + "\"\n";
    auto cell = [](const Cell& c, const Expr& printed) -> std::string {
        switch (c.kind) {
            case Cell::Kind::None:
                return "none";
            case Cell::Kind::Ref:
                return "ref:" + c.ref;
            case Cell::Kind::Expr:
                return "\"" + printed.str() + "\"";
        }
        return {};
    };
    Expr src = row.source.kind == Cell::Kind::Expr ? parse(row.source.text) : Expr(0);
    Expr inv = row.invariant.kind == Cell::Kind::Expr ? parse(row.invariant.text) : Expr(0);
    out += "source = " + cell(row.source, src) + "\n";
    out += "invariant = " + cell(row.invariant, inv) + "\n";
    return out;
}

}  // namespace boltzclass
