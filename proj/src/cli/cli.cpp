#include "boltzclass/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "boltzclass/collision/collision.hpp"
#include "boltzclass/expr/simplify.hpp"

namespace boltzclass {

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IdKey {
    int major = 0;
    int minor = 0;
    std::string suffix;
    auto operator<=>(const IdKey&) const = default;
};

IdKey id_key(const std::string& id) {
    IdKey k;
    std::size_t dot = id.find('.');
    k.major = std::stoi(id.substr(0, dot));
    std::size_t end = dot + 1;
    while (end < id.size() && std::isdigit(static_cast<unsigned char>(id[end]))) ++end;
    k.minor = std::stoi(id.substr(dot + 1, end - dot - 1));
    k.suffix = id.substr(end);
    return k;
}

std::vector<const CatalogRow*> select_rows(const Catalog& cat, const RunConfig& cfg) {
    std::vector<const CatalogRow*> rows;
    if (cfg.ids.empty()) {
        for (const auto& r : cat.rows()) rows.push_back(&r);
    } else {
        for (const auto& id : cfg.ids) {
            auto sel = cat.select(id);
            if (sel.empty()) throw UsageError("no catalog row " + id);
            for (const auto* r : sel) {
                if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
            }
        }
    }
    if (cfg.dim > 0) {
        std::erase_if(rows, [&](const CatalogRow* r) { return r->dimension != cfg.dim; });
        if (rows.empty()) throw UsageError("no rows of dimension " + std::to_string(cfg.dim));
    }
    std::sort(rows.begin(), rows.end(), [](const CatalogRow* a, const CatalogRow* b) { return id_key(a->id) < id_key(b->id); });
    return rows;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string witness_text(const Env& env) {
    std::string out;
    for (const auto& [k, v] : env) out += (out.empty() ? "" : ", ") + k + "=" + fmt(v);
    return out;
}

json check_json(const Check& c) {
    json j;
    j["name"] = c.name;
    j["status"] = c.status;
    if (c.witness) {
        json w = json::object();
        for (const auto& [k, v] : *c.witness) w[k] = v;
        j["witness"] = w;
        j["residual"] = c.residual;
    }
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

json report_json(const Report& r) {
    json a = json::array();
    for (const auto& c : r.checks) a.push_back(check_json(c));
    return a;
}

void print_checks(std::ostream& out, const Report& r) {
    for (const auto& c : r.checks) {
        out << "  " << std::left << std::setw(5) << (c.ok() ? "ok" : "FAIL") << c.name;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << "\n";
        if (c.witness) out << "        witness: " << witness_text(*c.witness) << "\n";
    }
}

int print_report(std::ostream& out, const std::string& title, const Report& r, const std::string& format) {
    if (format == "json") {
        json j;
        j["version"] = kVersion;
        j["test"] = title;
        j["checks"] = report_json(r);
        j["overall"] = r.ok() ? "PASS" : "FAIL";
        out << j.dump(2) << "\n";
    } else {
        out << title << ": " << (r.ok() ? "PASS" : "FAIL") << "\n";
        print_checks(out, r);
    }
    return r.ok() ? 0 : 1;
}

const char* kWhatNames[] = {"source", "invariant"};

}  // namespace

std::vector<Verdict> run_verification(const Catalog& cat, const RunConfig& cfg) {
    auto rows = select_rows(cat, cfg);
    std::vector<std::string> whats;
    if (cfg.what == "source" || cfg.what == "both") whats.emplace_back(kWhatNames[0]);
    if (cfg.what == "invariants" || cfg.what == "invariant" || cfg.what == "both") whats.emplace_back(kWhatNames[1]);
    if (whats.empty()) throw UsageError("--what must be source, invariants or both");
    std::vector<std::pair<const CatalogRow*, std::string>> tasks;
    for (const auto* r : rows) {
        for (const auto& w : whats) tasks.emplace_back(r, w);
    }
    std::vector<Verdict> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& [row, what] = tasks[i];
            try {
                out[i] = verify_row(cat, *row, what, cfg.seed);
            } catch (const std::exception& e) {
                Verdict v;
                v.id = row->id;
                v.chart = row->chart;
                v.what = what;
                Check c;
                c.name = "evaluation";
                c.status = "error";
                c.detail = e.what();
                v.checks.push_back(c);
                settle(v);
                out[i] = v;
            }
        }
    };
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::string verification_json(const Catalog& cat, const std::vector<Verdict>& verdicts, bool timing) {
    json j;
    j["version"] = kVersion;
    j["catalog_hash"] = cat.hash_hex();
    int pass = 0, numeric = 0, fail = 0, skip = 0;
    json rows = json::array();
    for (const auto& v : verdicts) {
        switch (v.overall) {
            case Overall::Pass:
                ++pass;
                break;
            case Overall::PassNumeric:
                ++numeric;
                break;
            case Overall::Fail:
                ++fail;
                break;
            case Overall::Skip:
                ++skip;
                break;
        }
        json r;
        r["id"] = v.id;
        r["chart"] = v.chart;
        r["what"] = v.what;
        json checks = json::array();
        for (const auto& c : v.checks) checks.push_back(check_json(c));
        r["checks"] = checks;
        r["overall"] = std::string(overall_name(v.overall));
        r["wall_ms"] = timing ? v.wall_ms : 0.0;
        if (!v.note.empty()) r["note"] = v.note;
        rows.push_back(r);
    }
    j["summary"] = {{"pass", pass}, {"pass_numeric", numeric}, {"fail", fail}, {"skip", skip}};
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

namespace {

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    Catalog cat = Catalog::load(cfg.catalog);
    auto verdicts = run_verification(cat, cfg);
    if (cfg.format == "json") {
        out << verification_json(cat, verdicts, cfg.timing);
    } else {
        int counts[4] = {0, 0, 0, 0};
        std::vector<const Verdict*> errata;
        for (const auto& v : verdicts) {
            ++counts[static_cast<int>(v.overall)];
            std::string label(overall_name(v.overall));
            std::string extra;
            if (v.overall == Overall::Skip) {
                label = "SKIP(None)";
                if (!v.checks.empty()) extra = v.checks[0].detail;
            }
            if (!v.note.empty()) extra += (extra.empty() ? "" : "; ") + v.note;
            std::ostringstream line;
            line << std::left << std::setw(7) << v.id << std::setw(12) << v.chart << std::setw(10) << v.what
                 << std::setw(13) << label << extra;
            if (cfg.timing) line << "  " << fmt(v.wall_ms) << " ms";
            std::string l = line.str();
            l.erase(l.find_last_not_of(' ') + 1);
            out << l << "\n";
            if (v.overall == Overall::Fail) errata.push_back(&v);
        }
        out << "\nsummary: " << counts[0] << " PASS, " << counts[1] << " PASS-numeric, " << counts[2] << " FAIL, "
            << counts[3] << " SKIP\n";
        if (!errata.empty()) {
            out << "\nerrata:\n";
            for (const auto* v : errata) {
                out << v->id << " " << v->what << "\n";
                Report r;
                for (const auto& c : v->checks) {
                    if (!c.ok()) r.checks.push_back(c);
                }
                print_checks(out, r);
            }
        }
    }
    for (const auto& v : verdicts) {
        if (v.overall == Overall::Fail) return 1;
    }
    return 0;
}

int cmd_brackets(const RunConfig& cfg, std::ostream& out) {
    StructureConstants t = commutator_table();
    if (cfg.format == "json") {
        json table = json::array();
        for (int i = 0; i < kL11; ++i) {
            json row = json::array();
            for (int j = 0; j < kL11; ++j) {
                json vec = json::array();
                for (int k = 0; k < kL11; ++k) vec.push_back(t[i][j][k].pq_str());
                row.push_back(vec);
            }
            table.push_back(row);
        }
        out << table.dump() << "\n";
        return 0;
    }
    for (int i = 0; i < kL11; ++i) {
        for (int j = i + 1; j < kL11; ++j) {
            BasisCombo c;
            for (int k = 0; k < kL11; ++k) c[k] = Expr(t[i][j][k]);
            bool zero = std::all_of(c.begin(), c.end(), [](const Expr& e) { return e.is_zero(); });
            out << "[X" << i + 1 << ", X" << j + 1 << "] = ";
            if (zero) {
                out << "0\n";
                continue;
            }
            std::string s;
            for (int k = 0; k < kL11; ++k) {
                if (c[k].is_zero()) continue;
                Rational q = t[i][j][k];
                std::string term = (q == Rational(1) ? "" : q == Rational(-1) ? "-" : q.str() + "*") + "X" + std::to_string(k + 1);
                if (!s.empty() && term[0] != '-') s += " + ";
                else if (!s.empty()) s += " ";
                s += term;
            }
            out << s << "\n";
        }
    }
    return 0;
}

std::string pretty_field(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool start = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
        if (start && s.compare(i, 2, "d_") == 0) {
            out += "∂_";
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

int cmd_transform(const std::string& basis, const std::string& chart_name, const std::string& format, std::ostream& out) {
    const Chart& chart = Chart::by_name(chart_name);
    std::vector<std::pair<std::string, VectorField>> fields;
    if (basis == "all") {
        auto b = l11_basis(chart);
        for (int i = 0; i < kL11; ++i) fields.emplace_back("X" + std::to_string(i + 1), b[i]);
        fields.emplace_back("transport", transport_operator(chart));
    } else if (basis == "transport") {
        fields.emplace_back("transport", transport_operator(chart));
    } else {
        int k = 0;
        try {
            k = std::stoi(basis);
        } catch (const std::exception&) {
            throw UsageError("--basis must be 1..11, transport or all");
        }
        if (k < 1 || k > kL11) throw UsageError("--basis must be 1..11, transport or all");
        fields.emplace_back("X" + std::to_string(k), pushforward(l11_basis()[k - 1], chart));
    }
    if (format == "json") {
        json j = json::array();
        for (const auto& [name, f] : fields) {
            json e;
            e["name"] = name;
            e["chart"] = chart.name;
            json coeffs = json::object();
            for (int i = 0; i < 8; ++i) {
                if (!f.coeff[i].is_zero()) coeffs[f.coords[i]] = f.coeff[i].str();
            }
            e["coefficients"] = coeffs;
            e["field"] = f.str();
            j.push_back(e);
        }
        out << j.dump(2) << "\n";
    } else if (fields.size() == 1) {
        out << pretty_field(fields[0].second.str()) << "\n";
    } else {
        for (const auto& [name, f] : fields) out << name << " = " << pretty_field(f.str()) << "\n";
    }
    return 0;
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
    Catalog cat = Catalog::load(cfg.catalog);
    auto rows = select_rows(cat, cfg);
    json all = json::array();
    bool bad = false;
    for (const auto* row : rows) {
        const Cell& cell = cat.resolve_invariant(*row);
        if (cell.kind != Cell::Kind::Expr) {
            if (cfg.format != "json") out << row->id << ": no invariant representation\n";
            continue;
        }
        Substitution zeros;
        for (const auto& z : row->zero_parameters()) zeros[z] = Expr(0);
        InvariantRep rep = InvariantRep::from_expr(substitute(cell.expr, zeros));
        const Chart& chart = Chart::by_name(row->chart);
        ReducedEquation red = reduced_differential_part(rep, chart);
        bad = bad || !red.leftover.empty();
        if (cfg.format == "json") {
            json j;
            j["id"] = row->id;
            j["chart"] = row->chart;
            j["representation"] = cell.expr.str();
            json defs = json::object();
            for (const auto& [n, d] : red.definitions) defs[n] = d.str();
            j["invariants"] = defs;
            j["prefactor"] = red.prefactor.str();
            j["body"] = red.grouped();
            j["leftover"] = red.leftover;
            all.push_back(j);
            continue;
        }
        out << "row " << row->id << " (" << row->chart << ")\n";
        out << "  f = " << cell.expr.str() << "\n";
        for (const auto& [n, d] : red.definitions) out << "  " << n << " = " << d.str() << "\n";
        out << "  streaming part = ";
        if (red.prefactor.is_one()) {
            out << red.grouped() << "\n";
        } else {
            out << red.prefactor.str() << " * (" << red.grouped() << ")\n";
        }
        if (!red.leftover.empty()) {
            out << "  not expressible in invariants; leftover:";
            for (const auto& z : red.leftover) out << " " << z;
            out << "\n";
        }
    }
    if (cfg.format == "json") out << all.dump(2) << "\n";
    return bad ? 1 : 0;
}

int cmd_collision(const std::string& test, const RunConfig& cfg, std::ostream& out) {
    McConfig mc;
    mc.n = cfg.n;
    mc.seed = cfg.seed;
    mc.jobs = cfg.jobs;
    Report r;
    if (test == "maxwellian") {
        r = verify_maxwellian(mc);
    } else if (test == "moments") {
        r = verify_moments(mc);
    } else if (test == "conservation") {
        r = verify_conservation(10000, cfg.seed);
    } else if (test == "scaling") {
        r = verify_x11_scaling(scaling_test_distribution(), 0.5, mc);
    } else if (test == "reduced-1.8") {
        r = verify_reduced_collision("1.8", mc);
    } else if (test == "reduced-1.2") {
        r = verify_reduced_collision("1.2", mc);
    } else {
        throw UsageError("unknown collision test " + test);
    }
    return print_report(out, test, r, cfg.format);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--catalog", cfg.catalog, "catalog file")->check(CLI::ExistingFile);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1, 256));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetry classification checker for the Boltzmann equation with a source term", "boltzclass"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    RunConfig cfg;
    std::string basis = "all";
    std::string chart = "cylindrical";
    std::string test;

    for (const char* name : {"verify", "verify-all"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "verify" ? "verify selected rows" : "verify every row");
        add_common(sub, cfg);
        sub->add_option("--id", cfg.ids, "row id M.N (repeatable)");
        sub->add_option("--dim", cfg.dim, "subalgebra dimension")->check(CLI::Range(1, 11));
        sub->add_option("--what", cfg.what, "what to verify")->check(CLI::IsMember({"source", "invariants", "both"}));
        sub->add_option("--n", cfg.n, "unused; accepted for uniformity");
        sub->add_flag("--timing", cfg.timing, "report wall-clock times");
    }
    auto* br = app.add_subcommand("brackets", "commutator table of the eleven generators");
    add_common(br, cfg);
    auto* tr = app.add_subcommand("transform", "generators in another chart");
    add_common(tr, cfg);
    tr->add_option("--basis", basis, "1..11, transport or all");
    tr->add_option("--chart", chart, "target chart")->check(CLI::IsMember({"cartesian", "cylindrical", "spherical"}));
    auto* rd = app.add_subcommand("reduce", "streaming part on an invariant solution");
    add_common(rd, cfg);
    rd->add_option("--id", cfg.ids, "row id")->required();
    auto* co = app.add_subcommand("collision", "Monte-Carlo collision checks");
    add_common(co, cfg);
    co->add_option("--test", test, "test name")
        ->required()
        ->check(CLI::IsMember({"maxwellian", "moments", "conservation", "scaling", "reduced-1.8", "reduced-1.2"}));
    co->add_option("--n", cfg.n, "samples")->check(CLI::Range(1000L, 100000000L));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (app.got_subcommand("verify")) {
            if (cfg.ids.empty() && cfg.dim == 0) throw UsageError("verify needs --id or --dim (or use verify-all)");
            return cmd_verify(cfg, out);
        }
        if (app.got_subcommand("verify-all")) return cmd_verify(cfg, out);
        if (app.got_subcommand("brackets")) return cmd_brackets(cfg, out);
        if (app.got_subcommand("transform")) return cmd_transform(basis, chart, cfg.format, out);
        if (app.got_subcommand("reduce")) return cmd_reduce(cfg, out);
        if (app.got_subcommand("collision")) return cmd_collision(test, cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CatalogError& e) {
        err << "catalog error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace boltzclass
