// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "boltzclass/classify/classify.hpp"
#include "boltzclass/cli/cli.hpp"
#include "boltzclass/collision/collision.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/simplify.hpp"

using namespace boltzclass;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

int failures = 0;

void report(int n, bool ok, const std::string& title, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << title << " (" << detail << ")"
              << std::endl;
}

std::string failed_names(const Report& r) {
    std::string out;
    for (const auto* c : r.failures()) out += (out.empty() ? "" : "; ") + c->name + (c->detail.empty() ? "" : ": " + c->detail);
    return out;
}

Expr q_form(const Chart& chart, const std::string& text) {
    std::string args;
    for (const auto& c : chart.coords) args += (args.empty() ? "" : ", ") + c;
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'Q') {
            out += text[i];
            continue;
        }
        std::size_t j = i + 1;
        std::string slot;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) slot += text[j++];
        out += (slot.empty() ? "Psi8(" : "Psi8_" + slot + "(") + args + ")";
        i = j - 1;
    }
    return parse(out);
}

void closure() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    int brackets = 0, triples = 0;
    try {
        StructureConstants t = commutator_table();
        (void)t;
        brackets = 55;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    for (int i = 0; i < kL11; ++i) {
        for (int j = i + 1; j < kL11; ++j) {
            for (int k = j + 1; k < kL11; ++k) {
                VectorField r = jacobi_residual(i, j, k);
                bool zero = true;
                for (const auto& c : r.coeff) zero = zero && c.is_zero();
                ok = ok && zero;
                triples += zero ? 1 : 0;
            }
        }
    }
    double s = seconds_since(t0);
    ok = ok && triples == 165 && s < 5;
    report(1, ok, "L11 closure and Jacobi identity",
           std::to_string(brackets) + " brackets rational, " + std::to_string(triples) + "/165 Jacobi symbolic-zero, " +
               fmt(s) + " s" + (detail.empty() ? "" : ", " + detail));
}

void charts() {
    Report r = verify_chart_generators();
    int listed = 0, good = 0;
    for (const auto& c : r.checks) {
        if (c.status == "computed" || c.name.rfind("transport", 0) == 0) continue;
        ++listed;
        good += c.ok() ? 1 : 0;
    }
    double cyl = chart_round_trip_error(Chart::cylindrical(), 100, 42);
    double sph = chart_round_trip_error(Chart::spherical(), 100, 42);
    bool ok = listed == 16 && good == 16 && cyl < 1e-10 && sph < 1e-10;
    std::string detail = std::to_string(good) + "/" + std::to_string(listed) + " listed generators reproduced, round trip " +
                         fmt(cyl) + " / " + fmt(sph);
    if (!r.ok()) detail += "; mismatch: " + failed_names(r);
    report(2, ok, "chart fidelity", detail);
}

void frames() {
    Report r = verify_frame_identities();
    int sym = 0;
    for (const auto& c : r.checks) sym += c.status == "symbolic-zero" ? 1 : 0;
    report(3, sym == static_cast<int>(r.checks.size()) && sym == 18, "frame identities",
           std::to_string(sym) + "/" + std::to_string(r.checks.size()) + " symbolic-zero");
}

void worked_examples() {
    int total = 0, good = 0;
    auto expect = [&](const Subalgebra& s, int i, const char* form) {
        ++total;
        Expr r = determining_residual(s, i, generic_source(*s.chart));
        Expr want = simplify(q_form(*s.chart, form));
        if (r.str() == want.str()) ++good;
    };
    expect(Subalgebra::of("cartesian", {"11"}), 0, "2*Q - f*Q8 + t*Q7 + x*Q1 + y*Q2 + z*Q3");
    expect(Subalgebra::of("cartesian", {"beta4+7"}), 0, "beta*Q4 + beta*t*Q1 - w*Q5 + v*Q6 - z*Q2 + y*Q3");
    expect(Subalgebra::of("cylindrical", {"beta4+7"}), 0, "beta*Q4 + beta*t*Q1 + Q3");
    Subalgebra rot = Subalgebra::of("cartesian", {"7", "8", "9"});
    expect(rot, 0, "-w*Q5 + v*Q6 - z*Q2 + y*Q3");
    expect(rot, 1, "w*Q4 - u*Q6 + z*Q1 - x*Q3");
    expect(rot, 2, "-v*Q4 + u*Q5 - y*Q1 + x*Q2");
    Subalgebra rs = Subalgebra::of("spherical", {"7", "8", "9"});
    expect(rs, 0, "-sin(phi)*Q2 - cos(phi)*cot(theta)*Q3 - cos(phi)/sin(theta)*(W*Q5 - V*Q6)");
    expect(rs, 1, "cos(phi)*Q2 - sin(phi)*cot(theta)*Q3 - sin(phi)/sin(theta)*(W*Q5 - V*Q6)");
    expect(rs, 2, "Q3");
    report(4, good == total, "worked-example determining equations",
           std::to_string(good) + "/" + std::to_string(total) + " equations identical after canonicalization");
}

void sources(const Catalog& cat) {
    RunConfig cfg;
    cfg.what = "source";
    cfg.jobs = 4;
    auto t0 = Clock::now();
    auto v = run_verification(cat, cfg);
    double s = seconds_since(t0);
    int pass = 0, fail = 0, witnessed = 0;
    bool universal = true;
    std::string errata;
    for (const auto& x : v) {
        if (x.overall == Overall::Fail) {
            ++fail;
            bool w = true;
            for (const auto& c : x.checks) {
                if (!c.ok()) w = w && c.witness.has_value();
            }
            witnessed += w ? 1 : 0;
            errata += " " + x.id;
        } else {
            ++pass;
        }
        if ((x.id == "8.5" || x.id == "11.1") && x.overall != Overall::Pass) universal = false;
    }
    bool ok = s < 180 && witnessed == fail && universal;
    report(5, ok, "source-function audit",
           std::to_string(pass) + " pass, " + std::to_string(fail) + " fail" +
               (fail ? " (errata:" + errata + ", all witnessed)" : std::string()) +
               ", C*f^2 rows 8.5/11.1 " + (universal ? "pass" : "FAIL") + ", " + fmt(s) + " s at --jobs 4");
}

void invariants(const Catalog& cat) {
    RunConfig cfg;
    cfg.what = "invariants";
    cfg.jobs = 4;
    auto t0 = Clock::now();
    auto v = run_verification(cat, cfg);
    double s = seconds_since(t0);
    int reps = 0, reps_ok = 0, nones = 0, nones_ok = 0;
    std::string bad;
    for (const auto& x : v) {
        const CatalogRow* row = cat.find(x.id);
        if (row->invariant.kind == Cell::Kind::Ref) continue;
        if (row->invariant.kind == Cell::Kind::None) {
            ++nones;
            bool ok = x.overall == Overall::Skip;
            nones_ok += ok ? 1 : 0;
            if (!ok) bad += " " + x.id;
            continue;
        }
        ++reps;
        bool ok = x.overall == Overall::Pass || x.overall == Overall::PassNumeric;
        reps_ok += ok ? 1 : 0;
        if (!ok) {
            bad += " " + x.id + " [";
            Report rep{x.checks};
            for (const auto* c : rep.failures()) bad += c->name + ": " + c->detail;
            bad += "]";
        }
    }
    bool ok = reps_ok == reps && nones_ok == nones && s < 180;
    report(6, ok, "invariant-representation audit",
           std::to_string(reps_ok) + "/" + std::to_string(reps) + " representations, " + std::to_string(nones_ok) + "/" +
               std::to_string(nones) + " None rows certified, " + fmt(s) + " s" + (bad.empty() ? "" : "; failing:" + bad));
}

void reduced(const Catalog& cat) {
    auto r18 = reduced_differential_part(InvariantRep::from_expr(cat.find("1.8")->invariant.expr), Chart::cartesian());
    Expr want18 = parse(
        "t^(-2)*(-Omega6(p1, p2, p3, u, v, w) + (u - p1)*Omega6_1(p1, p2, p3, u, v, w)"
        " + (v - p2)*Omega6_2(p1, p2, p3, u, v, w) + (w - p3)*Omega6_3(p1, p2, p3, u, v, w))");
    bool z18 = r18.leftover.empty() && simplify(r18.full() - want18).is_zero();
    auto r12 = reduced_differential_part(InvariantRep::from_expr(cat.find("1.2")->invariant.expr), Chart::cylindrical());
    Expr want12 = parse(
        "Omega6_1(t, r, p1, p2, V, W) + (beta*W/r - p2/t)*Omega6_3(t, r, p1, p2, V, W) + V*Omega6_2(t, r, p1, p2, V, W)"
        " - p2/t*Omega6_4(t, r, p1, p2, V, W) + W^2/r*Omega6_5(t, r, p1, p2, V, W) - V*W/r*Omega6_6(t, r, p1, p2, V, W)");
    bool z12 = r12.leftover.empty() && simplify(r12.full() - want12).is_zero();
    McConfig mc;
    mc.n = 100000;
    mc.jobs = 4;
    auto t0 = Clock::now();
    Report c18 = verify_reduced_collision("1.8", mc);
    double s18 = seconds_since(t0);
    t0 = Clock::now();
    Report c12 = verify_reduced_collision("1.2", mc);
    double s12 = seconds_since(t0);
    std::string ratio;
    for (const auto& c : c18.checks) {
        if (c.name == "t=2: ratio within 3 sigma") ratio = c.detail;
    }
    bool ok = z18 && z12 && c18.ok() && c12.ok() && s18 < 30 && s12 < 30;
    report(7, ok, "reduced equations",
           std::string("1.8 residual ") + (z18 ? "0" : "nonzero") + ", 1.2 residual " + (z12 ? "0" : "nonzero") +
               ", collision 1.8 " + ratio + " (" + fmt(s18) + " s), 1.2 " + (c12.ok() ? "ok" : failed_names(c12)) +
               " (" + fmt(s12) + " s)");
}

void physics() {
    McConfig mc;
    mc.n = 100000;
    mc.jobs = 4;
    Report m = verify_maxwellian(mc);
    Report c = verify_conservation(10000, 42);
    Report x = verify_x11_scaling(scaling_test_distribution(), 0.5, mc);
    std::string h;
    for (const auto& ch : x.checks) {
        if (ch.name.find("within 3 sigma") != std::string::npos) h = ch.detail;
    }
    bool ok = m.ok() && c.ok() && x.ok();
    std::string detail = std::to_string(m.checks.size()) + " Maxwellian cases annihilated, conservation " +
                         (c.ok() ? "1e-12" : "FAIL") + ", X11 scaling " + h;
    if (!ok) detail += "; " + failed_names(m) + failed_names(c) + failed_names(x);
    report(8, ok, "collision physics", detail);
}

void determinism(const Catalog& cat) {
    RunConfig cfg;
    std::string first;
    bool same = true;
    for (int jobs : {1, 2, 4, 7}) {
        cfg.jobs = jobs;
        std::string s = verification_json(cat, run_verification(cat, cfg), false);
        if (first.empty()) first = s;
        same = same && s == first;
    }
    std::string c1, c4;
    {
        std::ostringstream o, e;
        run_cli({"collision", "--test", "scaling", "--n", "20000", "--format", "json", "--jobs", "1"}, o, e);
        c1 = o.str();
    }
    {
        std::ostringstream o, e;
        run_cli({"collision", "--test", "scaling", "--n", "20000", "--format", "json", "--jobs", "4"}, o, e);
        c4 = o.str();
    }
    same = same && c1 == c4 && !c1.empty();
    report(9, same, "deterministic JSON", "verify-all at --jobs 1/2/4/7 and collision at --jobs 1/4 byte-identical: " +
                                              std::string(same ? "yes" : "no") + ", " + std::to_string(first.size()) +
                                              " bytes");
}

}  // namespace

int main() {
    Catalog cat = Catalog::load(BC_CATALOG_PATH);
    closure();
    charts();
    frames();
    worked_examples();
    sources(cat);
    invariants(cat);
    reduced(cat);
    physics();
    determinism(cat);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
