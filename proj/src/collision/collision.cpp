#include "boltzclass/collision/collision.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/eval.hpp"
#include "boltzclass/expr/parse.hpp"
#include "boltzclass/expr/zero_test.hpp"
#include "boltzclass/geometry/chart.hpp"

namespace boltzclass {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kStreams = 64;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double normal(std::mt19937_64& rng) {
    double u1 = 1.0 - uniform(rng, 0.0, 1.0);
    double u2 = uniform(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * kPi * u2);
}

Vec3 normal3(std::mt19937_64& rng) { return {normal(rng), normal(rng), normal(rng)}; }

Vec3 unit_vector(std::mt19937_64& rng) {
    double c = uniform(rng, -1.0, 1.0);
    double e = uniform(rng, 0.0, 2 * kPi);
    double s = std::sqrt(std::max(0.0, 1 - c * c));
    return {s * std::cos(e), s * std::sin(e), c};
}

double gaussian_density(const Vec3& z, double sigma) {
    return std::exp(-0.5 * dot(z, z)) / std::pow(2 * kPi * sigma * sigma, 1.5);
}

struct Moments {
    std::vector<double> sum;
    std::vector<double> sq;
};

/// Runs `sample` cfg.n times over fixed substreams and returns per-component
/// mean and standard error.
std::vector<std::pair<double, double>> run_mc(const McConfig& cfg, int k,
                                              const std::function<void(std::mt19937_64&, double*)>& sample) {
    if (cfg.n < 1000) throw std::invalid_argument("Monte-Carlo sample count must be at least 1000");
    std::vector<Moments> part(kStreams, Moments{std::vector<double>(k), std::vector<double>(k)});
    auto work = [&](int tid, int jobs) {
        std::vector<double> buf(k);
        for (int s = tid; s < kStreams; s += jobs) {
            std::mt19937_64 rng(splitmix(cfg.seed * kStreams + static_cast<std::uint64_t>(s)));
            long count = cfg.n / kStreams + (s < cfg.n % kStreams ? 1 : 0);
            for (long i = 0; i < count; ++i) {
                sample(rng, buf.data());
                for (int j = 0; j < k; ++j) {
                    if (!std::isfinite(buf[j])) throw DomainError("non-finite integrand value");
                    part[s].sum[j] += buf[j];
                    part[s].sq[j] += buf[j] * buf[j];
                }
            }
        }
    };
    int jobs = std::max(1, std::min(cfg.jobs, kStreams));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (int t = 0; t < jobs; ++t) {
            pool.emplace_back([&, t] {
                try {
                    work(t, jobs);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<std::pair<double, double>> out(k);
    const double n = static_cast<double>(cfg.n);
    for (int j = 0; j < k; ++j) {
        double s = 0, q = 0;
        for (const auto& p : part) {
            s += p.sum[j];
            q += p.sq[j];
        }
        double mean = s / n;
        double var = std::max(0.0, q / n - mean * mean);
        out[j] = {mean, std::sqrt(var / (n - 1))};
    }
    return out;
}

struct CollisionSample {
    double value;
    double loss;
};

CollisionSample collision_sample(const VelocityFn& f, const Vec3& v, const Vec3& z, const Vec3& n,
                                 const CollisionKernel& kernel, double sigma) {
    Vec3 w = {v[0] + sigma * z[0], v[1] + sigma * z[1], v[2] + sigma * z[2]};
    double weight = 4 * kPi / gaussian_density(z, sigma);
    Vec3 rel = sub(v, w);
    double g = norm(rel);
    double b = kernel.B(g, g > 0 ? dot(rel, n) / g : 1.0);
    auto [vs, ws] = collide(v, w, n);
    double loss = b * f(v) * f(w) * weight;
    return {b * f(vs) * f(ws) * weight - loss, std::fabs(loss)};
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

VelocityFn from_expr(const Expr& e, const Vec3& x, double t, double a = 0) {
    auto prog = std::make_shared<CompiledExpr>(e, std::vector<std::string>{"x", "y", "z", "t", "a", "u", "v", "w"});
    return [prog, x, t, a](const Vec3& v) {
        const double vals[] = {x[0], x[1], x[2], t, a, v[0], v[1], v[2]};
        return (*prog)(vals);
    };
}

}  // namespace

std::pair<Vec3, Vec3> collide(const Vec3& v, const Vec3& w, const Vec3& n) {
    if (std::fabs(norm(n) - 1.0) > 1e-12) throw std::invalid_argument("collide: n is not a unit vector");
    double g = norm(sub(v, w));
    Vec3 s = add(v, w);
    Vec3 vs{}, ws{};
    for (int i = 0; i < 3; ++i) {
        vs[i] = 0.5 * (s[i] + g * n[i]);
        ws[i] = 0.5 * (s[i] - g * n[i]);
    }
    return {vs, ws};
}

CollisionKernel CollisionKernel::pseudo_maxwell() {
    return {[](double, double) { return 1.0 / (4 * kPi); }, "pseudo-Maxwell constant"};
}

CollisionKernel CollisionKernel::hard_sphere() {
    return {[](double g, double c) { return g * std::fabs(c) / (4 * kPi); }, "hard sphere"};
}

CollisionKernel CollisionKernel::forward_peaked() {
    return {[](double, double c) { return (1 + c * c) / (8 * kPi); }, "forward peaked"};
}

McEstimate collision_integral(const VelocityFn& f, const Vec3& v, const CollisionKernel& kernel, const McConfig& cfg) {
    auto r = run_mc(cfg, 2, [&](std::mt19937_64& rng, double* out) {
        Vec3 z = normal3(rng);
        Vec3 n = unit_vector(rng);
        auto s = collision_sample(f, v, z, n, kernel, cfg.proposal_sigma);
        out[0] = s.value;
        out[1] = s.loss;
    });
    return {r[0].first, r[0].second, r[1].first};
}

McEstimate collision_integral_mc(const DistributionFn& f, const Vec3& x, const Vec3& v, double t,
                                 const CollisionKernel& kernel, const McConfig& cfg) {
    return collision_integral([&](const Vec3& w) { return f(x, w, t); }, v, kernel, cfg);
}

PairedEstimate paired_collision_integral(const VelocityFn& fa, const Vec3& va, const VelocityFn& fb, const Vec3& vb,
                                         double factor, const CollisionKernel& kernel, const McConfig& cfg) {
    auto r = run_mc(cfg, 5, [&](std::mt19937_64& rng, double* out) {
        Vec3 z = normal3(rng);
        Vec3 n = unit_vector(rng);
        auto a = collision_sample(fa, va, z, n, kernel, cfg.proposal_sigma);
        auto b = collision_sample(fb, vb, z, n, kernel, cfg.proposal_sigma);
        out[0] = a.value;
        out[1] = a.loss;
        out[2] = b.value;
        out[3] = b.loss;
        out[4] = a.value - factor * b.value;
    });
    PairedEstimate p;
    p.a = {r[0].first, r[0].second, r[1].first};
    p.b = {r[2].first, r[2].second, r[3].first};
    p.diff = r[4].first;
    p.diff_stderr = r[4].second;
    return p;
}

VelocityFn maxwellian(double rho, const Vec3& u, double temperature) {
    double c = rho / std::pow(2 * kPi * temperature, 1.5);
    return [=](const Vec3& v) {
        Vec3 d = sub(v, u);
        return c * std::exp(-dot(d, d) / (2 * temperature));
    };
}

Report verify_maxwellian(const McConfig& cfg) {
    Report rep;
    struct Case {
        double rho;
        Vec3 u;
        double temp;
    };
    const Case cases[] = {{1.0, {0, 0, 0}, 1.0}, {2.0, {0.5, -0.3, 0.2}, 0.7}, {0.5, {-1.0, 0.0, 1.0}, 1.5}};
    const CollisionKernel kernels[] = {CollisionKernel::pseudo_maxwell(), CollisionKernel::hard_sphere(),
                                       CollisionKernel::forward_peaked()};
    for (const auto& k : kernels) {
        for (const auto& c : cases) {
            Vec3 v = add(c.u, Vec3{0.3, -0.2, 0.1});
            McEstimate e = collision_integral(maxwellian(c.rho, c.u, c.temp), v, k, cfg);
            double rel = e.scale > 0 ? e.stderr_ / e.scale : 1.0;
            bool ok = std::fabs(e.estimate) <= 3 * e.stderr_ + 1e-12 * e.scale && rel < 0.01;
            Check ch = make_check("maxwellian rho=" + fmt(c.rho) + " T=" + fmt(c.temp) + " (" + k.label + ")", ok,
                                  "estimate " + fmt(e.estimate) + ", stderr " + fmt(e.stderr_) + ", scale " +
                                      fmt(e.scale));
            ch.residual = e.estimate;
            rep.checks.push_back(ch);
        }
    }
    return rep;
}

Report verify_conservation(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst_p = 0, worst_e = 0;
    for (int i = 0; i < count; ++i) {
        Vec3 v = normal3(rng);
        Vec3 w = normal3(rng);
        for (auto& c : v) c *= 3;
        Vec3 n = unit_vector(rng);
        auto [vs, ws] = collide(v, w, n);
        double scale = 1 + dot(v, v) + dot(w, w);
        Vec3 dp = sub(add(vs, ws), add(v, w));
        worst_p = std::max(worst_p, norm(dp) / scale);
        worst_e = std::max(worst_e, std::fabs(dot(vs, vs) + dot(ws, ws) - dot(v, v) - dot(w, w)) / scale);
    }
    Report rep;
    Check p = make_check("momentum conservation", worst_p <= 1e-12,
                         std::to_string(count) + " triples, max relative error " + fmt(worst_p));
    p.residual = worst_p;
    Check e = make_check("energy conservation", worst_e <= 1e-12,
                         std::to_string(count) + " triples, max relative error " + fmt(worst_e));
    e.residual = worst_e;
    rep.checks = {p, e};
    return rep;
}

Report verify_moments(const McConfig& cfg) {
    VelocityFn m1 = maxwellian(1.0, {0.8, 0, 0}, 1.0);
    VelocityFn m2 = maxwellian(0.6, {-0.8, 0.3, 0}, 0.5);
    VelocityFn f = [&](const Vec3& v) { return m1(v) + m2(v); };
    const double outer = 1.5;
    const CollisionKernel k = CollisionKernel::pseudo_maxwell();
    auto psi = [](int j, const Vec3& v) { return j == 0 ? 1.0 : j <= 3 ? v[j - 1] : dot(v, v); };
    const char* names[] = {"1", "u", "v", "w", "|v|^2"};
    auto r = run_mc(cfg, 11, [&](std::mt19937_64& rng, double* out) {
        Vec3 zv = normal3(rng);
        Vec3 v = {outer * zv[0], outer * zv[1], outer * zv[2]};
        double wv = 1.0 / gaussian_density(zv, outer);
        Vec3 z = normal3(rng);
        Vec3 n = unit_vector(rng);
        auto s = collision_sample(f, v, z, n, k, cfg.proposal_sigma);
        Vec3 w = {v[0] + cfg.proposal_sigma * z[0], v[1] + cfg.proposal_sigma * z[1], v[2] + cfg.proposal_sigma * z[2]};
        auto [vs, ws] = collide(v, w, n);
        double base = s.loss * wv;
        for (int j = 0; j < 5; ++j) {
            out[j] = psi(j, v) * s.value * wv;
            out[5 + j] = 0.5 * base * (psi(j, vs) + psi(j, ws) - psi(j, v) - psi(j, w));
        }
        out[10] = base;
    });
    Report rep;
    double scale = r[10].first;
    for (int j = 0; j < 5; ++j) {
        auto [m, se] = r[j];
        Check c = make_check(std::string("moment ") + names[j] + ": plain estimator within 3 sigma",
                             std::fabs(m) <= 3 * se, "estimate " + fmt(m) + ", stderr " + fmt(se));
        c.residual = m;
        rep.checks.push_back(c);
        auto [ms, ses] = r[5 + j];
        Check d = make_check(std::string("moment ") + names[j] + ": symmetrized estimator zero",
                             std::fabs(ms) <= 1e-12 * scale, "estimate " + fmt(ms) + ", scale " + fmt(scale));
        d.residual = ms;
        rep.checks.push_back(d);
    }
    return rep;
}

Expr scaling_test_distribution() {
    return parse(
        "exp(-(x^2 + y^2 + z^2)/(4*(1 + t^2))) * (exp(-((u - 1/2)^2 + v^2 + w^2)/2)"
        " + 1/2*exp(-((u + 1/2)^2 + (v - 3/10)^2 + w^2)*5/6))");
}

Report verify_x11_scaling(const Expr& f0, double a, const McConfig& cfg) {
    Report rep;
    const double ea = std::exp(-a);
    Substitution scale{{"x", Expr::symbol("x") * exp(-Expr::symbol("a"))},
                       {"y", Expr::symbol("y") * exp(-Expr::symbol("a"))},
                       {"z", Expr::symbol("z") * exp(-Expr::symbol("a"))},
                       {"t", Expr::symbol("t") * exp(-Expr::symbol("a"))}};
    Expr fbar = exp(-Expr::symbol("a")) * substitute(f0, scale);
    VectorField d = transport_operator(Chart::cartesian());
    Expr dfbar = apply(d, fbar);
    Expr df0 = apply(d, f0);
    std::mt19937_64 rng(cfg.seed);
    double worst = 0;
    for (int p = 0; p < 8; ++p) {
        Env env;
        for (const char* s : {"x", "y", "z", "u", "v", "w"}) env[s] = uniform(rng, -1.5, 1.5);
        env["t"] = uniform(rng, 0.5, 2.0);
        env["a"] = a;
        Env scaled = env;
        for (const char* s : {"x", "y", "z", "t"}) scaled[s] = env[s] * ea;
        double lhs = eval_numeric(dfbar, env);
        double rhs = ea * ea * eval_numeric(df0, scaled);
        worst = std::max(worst, std::fabs(lhs - rhs) / (1e-300 + std::fabs(rhs)));
    }
    Check dc = make_check("streaming part scales by exp(-2a)", worst <= 1e-10, "max relative error " + fmt(worst));
    dc.residual = worst;
    rep.checks.push_back(dc);

    Vec3 x{0.4, -0.3, 0.2};
    Vec3 v{0.3, -0.2, 0.1};
    double t = 1.2;
    VelocityFn fb = from_expr(fbar, x, t, a);
    VelocityFn f0s = from_expr(f0, {x[0] * ea, x[1] * ea, x[2] * ea}, t * ea);
    const CollisionKernel k = CollisionKernel::pseudo_maxwell();
    McEstimate jb = collision_integral(fb, v, k, cfg);
    McConfig other = cfg;
    other.seed = cfg.seed + 1;
    McEstimate j0 = collision_integral(f0s, v, k, other);
    double want = ea * ea;
    double ratio = jb.estimate / j0.estimate;
    double ratio_se = std::fabs(ratio) * std::hypot(jb.stderr_ / jb.estimate, j0.stderr_ / j0.estimate);
    double diff = jb.estimate - want * j0.estimate;
    double diff_se = std::hypot(jb.stderr_, want * j0.stderr_);
    bool ok = a == 0.0 ? std::fabs(ratio - 1) <= 3 * ratio_se : std::fabs(diff) <= 3 * diff_se;
    Check cc = make_check("collision part scales by exp(-2a) within 3 sigma", ok,
                          "ratio " + fmt(ratio) + " +- " + fmt(ratio_se) + ", expected " + fmt(want) +
                              (a != 0.0 ? ", implied h = " + fmt(std::log(ratio) / a) : std::string()));
    cc.residual = diff;
    rep.checks.push_back(cc);
    PairedEstimate crn = paired_collision_integral(fb, v, f0s, v, want, k, cfg);
    Check pc = make_check("collision part, common random numbers", std::fabs(crn.diff) <= 3 * crn.diff_stderr + 1e-12 * crn.a.scale,
                          "difference " + fmt(crn.diff) + ", stderr " + fmt(crn.diff_stderr));
    pc.residual = crn.diff;
    rep.checks.push_back(pc);
    return rep;
}

Report verify_reduced_collision(const std::string& id, const McConfig& cfg) {
    const CollisionKernel k = CollisionKernel::pseudo_maxwell();
    auto omega_v = [](const Vec3& c) {
        return std::exp(-(c[0] - 0.2) * (c[0] - 0.2) / 1.6 - (c[1] + 0.1) * (c[1] + 0.1) / 2.6 - c[2] * c[2] / 2.0) +
               0.5 * std::exp(-((c[0] - 1) * (c[0] - 1) + (c[1] - 0.5) * (c[1] - 0.5) + (c[2] + 0.5) * (c[2] + 0.5)));
    };
    Report rep;
    auto compare = [&](const std::string& label, const VelocityFn& f, const Vec3& v, const VelocityFn& om,
                       const Vec3& vt, double factor) {
        PairedEstimate p = paired_collision_integral(f, v, om, vt, factor, k, cfg);
        Check c = make_check(label + ": common random numbers within 3 sigma",
                             std::fabs(p.diff) <= 3 * p.diff_stderr + 1e-12 * p.a.scale,
                             "difference " + fmt(p.diff) + ", stderr " + fmt(p.diff_stderr));
        c.residual = p.diff;
        rep.checks.push_back(c);
        McConfig other = cfg;
        other.seed = cfg.seed + 1;
        McEstimate jo = collision_integral(om, vt, k, other);
        double ratio = p.a.estimate / jo.estimate;
        double se = std::fabs(ratio) * std::hypot(p.a.stderr_ / p.a.estimate, jo.stderr_ / jo.estimate);
        Check r = make_check(label + ": ratio within 3 sigma", std::fabs(ratio - factor) <= 3 * se,
                             "ratio " + fmt(ratio) + " +- " + fmt(se) + ", expected " + fmt(factor));
        r.residual = ratio - factor;
        rep.checks.push_back(r);
    };
    if (id == "1.8") {
        for (double t : {2.0, 1.0}) {
            Vec3 x{1, 1, 1};
            Vec3 p{x[0] / t, x[1] / t, x[2] / t};
            double spatial = std::exp(-dot(p, p) / 8);
            VelocityFn om = [=](const Vec3& c) { return spatial * omega_v(c); };
            VelocityFn f = [=](const Vec3& c) { return om(c) / t; };
            Vec3 v{0.3, -0.2, 0.1};
            compare("t=" + fmt(t), f, v, om, v, 1.0 / (t * t));
        }
        return rep;
    }
    if (id == "1.2") {
        const double beta = 0.7;
        const double t = 2.0;
        const Vec3 x{1.0, 0.8, 0.6};
        const double r = std::hypot(x[1], x[2]);
        const double theta = std::atan2(x[2], x[1]);
        const double p = beta * theta - x[0] / t;
        const double spatial = std::exp(-(r - 1) * (r - 1) - p * p / 4 - t / 10);
        VelocityFn om = [=](const Vec3& c) { return spatial * omega_v(c); };
        const double ct = std::cos(theta), st = std::sin(theta);
        VelocityFn f = [=](const Vec3& c) {
            return om({c[0] - x[0] / t, c[1] * ct + c[2] * st, -c[1] * st + c[2] * ct});
        };
        Vec3 v{0.3, -0.2, 0.1};
        Vec3 vt{v[0] - x[0] / t, v[1] * ct + v[2] * st, -v[1] * st + v[2] * ct};
        compare("t=2", f, v, om, vt, 1.0);
        return rep;
    }
    throw std::invalid_argument("no reduced collision check for row " + id);
}

}  // namespace boltzclass
