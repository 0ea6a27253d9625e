#include "boltzclass/expr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace boltzclass {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t quantize(double v) {
    if (v == 0.0) return 0;
    int ex = 0;
    double m = std::frexp(v, &ex);
    auto q = static_cast<std::int64_t>(std::llround(m * 1e9));
    return static_cast<std::uint64_t>(q) * 1315423911ULL + static_cast<std::uint64_t>(ex + 2048);
}

class Evaluator {
public:
    Evaluator(const Env& env, AbstractOracle oracle) : env_(env), oracle_(std::move(oracle)) {}

    double run(const Expr& e) {
        if (e.is_rational()) return e.value().to_double();
        auto it = memo_.find(e.node());
        if (it != memo_.end()) return it->second;
        double v = compute(e);
        if (!std::isfinite(v)) throw DomainError("non-finite value in " + e.str());
        memo_.emplace(e.node(), v);
        return v;
    }

private:
    double compute(const Expr& e) {
        switch (e.kind()) {
            case Kind::Rational:
                return e.value().to_double();
            case Kind::Symbol: {
                auto it = env_.find(e.name());
                if (it == env_.end()) throw DomainError("no value for symbol " + e.name());
                return it->second;
            }
            case Kind::Sum: {
                double s = 0;
                for (const auto& c : e.children()) s += run(c);
                return s;
            }
            case Kind::Product: {
                double p = 1;
                for (const auto& c : e.children()) p *= run(c);
                return p;
            }
            case Kind::Power: {
                double b = run(e.child(0));
                const Expr& x = e.child(1);
                if (x.is_rational() && x.value().is_integer()) {
                    if (b == 0.0 && x.value().is_negative()) throw DomainError("division by zero");
                    return std::pow(b, static_cast<double>(x.value().num()));
                }
                double xv = run(x);
                if (b < 0) throw DomainError("negative base with non-integer exponent");
                if (b == 0.0 && xv <= 0) throw DomainError("division by zero");
                return std::pow(b, xv);
            }
            case Kind::Call: {
                double a = run(e.child(0));
                switch (e.builtin()) {
                    case Builtin::Sin:
                        return std::sin(a);
                    case Builtin::Cos:
                        return std::cos(a);
                    case Builtin::Tan:
                        return std::tan(a);
                    case Builtin::Cot: {
                        double t = std::tan(a);
                        if (t == 0.0) throw DomainError("cot pole");
                        return 1.0 / t;
                    }
                    case Builtin::Arctan:
                        return std::atan(a);
                    case Builtin::Exp:
                        return std::exp(a);
                    case Builtin::Ln:
                        if (a <= 0) throw DomainError("ln of non-positive value");
                        return std::log(a);
                    case Builtin::Sqrt:
                        if (a < 0) throw DomainError("sqrt of negative value");
                        return std::sqrt(a);
                    case Builtin::Abs:
                        return std::fabs(a);
                }
                break;
            }
            case Kind::Abstract:
            case Kind::AbstractPartial: {
                std::vector<double> args;
                args.reserve(e.size());
                for (const auto& c : e.children()) args.push_back(run(c));
                return oracle_(e.name(), e.slots(), args);
            }
        }
        throw DomainError("unevaluable node");
    }

    const Env& env_;
    AbstractOracle oracle_;
    std::unordered_map<const Node*, double> memo_;
};

}  // namespace

double abstract_value(const std::string& name, const std::vector<int>& slots, const std::vector<double>& args,
                      std::uint64_t seed) {
    std::uint64_t h = splitmix(seed ^ 0x5bd1e995ULL);
    for (unsigned char c : name) h = splitmix(h ^ c);
    h = splitmix(h ^ (0xabcULL + args.size()));
    for (int s : slots) h = splitmix(h ^ (0x100ULL + static_cast<std::uint64_t>(s)));
    for (double a : args) h = splitmix(h ^ quantize(a));
    return 0.5 + static_cast<double>(h >> 11) * 0x1.0p-53;
}

AbstractOracle smooth_oracle(std::uint64_t seed) {
    return [seed](const std::string& name, const std::vector<int>& slots, const std::vector<double>& args) {
        std::uint64_t h = splitmix(seed ^ 0x7f4a7c159e3779b9ULL);
        for (unsigned char c : name) h = splitmix(h ^ c);
        h = splitmix(h ^ args.size());
        auto unit = [&h]() {
            h = splitmix(h);
            return static_cast<double>(h >> 11) * 0x1.0p-53;
        };
        double total = 0;
        for (int j = 0; j < 3; ++j) {
            double amp = 0.5 + unit();
            double dot = 0;
            std::vector<double> b(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) {
                b[i] = unit() - 0.5;
                dot += b[i] * args[i];
            }
            double term = amp * std::exp(dot);
            for (int s : slots) term *= b[static_cast<std::size_t>(s - 1)];
            total += term;
        }
        return total;
    };
}

double eval_numeric(const Expr& e, const Env& env, std::uint64_t seed) {
    return Evaluator(env, [seed](const std::string& n, const std::vector<int>& s, const std::vector<double>& a) {
               return abstract_value(n, s, a, seed);
           }).run(e);
}

double eval_numeric(const Expr& e, const Env& env, const AbstractOracle& oracle) {
    return Evaluator(env, oracle).run(e);
}

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& vars) {
    emit(e, vars);
    std::size_t d = 0;
    for (const auto& in : code_) {
        switch (in.op) {
            case Op::Const:
            case Op::Var:
                depth_ = std::max(depth_, ++d);
                break;
            case Op::Add:
            case Op::Mul:
                d -= in.n - 1;
                break;
            case Op::Pow:
                --d;
                break;
            default:
                break;
        }
    }
}

void CompiledExpr::emit(const Expr& e, const std::vector<std::string>& vars) {
    switch (e.kind()) {
        case Kind::Rational:
            code_.push_back({Op::Const, 0, 0, e.value().to_double()});
            return;
        case Kind::Symbol: {
            auto it = std::find(vars.begin(), vars.end(), e.name());
            if (it == vars.end()) throw DomainError("no value for symbol " + e.name());
            code_.push_back({Op::Var, 0, static_cast<std::uint32_t>(it - vars.begin()), 0});
            return;
        }
        case Kind::Sum:
        case Kind::Product:
            for (const auto& c : e.children()) emit(c, vars);
            code_.push_back({e.is(Kind::Sum) ? Op::Add : Op::Mul, 0, static_cast<std::uint32_t>(e.size()), 0});
            return;
        case Kind::Power: {
            emit(e.child(0), vars);
            const Expr& x = e.child(1);
            if (x.is_rational() && x.value().is_integer()) {
                code_.push_back({Op::PowInt, 0, 0, static_cast<double>(x.value().num())});
            } else {
                emit(x, vars);
                code_.push_back({Op::Pow, 0, 0, 0});
            }
            return;
        }
        case Kind::Call:
            emit(e.child(0), vars);
            code_.push_back({Op::Call, static_cast<std::uint8_t>(e.builtin()), 0, 0});
            return;
        case Kind::Abstract:
        case Kind::AbstractPartial:
            throw DomainError("cannot compile arbitrary function " + e.name());
    }
}

double CompiledExpr::operator()(const double* values) const {
    std::vector<double> st;
    st.reserve(depth_ + 1);
    for (const auto& in : code_) {
        switch (in.op) {
            case Op::Const:
                st.push_back(in.c);
                break;
            case Op::Var:
                st.push_back(values[in.n]);
                break;
            case Op::Add:
            case Op::Mul: {
                double acc = in.op == Op::Add ? 0.0 : 1.0;
                for (std::size_t i = st.size() - in.n; i < st.size(); ++i) acc = in.op == Op::Add ? acc + st[i] : acc * st[i];
                st.resize(st.size() - in.n);
                st.push_back(acc);
                break;
            }
            case Op::PowInt:
                if (st.back() == 0.0 && in.c < 0) throw DomainError("division by zero");
                st.back() = std::pow(st.back(), in.c);
                break;
            case Op::Pow: {
                double x = st.back();
                st.pop_back();
                double b = st.back();
                if (b < 0) throw DomainError("negative base with non-integer exponent");
                if (b == 0.0 && x <= 0) throw DomainError("division by zero");
                st.back() = std::pow(b, x);
                break;
            }
            case Op::Call: {
                double a = st.back();
                double r = 0;
                switch (static_cast<Builtin>(in.fn)) {
                    case Builtin::Sin:
                        r = std::sin(a);
                        break;
                    case Builtin::Cos:
                        r = std::cos(a);
                        break;
                    case Builtin::Tan:
                        r = std::tan(a);
                        break;
                    case Builtin::Cot:
                        if (std::tan(a) == 0.0) throw DomainError("cot pole");
                        r = 1.0 / std::tan(a);
                        break;
                    case Builtin::Arctan:
                        r = std::atan(a);
                        break;
                    case Builtin::Exp:
                        r = std::exp(a);
                        break;
                    case Builtin::Ln:
                        if (a <= 0) throw DomainError("ln of non-positive value");
                        r = std::log(a);
                        break;
                    case Builtin::Sqrt:
                        if (a < 0) throw DomainError("sqrt of negative value");
                        r = std::sqrt(a);
                        break;
                    case Builtin::Abs:
                        r = std::fabs(a);
                        break;
                }
                st.back() = r;
                break;
            }
        }
    }
    if (!std::isfinite(st.back())) throw DomainError("non-finite value");
    return st.back();
}

}  // namespace boltzclass
