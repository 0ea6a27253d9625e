#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boltzclass/expr/rational.hpp"

namespace boltzclass {

enum class Kind : std::uint8_t {
    Rational,
    Symbol,
    Power,
    Product,
    Sum,
    Call,
    Abstract,
    AbstractPartial,
};

enum class Builtin : std::uint8_t { Sin, Cos, Tan, Cot, Arctan, Exp, Ln, Sqrt, Abs };

std::string_view builtin_name(Builtin fn);
std::optional<Builtin> builtin_from_name(std::string_view name);

struct Node;

/// Immutable symbolic expression. Cheap to copy (shared node), safe to share
/// across threads. Every constructor returns a lightly canonicalized tree:
/// sums and products are flattened, like terms/factors are collected, and
/// children are sorted by `compare`.
class Expr {
public:
    Expr();  // the rational 0
    Expr(Rational r);  // NOLINT(google-explicit-constructor)
    Expr(std::int64_t n) : Expr(Rational(n)) {}  // NOLINT(google-explicit-constructor)
    Expr(int n) : Expr(Rational(n)) {}  // NOLINT(google-explicit-constructor)

    static Expr symbol(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Expr exponent);
    static Expr call(Builtin fn, Expr arg);
    /// Arbitrary function `name` (e.g. "Psi", "Omega") of args; arity = args.size().
    static Expr abstract(std::string name, std::vector<Expr> args);
    /// Partial derivative of an arbitrary function w.r.t. the 1-based slots
    /// (sorted; repeated slots denote higher derivatives).
    static Expr partial(std::string name, std::vector<int> slots, std::vector<Expr> args);

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] const Rational& value() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] Builtin builtin() const;
    [[nodiscard]] const std::vector<int>& slots() const;
    [[nodiscard]] std::span<const Expr> children() const;
    [[nodiscard]] const Expr& child(std::size_t i) const { return children()[i]; }
    [[nodiscard]] std::size_t size() const { return children().size(); }
    [[nodiscard]] std::size_t hash() const;

    [[nodiscard]] bool is(Kind k) const { return kind() == k; }
    [[nodiscard]] bool is_rational() const { return kind() == Kind::Rational; }
    [[nodiscard]] bool is_zero() const { return is_rational() && value().is_zero(); }
    [[nodiscard]] bool is_one() const { return is_rational() && value().is_one(); }
    [[nodiscard]] bool is_symbol(std::string_view n) const { return kind() == Kind::Symbol && name() == n; }

    /// Text in the input grammar; parse(str()) reproduces the expression.
    [[nodiscard]] std::string str() const;

    [[nodiscard]] const Node* node() const { return node_.get(); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    friend std::pair<Rational, Expr> split_coefficient(const Expr& e);
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Rational;
    std::size_t hash = 0;
    Rational value;
    std::string name;
    Builtin fn = Builtin::Sin;
    std::vector<int> slots;
    std::vector<Expr> args;
};

/// Deterministic structural total order (independent of addresses).
int compare(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr sym(std::string name);
Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tan(const Expr& a);
Expr cot(const Expr& a);
Expr arctan(const Expr& a);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);
Expr abs(const Expr& a);

/// Splits `c * rest` into its rational coefficient and the remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// True for a negative rational or a product with negative leading coefficient.
bool has_negative_sign(const Expr& e);

/// Names of all free Symbols.
std::set<std::string> free_symbols(const Expr& e);

/// True when `e` mentions the symbol `name`.
bool depends_on(const Expr& e, std::string_view name);

/// Number of nodes, for diagnostics and size heuristics.
std::size_t node_count(const Expr& e);

/// Collects every Abstract / AbstractPartial node (deduplicated, ordered).
std::vector<Expr> abstract_atoms(const Expr& e);

}  // namespace boltzclass
