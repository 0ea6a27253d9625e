#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boltzclass/catalog/catalog.hpp"
#include "boltzclass/geometry/chart.hpp"
#include "boltzclass/report.hpp"

namespace boltzclass {

struct Subalgebra {
    std::string id;
    const Chart* chart = &Chart::cartesian();
    std::vector<BasisCombo> generators;
    std::vector<Constraint> constraints;

    [[nodiscard]] int dimension() const { return static_cast<int>(generators.size()); }
    /// Generator i as a field in the subalgebra's chart.
    [[nodiscard]] VectorField field(int i) const;
    /// Chart guard plus parameter constraints: "!= 0" strata are excluded,
    /// "= 1" is met by rescaling the parameters it mentions.
    [[nodiscard]] DomainGuard guard() const;

    static Subalgebra from_row(const CatalogRow& row);
    /// Generators given as combo text, e.g. {"7", "8", "9"}.
    static Subalgebra of(const std::string& chart, const std::vector<std::string>& combos);
};

/// 2 c^11 q + sum_j c^j X_j(q) for generator i, in the subalgebra's chart.
Expr determining_residual(const Subalgebra& sub, int i, const Expr& q);

/// A generic function Psi8 of all eight chart coordinates.
Expr generic_source(const Chart& chart);

enum class Overall { Pass, PassNumeric, Fail, Skip };
std::string_view overall_name(Overall o);

struct Verdict {
    std::string id;
    std::string chart;
    std::string what;  // "source" or "invariant"
    std::vector<Check> checks;
    Overall overall = Overall::Pass;
    double wall_ms = 0;
    std::string note;
};

/// Sets `overall` from the checks (Skip is kept unless a check failed).
void settle(Verdict& v);

Verdict verify_source(const Subalgebra& sub, const Expr& q, std::uint64_t seed = 42);

struct OrbitRanks {
    int r_full = 0;
    int r_xi = 0;
};

/// Generic ranks of the k x 8 coefficient matrix (and without the f column)
/// over 8 seeded guarded points.
OrbitRanks orbit_ranks(const Subalgebra& sub, std::uint64_t seed = 42);

/// f = weight * Omega(args); `omega` is empty for a constant representation (C * weight).
struct InvariantRep {
    Expr weight;
    std::string omega;
    std::vector<Expr> args;

    [[nodiscard]] int arity() const { return static_cast<int>(args.size()); }
    static InvariantRep from_expr(const Expr& e);
};

/// Invariance of each argument and of f/weight, the count m + 1 = 8 - r_full,
/// and Jacobian independence at 8 points. A missing representation checks
/// r_xi = r_full - 1 and is reported as Skip.
Verdict verify_invariant_rep(const Subalgebra& sub, const std::optional<InvariantRep>& rep, std::uint64_t seed = 42);

/// Numerical rank with pivot threshold `rel` relative to the largest entry.
int numeric_rank(std::vector<std::vector<double>> m, double rel = 1e-8);

struct ReducedEquation {
    Expr prefactor;
    /// In Omega(p...), its partials, and the invariant symbols.
    Expr body;
    /// Invariant names: bare-symbol arguments keep their name, others are p1, p2, ...
    std::vector<std::string> names;
    /// name -> argument expression for the p_s.
    std::vector<std::pair<std::string, Expr>> definitions;
    /// Coordinates left in the body (empty on success).
    std::vector<std::string> leftover;

    [[nodiscard]] Expr full() const { return prefactor * body; }
    /// Body as a sum over Omega and its partials, one coefficient each.
    [[nodiscard]] std::string grouped() const;
};

/// Substitutes the representation into the chart's streaming operator and
/// rewrites the result in the invariants.
ReducedEquation reduced_differential_part(const InvariantRep& rep, const Chart& chart);

/// Cartesian recomputation: the source is pulled back to Cartesian
/// coordinates and checked against the Cartesian generators.
Verdict verify_source_cartesian(const Subalgebra& sub, const Expr& q, std::uint64_t seed = 42);

/// Per-row seed derived from the run seed and the row id.
std::uint64_t row_seed(std::uint64_t seed, const std::string& id);

/// Source or invariant verdict of a catalog row (references resolved, the
/// resolved cell checked against this row's own subalgebra).
Verdict verify_row(const Catalog& cat, const CatalogRow& row, const std::string& what, std::uint64_t seed);

}  // namespace boltzclass
