#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "boltzclass/expr/expr.hpp"
#include "boltzclass/liealg/l11.hpp"

namespace boltzclass {

struct CatalogError : std::runtime_error {
    CatalogError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    int line;
};

enum class Relation { NonZero, Zero, One };

struct Constraint {
    Expr expr;
    Relation rel = Relation::NonZero;
    std::string text;
};

/// A source or invariant cell: an expression, "none", or a reference to another row.
struct Cell {
    enum class Kind { Expr, None, Ref } kind = Kind::None;
    Expr expr;
    std::string ref;
    std::string text;
};

struct CatalogRow {
    std::string id;       // "6.8a"
    std::string base_id;  // "6.8"
    int dimension = 0;
    std::string chart = "cartesian";
    std::string generators_text;
    /// Combos as printed, before any "= 0" parameter is applied.
    std::vector<BasisCombo> raw_generators;
    /// Combos with "p = 0" constraints substituted.
    std::vector<BasisCombo> generators;
    std::vector<Constraint> constraints;
    Cell source;
    Cell invariant;
    std::set<std::string> parameters;
    int line = 0;

    /// Parameters fixed to zero by this row's constraints.
    [[nodiscard]] std::vector<std::string> zero_parameters() const;
};

class Catalog {
public:
    static Catalog load(const std::string& path);
    static Catalog parse(const std::string& text);

    [[nodiscard]] const std::vector<CatalogRow>& rows() const { return rows_; }
    [[nodiscard]] const CatalogRow* find(const std::string& id) const;
    /// Rows whose id or base id equals `id` (all sub-rows of a split row).
    [[nodiscard]] std::vector<const CatalogRow*> select(const std::string& id) const;
    /// Follows references until an expression or "none" is found.
    [[nodiscard]] const Cell& resolve_source(const CatalogRow& row) const;
    [[nodiscard]] const Cell& resolve_invariant(const CatalogRow& row) const;
    /// Distinct base rows per dimension.
    [[nodiscard]] std::map<int, int> counts_by_dimension() const;
    /// FNV-1a of the catalog text.
    [[nodiscard]] std::uint64_t hash() const { return hash_; }
    [[nodiscard]] std::string hash_hex() const;

private:
    std::vector<CatalogRow> rows_;
    std::map<std::string, std::size_t> index_;
    std::uint64_t hash_ = 0;
    void validate() const;
    [[nodiscard]] const Cell& resolve(const CatalogRow& row, bool source) const;
};

/// Canonical catalog text of one row.
std::string print_row(const CatalogRow& row);

/// Parameter symbols that may appear in the tables.
const std::set<std::string>& parameter_names();

/// Expected number of base rows per dimension 1..11.
const std::map<int, int>& expected_row_counts();

std::uint64_t fnv1a(const std::string& text);

}  // namespace boltzclass
