#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "boltzclass/expr/eval.hpp"
#include "boltzclass/expr/expr.hpp"

namespace boltzclass {

/// Uniform double in [lo, hi) from a 64-bit engine, identical on every platform.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

struct DomainGuard {
    using Interval = std::pair<double, double>;

    std::map<std::string, Interval, std::less<>> intervals;
    Interval fallback{0.5, 2.0};
    /// A sample is rejected when any exclusion returns true.
    std::vector<std::function<bool(const Env&)>> exclusions;
    /// Optional hook run after drawing; may overwrite values, returns false to reject.
    std::function<bool(Env&, std::mt19937_64&)> constraint;

    /// Angles, radius and positive defaults for the coordinate names in use.
    static DomainGuard standard();

    [[nodiscard]] Interval interval_for(std::string_view name) const;

    /// Draws one admissible assignment (nullopt after `tries` rejections).
    std::optional<Env> sample(const std::set<std::string>& symbols, std::mt19937_64& rng, int tries = 64) const;
};

enum class ZeroStatus { SymbolicZero, NumericZero, Nonzero };

std::string_view status_name(ZeroStatus s);

struct ZeroVerdict {
    ZeroStatus status = ZeroStatus::SymbolicZero;
    std::optional<Env> witness;
    double residual = 0.0;
    int samples_used = 0;
};

struct GuardTooTight : std::runtime_error {
    GuardTooTight() : std::runtime_error("guard too tight") {}
};

inline constexpr int kZeroTestPoints = 32;

/// simplify first; otherwise 32 seeded guarded points, with fresh abstract-atom
/// values at every point. Throws GuardTooTight if no point evaluates.
ZeroVerdict is_identically_zero(const Expr& e, const DomainGuard& guard, std::uint64_t seed);

/// Same, without the symbolic stage (used when the caller already simplified).
ZeroVerdict numeric_zero_test(const Expr& e, const DomainGuard& guard, std::uint64_t seed);

}  // namespace boltzclass
