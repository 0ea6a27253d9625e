#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boltzclass/expr/calculus.hpp"
#include "boltzclass/expr/eval.hpp"
#include "boltzclass/liealg/l11.hpp"
#include "boltzclass/liealg/vector_field.hpp"
#include "boltzclass/report.hpp"

namespace boltzclass {

enum class ChartKind { Cartesian, Cylindrical, Spherical };

struct Chart {
    ChartKind kind = ChartKind::Cartesian;
    std::string name;
    Coords coords;
    /// Cartesian coordinate -> expression in this chart's coordinates.
    Substitution forward;
    /// This chart's coordinate -> expression in Cartesian coordinates.
    Substitution inverse;

    static const Chart& cartesian();
    static const Chart& cylindrical();
    static const Chart& spherical();
    static const Chart& by_name(std::string_view name);

    /// Sampling guard: angles and radius as in DomainGuard::standard().
    [[nodiscard]] DomainGuard guard() const;
};

/// Numeric change of coordinates. Angles are recovered with atan2 and
/// wrapped to [0, 2 pi); throws DomainError at r = 0 or sin(theta) = 0.
Env to_chart(const Env& point, const Chart& from, const Chart& to);

/// Pushes a field forward between charts; coefficients are expressed in the
/// target coordinates and simplified.
VectorField pushforward(const VectorField& vf, const Chart& target);

/// The eleven generators pushed into `chart`.
std::vector<VectorField> l11_basis(const Chart& chart);

/// The streaming operator d_t + u d_x + v d_y + w d_z in `chart`.
VectorField transport_operator(const Chart& chart);

/// Listed generators (and the streaming operator) of each chart compared
/// with the pushforward; one check per generator.
Report verify_chart_generators(std::uint64_t seed = 42);

/// Velocity-frame identities of both charts.
Report verify_frame_identities(std::uint64_t seed = 42);

/// Max round-trip error chart -> cartesian -> chart over `n` seeded points.
double chart_round_trip_error(const Chart& chart, int n, std::uint64_t seed);

}  // namespace boltzclass
