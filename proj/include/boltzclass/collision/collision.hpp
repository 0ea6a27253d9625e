#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "boltzclass/expr/expr.hpp"
#include "boltzclass/report.hpp"

namespace boltzclass {

using Vec3 = std::array<double, 3>;

/// Post-collision velocities v* = (v + w + g n)/2, w* = (v + w - g n)/2.
/// Throws std::invalid_argument unless |n| = 1 within 1e-12.
std::pair<Vec3, Vec3> collide(const Vec3& v, const Vec3& w, const Vec3& n);

struct CollisionKernel {
    /// B(g, cos theta1), theta1 the angle between v - w and n.
    std::function<double(double g, double cos_theta1)> B;
    std::string label;

    static CollisionKernel pseudo_maxwell();  // B = 1/(4 pi)
    static CollisionKernel hard_sphere();     // B = g |cos theta1| / (4 pi)
    static CollisionKernel forward_peaked();  // B = (1 + cos^2 theta1) / (8 pi)
};

struct McConfig {
    long n = 100000;
    std::uint64_t seed = 42;
    double proposal_sigma = 2.0;
    int jobs = 1;
};

struct McEstimate {
    double estimate = 0;
    double stderr_ = 0;
    /// Mean magnitude of the loss term, for relative tolerances.
    double scale = 0;
};

using VelocityFn = std::function<double(const Vec3&)>;
using DistributionFn = std::function<double(const Vec3& x, const Vec3& v, double t)>;

/// Importance-sampled J(f, f)(v): w ~ N(v, sigma^2), n uniform on the sphere.
/// Deterministic for a fixed seed; the sample stream is split into fixed
/// substreams, so the result does not depend on cfg.jobs.
McEstimate collision_integral(const VelocityFn& f, const Vec3& v, const CollisionKernel& kernel, const McConfig& cfg);

McEstimate collision_integral_mc(const DistributionFn& f, const Vec3& x, const Vec3& v, double t,
                                 const CollisionKernel& kernel, const McConfig& cfg);

/// Paired estimate of J_a(v_a) - factor * J_b(v_b) with common random numbers.
struct PairedEstimate {
    McEstimate a;
    McEstimate b;
    double diff = 0;
    double diff_stderr = 0;
};
PairedEstimate paired_collision_integral(const VelocityFn& fa, const Vec3& va, const VelocityFn& fb, const Vec3& vb,
                                         double factor, const CollisionKernel& kernel, const McConfig& cfg);

VelocityFn maxwellian(double rho, const Vec3& u, double temperature);

/// Annihilation of Maxwellians for three kernels and several (rho, u, T).
Report verify_maxwellian(const McConfig& cfg);

/// Momentum and energy conservation of collide on `count` random triples.
Report verify_conservation(int count, std::uint64_t seed);

/// Integrals of J against 1, u and |v|^2 for a sum of two displaced
/// Maxwellians: plain estimator within 3 sigma, symmetrized estimator exact.
Report verify_moments(const McConfig& cfg);

/// Test distribution of (x, y, z, u, v, w, t) used for the scaling check.
Expr scaling_test_distribution();

/// X11 scaling by `a`: f~ = e^{-a} f0(e^{-a} x, v, e^{-a} t). The streaming
/// part must scale by e^{-2a} exactly and the collision term within 3 sigma.
Report verify_x11_scaling(const Expr& f0, double a, const McConfig& cfg);

/// Collision term of an invariant solution against prefactor * J(Omega, Omega)
/// in invariant variables; `id` is "1.8" or "1.2".
Report verify_reduced_collision(const std::string& id, const McConfig& cfg);

}  // namespace boltzclass
