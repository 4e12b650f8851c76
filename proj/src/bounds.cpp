#include "contraction/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace contraction {

namespace {

// Absorbs rounding noise in K/delta before flooring; keeps p > K/delta + 1
// strict while matching the exact-arithmetic value of the bound.
constexpr double kFloorNudge = 1e-9;

void require_radii(double epsilon, double k_radius) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(epsilon < k_radius)) throw std::invalid_argument("radii must satisfy 0 < epsilon < K");
}

void require_certified_fixed_point(const SelfMap& map, const Point& z) {
    const double residual = fixed_point_residual(map, z);
    if (residual > kFixedPointResidualTol)
        throw std::invalid_argument("z is not a certified fixed point (residual " +
                                    std::to_string(residual) + " exceeds 1e-12)");
}

}  // namespace

RetractBound retract_bound(const ControlFunction& phi, const ControlSequence& seq, double epsilon,
                           double k_radius, long n_max) {
    require_radii(epsilon, k_radius);

    RetractBound bound;
    bound.epsilon = epsilon;
    bound.k_radius = k_radius;
    try {
        bound.gap = gap_infimum(phi, epsilon / 2.0, k_radius);
    } catch (const GapViolation& v) {
        throw std::runtime_error("gap infimum nonpositive at t=" + std::to_string(v.witness_t()));
    }
    bound.f_min = bound.gap.infimum_estimate;
    bound.delta = std::min(bound.f_min, epsilon / 2.0) / 4.0;

    const UniformConvergenceResult uniform =
        uniform_convergence_check(seq, k_radius, bound.delta, n_max);
    if (!uniform.reached)
        throw std::runtime_error("uniform convergence index not found within n_max=" +
                                 std::to_string(n_max));
    bound.m2 = uniform.first_index;
    bound.m1 = bound.m2;
    bound.s = std::max(bound.m1, bound.m2);
    bound.p = static_cast<long>(std::floor(k_radius / bound.delta + 1.0 + kFloorNudge)) + 1;
    bound.m = bound.s * bound.p;
    bound.uniform_n_max = n_max;
    return bound;
}

InvarianceIndex invariance_index_empirical(const SelfMap& map, const Point& z, double epsilon,
                                           std::uint64_t seed, long sample_count, long n_cap) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (n_cap < 1) throw std::invalid_argument("n_cap must be >= 1");
    require_certified_fixed_point(map, z);

    const std::vector<Point> starts = sample_points_in_ball(map.space(), z, epsilon, seed, sample_count);

    // last_outside[x] = largest n with T^n x outside B(z, eps); m is one past
    // the largest over all samples.
    long last_outside = 0;
    for (const Point& x : starts) {
        Point current = x;
        for (long n = 1; n <= n_cap; ++n) {
            current = map.apply(current);
            if (!(distance(map.space(), current, z) < epsilon)) last_outside = std::max(last_outside, n);
        }
    }
    if (last_outside >= n_cap)
        throw std::runtime_error("invariance not observed within cap " + std::to_string(n_cap));

    InvarianceIndex inv;
    inv.epsilon = epsilon;
    inv.index = last_outside + 1;
    inv.mode = InvarianceMode::Empirical;
    inv.justification = "all sampled orbits stayed inside B(z, eps) from index " +
                        std::to_string(inv.index) + " through " + std::to_string(n_cap);
    return inv;
}

InvarianceIndex invariance_index_constructive(const ControlFunction& phi, const ControlSequence& seq,
                                              double epsilon, double k_radius, long n_max) {
    const RetractBound bound = retract_bound(phi, seq, epsilon, k_radius, n_max);
    InvarianceIndex inv;
    inv.epsilon = epsilon;
    inv.index = bound.m2;
    inv.mode = InvarianceMode::Constructive;
    std::ostringstream why;
    why << "for s >= " << bound.m2 << ": sup |phi_s - phi| <= delta = " << bound.delta
        << " on [0, " << k_radius << "], so phi_s(t) <= t - delta on [" << epsilon / 2.0 << ", "
        << k_radius << "] and phi_s(t) < " << epsilon / 2.0 + bound.delta
        << " below; both keep B(z, eps) and B(z, K) invariant under T^s"
        << " (conditional on a certified fixed point z)";
    inv.justification = why.str();
    return inv;
}

RetractVerification verify_retract_bound(const SelfMap& map, const Point& z,
                                         const RetractBound& bound, std::uint64_t seed,
                                         long sample_count) {
    require_certified_fixed_point(map, z);
    const std::vector<Point> starts =
        sample_points_in_ball(map.space(), z, bound.k_radius, seed, sample_count);

    RetractVerification verification;
    verification.bound_m = bound.m;
    for (const Point& x : starts) {
        ++verification.samples;
        const std::optional<long> entry = first_entry_index(map, x, z, bound.epsilon, bound.m);
        if (!entry) {
            ++verification.not_entered;
        } else {
            verification.worst_entry = std::max(verification.worst_entry, *entry);
        }
    }
    verification.pass = verification.not_entered == 0 && verification.worst_entry <= bound.m;
    return verification;
}

UniformVerification verify_uniform_convergence(const SelfMap& map, const Point& z, double epsilon,
                                               double k_radius, const RetractBound& bound,
                                               const InvarianceIndex& inv, std::uint64_t seed,
                                               long sample_count, long cap) {
    if (!(epsilon > 0.0) || !(k_radius > 0.0))
        throw std::invalid_argument("radii must be positive");
    require_certified_fixed_point(map, z);

    UniformVerification verification;
    verification.composed_bound = inv.index + bound.m;
    verification.cap = cap > 0 ? cap : verification.composed_bound + 32;
    if (verification.cap < verification.composed_bound)
        throw std::invalid_argument("cap must be >= the composed bound");

    const std::vector<Point> starts =
        sample_points_in_ball(map.space(), z, k_radius, seed, sample_count);
    verification.pass = true;
    for (const Point& x : starts) {
        ++verification.samples;
        Point current = map.iterate(x, verification.composed_bound);
        for (long i = verification.composed_bound; i <= verification.cap; ++i) {
            if (!(distance(map.space(), current, z) < epsilon)) {
                verification.pass = false;
                if (!verification.first_failure_iterate) verification.first_failure_iterate = i;
                break;
            }
            if (i < verification.cap) current = map.apply(current);
        }
        if (!verification.pass) break;
    }
    return verification;
}

}  // namespace contraction
