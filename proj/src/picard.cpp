#include "contraction/picard.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace contraction {

namespace {

// Relative growth over the final half of the orbit above which a
// monotone distance-from-start profile is flagged as unbounded-suspect.
// Converging orbits also grow monotonically toward their limit, but the
// tail growth is on the order of the Cauchy tolerance, far below 5%.
constexpr double kGrowthFactor = 1.05;

}  // namespace

IterateResult iterate(const SelfMap& map, const Point& x0, long max_iter, double cauchy_tol) {
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(cauchy_tol > 0.0)) throw std::invalid_argument("cauchy_tol must be positive");
    if (!map.space().domain.contains(x0))
        throw std::invalid_argument("start point lies outside the domain");

    IterateResult result;
    Orbit& orbit = result.orbit;
    orbit.start = x0;
    orbit.points.push_back(x0);

    int small_steps = 0;
    for (long k = 1; k <= max_iter; ++k) {
        const Point next = map.apply(orbit.points.back());
        if (!map.space().domain.contains(next)) throw OrbitEscape(k, next);
        const double step = distance(map.space(), orbit.points.back(), next);
        orbit.points.push_back(next);
        orbit.step_distances.push_back(step);
        result.report.iterations_used = k;
        small_steps = step < cauchy_tol ? small_steps + 1 : 0;
        if (small_steps >= kCauchyWindow) {
            result.report.converged = true;
            break;
        }
    }

    result.report.cauchy_tol = cauchy_tol;
    if (result.report.converged) {
        const Point& z = orbit.points.back();
        result.report.limit_estimate = z;
        result.report.residual = fixed_point_residual(map, z);
    }
    const BoundedCheck bounded = orbit_bounded_check(map.space(), orbit);
    result.report.orbit_diameter = bounded.diameter;
    result.report.unbounded_suspect = bounded.unbounded_suspect;
    return result;
}

double fixed_point_residual(const SelfMap& map, const Point& z) {
    if (!map.space().domain.contains(z))
        throw std::invalid_argument("candidate fixed point lies outside the domain");
    return distance(map.space(), map.apply(z), z);
}

BoundedCheck orbit_bounded_check(const BMetricSpace& space, const Orbit& orbit) {
    if (orbit.length() < 2) throw std::invalid_argument("orbit must contain at least 2 points");
    BoundedCheck check;
    std::vector<double> from_start;
    from_start.reserve(orbit.points.size());
    for (const Point& p : orbit.points) from_start.push_back(distance(space, orbit.start, p));
    check.diameter = *std::max_element(from_start.begin(), from_start.end());

    const std::size_t half = from_start.size() / 2;
    bool monotone = true;
    for (std::size_t i = half; i + 1 < from_start.size(); ++i) {
        if (from_start[i + 1] < from_start[i]) {
            monotone = false;
            break;
        }
    }
    const double d_mid = from_start[half];
    const double d_last = from_start.back();
    check.unbounded_suspect = monotone && d_last > 0.0 && d_last > d_mid * kGrowthFactor;
    return check;
}

std::optional<long> first_entry_index(const SelfMap& map, const Point& x, const Point& z,
                                      double eps, long cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("entry radius eps must be positive");
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    Point current = x;
    for (long i = 0; i <= cap; ++i) {
        if (distance(map.space(), current, z) < eps) return i;
        if (i < cap) current = map.apply(current);
    }
    return std::nullopt;
}

EntryProfile uniform_entry_profile(const SelfMap& map, const Point& z, double k_radius,
                                   double eps, std::uint64_t seed, long count, long cap) {
    if (!(eps > 0.0) || !(k_radius > 0.0))
        throw std::invalid_argument("radii must be positive");
    EntryProfile profile;
    profile.cap = cap;
    long max_seen = -1;
    for (const Point& x : sample_points_in_ball(map.space(), z, k_radius, seed, count)) {
        const std::optional<long> entry = first_entry_index(map, x, z, eps, cap);
        profile.entries.push_back(entry);
        if (entry) {
            ++profile.histogram[*entry];
            max_seen = std::max(max_seen, *entry);
        } else {
            ++profile.not_entered_count;
        }
    }
    if (profile.not_entered_count == 0 && max_seen >= 0) profile.max_entry = max_seen;
    return profile;
}

void write_orbit_csv(std::ostream& out, const BMetricSpace& space, const Orbit& orbit,
                     const std::optional<Point>& z) {
    out << "n";
    for (int i = 1; i <= space.dimension; ++i) out << ",x" << i;
    out << ",step_distance,distance_to_z\n";
    char buf[64];
    auto shortest = [&buf](double v) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    for (std::size_t n = 0; n < orbit.points.size(); ++n) {
        out << n;
        for (int i = 0; i < space.dimension; ++i) out << ',' << shortest(orbit.points[n][i]);
        out << ',';
        if (n < orbit.step_distances.size()) out << shortest(orbit.step_distances[n]);
        out << ',';
        if (z) out << shortest(distance(space, orbit.points[n], *z));
        out << '\n';
    }
}

}  // namespace contraction
