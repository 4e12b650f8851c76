#pragma once

#include "contraction/selfmap.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace contraction {

// Residual at or below this value certifies a fixed point at working precision.
inline constexpr double kFixedPointResidualTol = 1e-12;

inline constexpr long kDefaultMaxIter = 100000;
inline constexpr double kDefaultCauchyTol = 1e-10;
// Consecutive small steps required before declaring windowed-Cauchy convergence.
inline constexpr int kCauchyWindow = 10;

/// Picard trajectory x, Tx, T^2 x, ...
struct Orbit {
    Point start;
    std::vector<Point> points;           // points[0] = start
    std::vector<double> step_distances;  // distance(points[i], points[i+1])
    long length() const { return static_cast<long>(points.size()); }
};

struct ConvergenceReport {
    bool converged = false;
    std::optional<Point> limit_estimate;  // last orbit point when converged
    long iterations_used = 0;             // map applications performed
    double cauchy_tol = 0.0;
    std::optional<double> residual;       // distance(T z, z) at the estimate
    double orbit_diameter = 0.0;
    bool unbounded_suspect = false;
};

struct IterateResult {
    Orbit orbit;
    ConvergenceReport report;
};

/// Raised when an iterate leaves the domain box.
class OrbitEscape : public std::runtime_error {
public:
    OrbitEscape(long index, Point point)
        : std::runtime_error("orbit escaped domain at iterate " + std::to_string(index)),
          index_(index), point_(std::move(point)) {}
    long index() const { return index_; }
    const Point& point() const { return point_; }

private:
    long index_;
    Point point_;
};

/// Runs Picard iteration until kCauchyWindow consecutive step distances
/// fall below cauchy_tol (converged, estimate = last point) or max_iter
/// is reached. Small steps alone do not prove a Cauchy orbit, so the
/// report separates "converged (windowed Cauchy)" from "fixed point
/// certified" (residual <= kFixedPointResidualTol).
IterateResult iterate(const SelfMap& map, const Point& x0, long max_iter = kDefaultMaxIter,
                      double cauchy_tol = kDefaultCauchyTol);

/// distance(T z, z).
double fixed_point_residual(const SelfMap& map, const Point& z);

struct BoundedCheck {
    double diameter = 0.0;  // max distance from the start over the orbit
    bool unbounded_suspect = false;
};

/// Diameter estimate plus a growth heuristic: suspect when the distances
/// from the start are nondecreasing over the final half of the orbit and
/// still growing by more than 5% overall. Never claims unboundedness.
BoundedCheck orbit_bounded_check(const BMetricSpace& space, const Orbit& orbit);

/// Smallest i <= cap with distance(T^i x, z) < eps (i = 0 counts), or
/// nullopt when the orbit never enters the ball within cap steps.
std::optional<long> first_entry_index(const SelfMap& map, const Point& x, const Point& z,
                                      double eps, long cap);

struct EntryProfile {
    std::vector<std::optional<long>> entries;  // per sampled start
    long not_entered_count = 0;
    std::optional<long> max_entry;             // absent if any start never entered
    std::map<long, long> histogram;            // entry index -> count
    long cap = 0;
};

/// First-entry indices into B(z, eps) over `count` sampled starts in
/// B(z, K); the max is the empirical uniform bound.
EntryProfile uniform_entry_profile(const SelfMap& map, const Point& z, double k_radius,
                                   double eps, std::uint64_t seed, long count, long cap);

/// CSV with columns n, x1..xd, step_distance, distance_to_z (last two
/// blank where undefined).
void write_orbit_csv(std::ostream& out, const BMetricSpace& space, const Orbit& orbit,
                     const std::optional<Point>& z);

}  // namespace contraction
