#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contraction {

using Point = Eigen::VectorXd;

/// Axis-aligned box; bounds may be +-infinity on any axis.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dimension() const { return static_cast<int>(lo.size()); }
    bool bounded() const;
    bool contains(const Point& p) const;
    bool contains_box(const Box& inner) const;

    static Box cube(int dimension, double lo, double hi);
};

enum class MetricKind { Euclidean, Manhattan, Chebyshev, PowerEuclidean };

std::string metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(const std::string& name);

/// A point set (axis-aligned box in R^d) with a distance function and a
/// declared relaxed-triangle coefficient s >= 1. The declared s is not
/// trusted: check_metric_axioms falsifies bad declarations on samples.
struct BMetricSpace {
    int dimension = 1;
    Box domain;
    MetricKind metric = MetricKind::Euclidean;
    double power_p = 1.0;        // exponent for PowerEuclidean, >= 1
    double coefficient_s = 1.0;  // declared coefficient, >= 1
};

/// s = 1 for the three standard metrics, 2^(p-1) for PowerEuclidean(p).
double default_coefficient(MetricKind kind, double power_p = 1.0);

/// Validates structural invariants (dimension >= 1, s >= 1, p >= 1,
/// matching box dimension). Throws std::invalid_argument.
void validate_space(const BMetricSpace& space);

/// Distance between x and y. Throws on dimension mismatch or non-finite
/// coordinates.
double distance(const BMetricSpace& space, const Point& x, const Point& y);

/// Diameter of the domain box under the space's metric (+inf if unbounded).
double domain_diameter(const BMetricSpace& space);

// ------------------------------------------------------------- sampling

/// Deterministic sample request. `count` is the number of points (or
/// pairs/triples, per operation); `region` must lie inside the domain.
struct SampleSpec {
    std::uint64_t seed = 0;
    long count = 0;
    Box region;
};

/// splitmix64-based generator: portable, identical streams for identical
/// seeds on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();
    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi);

private:
    std::uint64_t state_;
};

/// Deterministic uniform points in spec.region. Throws on count < 1,
/// unbounded region, or region outside the space's domain.
std::vector<Point> sample_points(const BMetricSpace& space, const SampleSpec& spec);

struct PointPair {
    Point x;
    Point y;
};

/// Deterministic uniform pairs in spec.region (count pairs).
std::vector<PointPair> sample_pairs(const BMetricSpace& space, const SampleSpec& spec);

/// Half uniform pairs, half constructed at controlled distances spread
/// over the bands [band_lo, band_lo + w) for each width w. Falls back to
/// uniform pairs where a band is unreachable inside the region, so the
/// count contract always holds.
std::vector<PointPair> sample_pairs_banded(const BMetricSpace& space, const SampleSpec& spec,
                                           std::span<const double> band_widths, double band_lo);

/// Single-band convenience: bands = {[band_lo, band_hi)}.
std::vector<PointPair> sample_pairs_banded(const BMetricSpace& space, const SampleSpec& spec,
                                           double band_lo, double band_hi);

/// Deterministic points in the open metric ball B(center, radius),
/// rejection-sampled from the bounding box intersected with the domain.
std::vector<Point> sample_points_in_ball(const BMetricSpace& space, const Point& center,
                                         double radius, std::uint64_t seed, long count);

// ---------------------------------------------------------- axiom check

struct AxiomViolation {
    std::string axiom;  // "non-negativity" | "symmetry" | "zero-iff-equal" | "b-triangle"
    std::vector<Point> tuple;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct AxiomReport {
    bool non_negativity = true;
    bool symmetry = true;
    bool zero_iff_equal = true;
    bool b_triangle = true;
    std::optional<AxiomViolation> first_violation;
    long triples_checked = 0;
    double coefficient_s = 1.0;

    bool all_pass() const { return non_negativity && symmetry && zero_iff_equal && b_triangle; }
};

/// Checks non-negativity, symmetry, zero-iff-equal and the relaxed
/// triangle inequality d(x,z) <= s*(d(x,y)+d(y,z)) on spec.count sampled
/// triples. Failures are reported, never thrown.
AxiomReport check_metric_axioms(const BMetricSpace& space, const SampleSpec& spec);

}  // namespace contraction
