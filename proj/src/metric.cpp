#include "contraction/metric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace contraction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack absorbing rounding in the b-triangle sum; violations in
// practice exceed this by many orders of magnitude.
constexpr double kTriangleSlack = 1e-12;

void require_point_ok(const BMetricSpace& space, const Point& p) {
    if (p.size() != space.dimension)
        throw std::invalid_argument("point dimension mismatch: expected " +
                                    std::to_string(space.dimension) + ", got " +
                                    std::to_string(p.size()));
    if (!p.allFinite())
        throw std::invalid_argument("point has non-finite coordinates");
}

}  // namespace

bool Box::bounded() const {
    return lo.allFinite() && hi.allFinite();
}

bool Box::contains(const Point& p) const {
    if (p.size() != lo.size()) return false;
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
}

bool Box::contains_box(const Box& inner) const {
    if (inner.lo.size() != lo.size()) return false;
    return (inner.lo.array() >= lo.array()).all() && (inner.hi.array() <= hi.array()).all();
}

Box Box::cube(int dimension, double lo, double hi) {
    Box b;
    b.lo = Eigen::VectorXd::Constant(dimension, lo);
    b.hi = Eigen::VectorXd::Constant(dimension, hi);
    return b;
}

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::Manhattan: return "manhattan";
        case MetricKind::Chebyshev: return "chebyshev";
        case MetricKind::PowerEuclidean: return "power_euclidean";
    }
    return "unknown";
}

MetricKind metric_kind_from_name(const std::string& name) {
    if (name == "euclidean") return MetricKind::Euclidean;
    if (name == "manhattan") return MetricKind::Manhattan;
    if (name == "chebyshev") return MetricKind::Chebyshev;
    if (name == "power_euclidean") return MetricKind::PowerEuclidean;
    throw std::invalid_argument("unknown metric kind '" + name + "'");
}

double default_coefficient(MetricKind kind, double power_p) {
    if (kind == MetricKind::PowerEuclidean) return std::pow(2.0, power_p - 1.0);
    return 1.0;
}

void validate_space(const BMetricSpace& space) {
    if (space.dimension < 1)
        throw std::invalid_argument("space dimension must be >= 1");
    if (space.domain.lo.size() != space.dimension || space.domain.hi.size() != space.dimension)
        throw std::invalid_argument("domain box dimension does not match space dimension");
    if ((space.domain.lo.array() > space.domain.hi.array()).any())
        throw std::invalid_argument("domain box has lo > hi");
    if (!(space.coefficient_s >= 1.0))
        throw std::invalid_argument("coefficient_s must be >= 1");
    if (space.metric == MetricKind::PowerEuclidean && !(space.power_p >= 1.0))
        throw std::invalid_argument("power_euclidean exponent must be >= 1");
}

double distance(const BMetricSpace& space, const Point& x, const Point& y) {
    require_point_ok(space, x);
    require_point_ok(space, y);
    const Eigen::VectorXd diff = x - y;
    switch (space.metric) {
        case MetricKind::Euclidean: return diff.norm();
        case MetricKind::Manhattan: return diff.lpNorm<1>();
        case MetricKind::Chebyshev: return diff.lpNorm<Eigen::Infinity>();
        case MetricKind::PowerEuclidean: return std::pow(diff.norm(), space.power_p);
    }
    return 0.0;
}

double domain_diameter(const BMetricSpace& space) {
    if (!space.domain.bounded()) return kInf;
    const Eigen::VectorXd span = space.domain.hi - space.domain.lo;
    switch (space.metric) {
        case MetricKind::Euclidean: return span.norm();
        case MetricKind::Manhattan: return span.lpNorm<1>();
        case MetricKind::Chebyshev: return span.lpNorm<Eigen::Infinity>();
        case MetricKind::PowerEuclidean: return std::pow(span.norm(), space.power_p);
    }
    return 0.0;
}

// -------------------------------------------------------------- sampling

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_in(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
}

namespace {

void require_spec_ok(const BMetricSpace& space, const SampleSpec& spec) {
    if (spec.count < 1)
        throw std::invalid_argument("sample count must be >= 1");
    if (spec.region.dimension() != space.dimension)
        throw std::invalid_argument("sample region dimension mismatch");
    if (!spec.region.bounded())
        throw std::invalid_argument("sample region must be bounded");
    if (!space.domain.contains_box(spec.region))
        throw std::invalid_argument("sample region must lie inside the space domain");
}

Point draw_point(SplitMix64& rng, const Box& region) {
    Point p(region.dimension());
    for (int i = 0; i < region.dimension(); ++i)
        p[i] = rng.next_in(region.lo[i], region.hi[i]);
    return p;
}

}  // namespace

std::vector<Point> sample_points(const BMetricSpace& space, const SampleSpec& spec) {
    require_spec_ok(space, spec);
    SplitMix64 rng(spec.seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (long i = 0; i < spec.count; ++i) out.push_back(draw_point(rng, spec.region));
    return out;
}

std::vector<PointPair> sample_pairs(const BMetricSpace& space, const SampleSpec& spec) {
    require_spec_ok(space, spec);
    SplitMix64 rng(spec.seed);
    std::vector<PointPair> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (long i = 0; i < spec.count; ++i) {
        PointPair pair;
        pair.x = draw_point(rng, spec.region);
        pair.y = draw_point(rng, spec.region);
        out.push_back(std::move(pair));
    }
    return out;
}

namespace {

// Displacement whose metric length is exactly `length` (up to rounding):
// a random direction rescaled per metric kind.
Eigen::VectorXd displacement(SplitMix64& rng, const BMetricSpace& space, double length) {
    Eigen::VectorXd dir(space.dimension);
    double norm = 0.0;
    do {
        for (int i = 0; i < space.dimension; ++i) dir[i] = rng.next_in(-1.0, 1.0);
        norm = dir.norm();
    } while (norm < 0.1);
    switch (space.metric) {
        case MetricKind::Euclidean: return dir * (length / norm);
        case MetricKind::Manhattan: return dir * (length / dir.lpNorm<1>());
        case MetricKind::Chebyshev: return dir * (length / dir.lpNorm<Eigen::Infinity>());
        case MetricKind::PowerEuclidean:
            return dir * (std::pow(length, 1.0 / space.power_p) / norm);
    }
    return dir;
}

}  // namespace

std::vector<PointPair> sample_pairs_banded(const BMetricSpace& space, const SampleSpec& spec,
                                           std::span<const double> band_widths, double band_lo) {
    require_spec_ok(space, spec);
    if (!(band_lo >= 0.0)) throw std::invalid_argument("band_lo must be >= 0");
    for (double w : band_widths)
        if (!(w > 0.0)) throw std::invalid_argument("band widths must be positive");

    SplitMix64 rng(spec.seed);
    std::vector<PointPair> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    const long uniform_count = band_widths.empty() ? spec.count : spec.count / 2;
    for (long i = 0; i < uniform_count; ++i)
        out.push_back(PointPair{draw_point(rng, spec.region), draw_point(rng, spec.region)});

    // The remaining pairs are constructed at controlled distances, spread
    // over every band [band_lo, band_lo + w): the contraction guards bite
    // exactly there, and pure rejection cannot hit narrow bands.
    constexpr int kMaxAttempts = 64;
    for (long i = uniform_count; i < spec.count; ++i) {
        const double width = band_widths[static_cast<std::size_t>(i) % band_widths.size()];
        PointPair pair{draw_point(rng, spec.region), draw_point(rng, spec.region)};
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            const Point x = draw_point(rng, spec.region);
            const double target = band_lo + width * (0.05 + 0.9 * rng.next_unit());
            const Point y = x + displacement(rng, space, target);
            if (!spec.region.contains(y)) continue;
            const double d = distance(space, x, y);
            if (d >= band_lo && d < band_lo + width) {
                pair = PointPair{x, y};
                break;
            }
        }
        out.push_back(std::move(pair));  // uniform fallback when the band is unreachable
    }
    return out;
}

std::vector<PointPair> sample_pairs_banded(const BMetricSpace& space, const SampleSpec& spec,
                                           double band_lo, double band_hi) {
    if (!(band_hi > band_lo))
        throw std::invalid_argument("distance band must satisfy lo < hi");
    const double width[1] = {band_hi - band_lo};
    return sample_pairs_banded(space, spec, width, band_lo);
}

std::vector<Point> sample_points_in_ball(const BMetricSpace& space, const Point& center,
                                         double radius, std::uint64_t seed, long count) {
    require_point_ok(space, center);
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");

    // Coordinate half-width of the ball's bounding box.
    double half = radius;
    if (space.metric == MetricKind::PowerEuclidean)
        half = std::pow(radius, 1.0 / space.power_p);

    Box box;
    box.lo = (center.array() - half).cwiseMax(space.domain.lo.array());
    box.hi = (center.array() + half).cwiseMin(space.domain.hi.array());
    if ((box.lo.array() > box.hi.array()).any())
        throw std::invalid_argument("ball does not intersect the domain");

    SplitMix64 rng(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    constexpr int kMaxAttempts = 100000;
    for (long i = 0; i < count; ++i) {
        Point p;
        bool found = false;
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            p = draw_point(rng, box);
            if (distance(space, p, center) < radius) { found = true; break; }
        }
        if (!found)
            throw std::runtime_error("ball rejection sampling failed to hit B(z, r)");
        out.push_back(std::move(p));
    }
    return out;
}

// ------------------------------------------------------------ axiom check

AxiomReport check_metric_axioms(const BMetricSpace& space, const SampleSpec& spec) {
    require_spec_ok(space, spec);
    AxiomReport report;
    report.coefficient_s = space.coefficient_s;
    SplitMix64 rng(spec.seed);

    auto record = [&report](const std::string& axiom, std::vector<Point> tuple, double lhs, double rhs) {
        if (!report.first_violation)
            report.first_violation = AxiomViolation{axiom, std::move(tuple), lhs, rhs};
    };

    for (long i = 0; i < spec.count; ++i) {
        const Point x = draw_point(rng, spec.region);
        const Point y = draw_point(rng, spec.region);
        const Point z = draw_point(rng, spec.region);
        ++report.triples_checked;

        const double dxy = distance(space, x, y);
        const double dyx = distance(space, y, x);
        const double dyz = distance(space, y, z);
        const double dxz = distance(space, x, z);

        if (dxy < 0.0 || dyz < 0.0 || dxz < 0.0) {
            report.non_negativity = false;
            record("non-negativity", {x, y}, dxy, 0.0);
        }
        if (dxy != dyx) {
            report.symmetry = false;
            record("symmetry", {x, y}, dxy, dyx);
        }
        if (distance(space, x, x) != 0.0) {
            report.zero_iff_equal = false;
            record("zero-iff-equal", {x, x}, distance(space, x, x), 0.0);
        }
        if (x != y && dxy == 0.0) {
            report.zero_iff_equal = false;
            record("zero-iff-equal", {x, y}, dxy, 0.0);
        }
        const double bound = space.coefficient_s * (dxy + dyz);
        if (dxz > bound * (1.0 + kTriangleSlack)) {
            report.b_triangle = false;
            record("b-triangle", {x, y, z}, dxz, bound);
        }
    }
    return report;
}

}  // namespace contraction
