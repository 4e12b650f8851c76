#pragma once

#include "contraction/expression.hpp"
#include "contraction/metric.hpp"

#include <span>
#include <string>
#include <vector>

namespace contraction {

/// Self-map T: X -> X given by one scalar expression per coordinate,
/// over variables x1..xd.
class SelfMap {
public:
    SelfMap() = default;
    SelfMap(BMetricSpace space, std::vector<Expression> components);
    static SelfMap parse(BMetricSpace space, std::span<const std::string> component_sources);

    const BMetricSpace& space() const { return space_; }
    int dimension() const { return space_.dimension; }
    const std::vector<Expression>& components() const { return components_; }

    /// T(x). Throws on dimension mismatch or a non-finite image.
    Point apply(const Point& x) const;

    /// T^n(x); n = 0 returns x.
    Point iterate(const Point& x, long n) const;

    /// d_i = distance(T^i x, T^i y) for i = 0..r_max.
    std::vector<double> pair_distance_trace(const Point& x, const Point& y, long r_max) const;

    bool valid() const { return !components_.empty(); }

private:
    BMetricSpace space_;
    std::vector<Expression> components_;  // bound to x1..xd
};

struct DomainClosureReport {
    bool pass = true;
    long points_checked = 0;
    std::vector<Point> escape;  // {from, to} when pass is false
};

/// Checks T(x) stays inside the domain box for sampled x.
DomainClosureReport check_maps_domain_into_itself(const SelfMap& map, const SampleSpec& spec);

}  // namespace contraction
