#include "contraction/selfmap.hpp"

#include <stdexcept>

namespace contraction {

namespace {

std::vector<std::string> coordinate_names(int dimension) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(dimension));
    for (int i = 1; i <= dimension; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

}  // namespace

SelfMap::SelfMap(BMetricSpace space, std::vector<Expression> components) : space_(std::move(space)) {
    validate_space(space_);
    if (static_cast<int>(components.size()) != space_.dimension)
        throw std::invalid_argument("self-map needs one component expression per coordinate");
    const std::vector<std::string> names = coordinate_names(space_.dimension);
    components_.reserve(components.size());
    for (const Expression& c : components) components_.push_back(c.bound(names));
}

SelfMap SelfMap::parse(BMetricSpace space, std::span<const std::string> component_sources) {
    std::vector<Expression> components;
    components.reserve(component_sources.size());
    for (const std::string& src : component_sources) components.push_back(Expression::parse(src));
    return SelfMap(std::move(space), std::move(components));
}

Point SelfMap::apply(const Point& x) const {
    if (x.size() != space_.dimension)
        throw std::invalid_argument("self-map input dimension mismatch");
    Point image(space_.dimension);
    const std::span<const double> env(x.data(), static_cast<std::size_t>(x.size()));
    for (int i = 0; i < space_.dimension; ++i) {
        image[i] = components_[static_cast<std::size_t>(i)].eval(env);
        if (!std::isfinite(image[i]))
            throw std::runtime_error("self-map produced a non-finite coordinate");
    }
    return image;
}

Point SelfMap::iterate(const Point& x, long n) const {
    Point current = x;
    for (long i = 0; i < n; ++i) current = apply(current);
    return current;
}

std::vector<double> SelfMap::pair_distance_trace(const Point& x, const Point& y, long r_max) const {
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(r_max) + 1);
    Point a = x;
    Point b = y;
    trace.push_back(distance(space_, a, b));
    for (long i = 1; i <= r_max; ++i) {
        a = apply(a);
        b = apply(b);
        trace.push_back(distance(space_, a, b));
    }
    return trace;
}

DomainClosureReport check_maps_domain_into_itself(const SelfMap& map, const SampleSpec& spec) {
    DomainClosureReport report;
    for (const Point& x : sample_points(map.space(), spec)) {
        const Point image = map.apply(x);
        ++report.points_checked;
        if (!map.space().domain.contains(image)) {
            report.pass = false;
            report.escape = {x, image};
            break;
        }
    }
    return report;
}

}  // namespace contraction
