#pragma once

#include "contraction/control.hpp"
#include "contraction/selfmap.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace contraction {

enum class ContractionClass { Banach, BoydWong, Kirk, MeirKeeler, MKLeader, Leader };

std::string contraction_class_name(ContractionClass c);
ContractionClass contraction_class_from_name(const std::string& name);
std::vector<ContractionClass> all_contraction_classes();

/// Known behavior of a registered instance; drives regression exit codes.
struct GroundTruth {
    std::optional<Point> fixed_point;       // engaged iff a fixed point exists...
    bool fixed_point_known_absent = false;  // ...or provably does not ("none")
    std::optional<Point> picard_limit;      // absent = "unknown"
    std::set<ContractionClass> expected_classes;
    std::set<ContractionClass> expected_non_classes;
    std::optional<bool> expected_nonexpansive;
};

struct Instance {
    std::string name;
    std::string summary;
    BMetricSpace space;
    SelfMap map;
    std::optional<ControlFunction> phi;
    std::optional<ControlSequence> phi_seq;
    std::optional<double> banach_q;
    std::vector<ContractionClass> classes_to_test;
    Box sample_region;  // bounded default sampling region inside the domain
    GroundTruth truth;
};

class UnknownInstanceError : public std::runtime_error {
public:
    UnknownInstanceError(const std::string& name, const std::vector<std::string>& available);
};

/// Immutable built-in registry.
const std::vector<Instance>& gallery_instances();
const Instance& get_instance(std::string_view name);
std::vector<std::string> instance_names();

/// {0.01, 0.1, 0.5, 1} intersected with (0, domain diameter).
std::vector<double> standard_epsilon_grid(const BMetricSpace& space);

}  // namespace contraction
