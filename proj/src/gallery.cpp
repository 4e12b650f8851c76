#include "contraction/gallery.hpp"

#include <limits>
#include <sstream>

namespace contraction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BMetricSpace euclidean_interval(double lo, double hi) {
    BMetricSpace space;
    space.dimension = 1;
    space.domain = Box::cube(1, lo, hi);
    space.metric = MetricKind::Euclidean;
    space.coefficient_s = 1.0;
    return space;
}

Point point1(double v) {
    Point p(1);
    p[0] = v;
    return p;
}

Instance make_banach_half() {
    Instance inst;
    inst.name = "banach_half";
    inst.summary = "T(x)=x/2 on [-4,4]; textbook contraction, every class certifies";
    inst.space = euclidean_interval(-4.0, 4.0);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"x1/2"});
    inst.phi = ControlFunction::parse("t/2", {.subcontractive = true, .right_usc = true, .usc = true, .zero_at_zero = true});
    inst.phi_seq = ControlSequence::parse("t/2^n", "0");
    inst.banach_q = 0.5;
    inst.classes_to_test = all_contraction_classes();
    inst.sample_region = inst.space.domain;
    inst.truth.fixed_point = point1(0.0);
    inst.truth.picard_limit = point1(0.0);
    inst.truth.expected_classes = {ContractionClass::Banach, ContractionClass::BoydWong,
                                   ContractionClass::Kirk, ContractionClass::MeirKeeler,
                                   ContractionClass::MKLeader, ContractionClass::Leader};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

Instance make_boyd_wong_rational() {
    Instance inst;
    inst.name = "boyd_wong_rational";
    inst.summary = "T(x)=x/(1+x) on [0,100] with phi(t)=t/(1+t); no linear factor works";
    inst.space = euclidean_interval(0.0, 100.0);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"x1/(1 + x1)"});
    inst.phi = ControlFunction::parse("t/(1 + t)", {.subcontractive = true, .right_usc = true, .usc = true, .zero_at_zero = true});
    inst.phi_seq = ControlSequence::constant(*inst.phi);
    inst.classes_to_test = {ContractionClass::BoydWong, ContractionClass::Kirk,
                            ContractionClass::MeirKeeler, ContractionClass::MKLeader,
                            ContractionClass::Leader};
    inst.sample_region = inst.space.domain;
    inst.truth.fixed_point = point1(0.0);
    inst.truth.picard_limit = point1(0.0);
    inst.truth.expected_classes = {ContractionClass::BoydWong, ContractionClass::Kirk,
                                   ContractionClass::MeirKeeler, ContractionClass::MKLeader,
                                   ContractionClass::Leader};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

Instance make_jachymski_counterexample() {
    Instance inst;
    inst.name = "jachymski_counterexample";
    inst.summary = "T(0)=1, T(x)=x/2 on [0,1]; orbits converge to 0 yet no fixed point exists";
    inst.space = euclidean_interval(0.0, 1.0);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"if x1 = 0 then 1 else x1/2"});
    // The control family behind this map is not specified anywhere usable;
    // only the guard-based searches run for it.
    inst.classes_to_test = {ContractionClass::Leader, ContractionClass::MKLeader};
    inst.sample_region = inst.space.domain;
    inst.truth.fixed_point_known_absent = true;
    inst.truth.picard_limit = point1(0.0);
    inst.truth.expected_classes = {ContractionClass::Leader, ContractionClass::MKLeader};
    return inst;
}

Instance make_translation() {
    Instance inst;
    inst.name = "translation";
    inst.summary = "T(x)=x+1 on R; isometry, negative control for every class";
    inst.space = euclidean_interval(-kInf, kInf);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"x1 + 1"});
    inst.phi = ControlFunction::parse("t/2", {.subcontractive = true});
    inst.phi_seq = ControlSequence::constant(*inst.phi);
    inst.banach_q = 0.9;
    inst.classes_to_test = all_contraction_classes();
    inst.sample_region = Box::cube(1, -10.0, 10.0);
    inst.truth.fixed_point_known_absent = true;
    inst.truth.expected_non_classes = {ContractionClass::Banach, ContractionClass::BoydWong,
                                       ContractionClass::Kirk, ContractionClass::MeirKeeler,
                                       ContractionClass::MKLeader, ContractionClass::Leader};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

Instance make_right_usc_jump() {
    Instance inst;
    inst.name = "right_usc_jump";
    inst.summary = "T(x)=x/2 with a control limit that is right-usc but not usc at t=1";
    inst.space = euclidean_interval(-4.0, 4.0);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"x1/2"});
    // Limit jumps down at t=1: value 5/12 < left limsup 1/2, right limit 5/12.
    const std::string jump = "if t < 1 then t/2 else 5*t/12";
    inst.phi = ControlFunction::parse(jump, {.subcontractive = true, .right_usc = true, .zero_at_zero = true});
    // Family dominates the map's n-step factor while converging uniformly
    // to the jump limit on bounded intervals (error <= b/2^n).
    inst.phi_seq = ControlSequence::parse("max(t/2^n, " + jump + ")", jump);
    inst.classes_to_test = {ContractionClass::BoydWong, ContractionClass::Kirk,
                            ContractionClass::MeirKeeler, ContractionClass::MKLeader,
                            ContractionClass::Leader};
    inst.sample_region = inst.space.domain;
    inst.truth.fixed_point = point1(0.0);
    inst.truth.picard_limit = point1(0.0);
    inst.truth.expected_classes = {ContractionClass::Kirk, ContractionClass::MeirKeeler,
                                   ContractionClass::MKLeader, ContractionClass::Leader};
    // The jump limit sits below t/2 on [1, inf), so the one-step
    // inequality against this phi is falsifiable even though T itself is
    // a textbook contraction.
    inst.truth.expected_non_classes = {ContractionClass::BoydWong};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

Instance make_kirk_varying() {
    Instance inst;
    inst.name = "kirk_varying";
    inst.summary = "T(x)=x/2 with perturbed family t/2 + 1/n converging uniformly to t/2";
    inst.space = euclidean_interval(-4.0, 4.0);
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"x1/2"});
    inst.phi = ControlFunction::parse("t/2", {.subcontractive = true, .right_usc = true, .usc = true, .zero_at_zero = true});
    inst.phi_seq = ControlSequence::parse("t/2 + 1/n", "t/2");
    inst.banach_q = 0.5;
    inst.classes_to_test = all_contraction_classes();
    inst.sample_region = inst.space.domain;
    inst.truth.fixed_point = point1(0.0);
    inst.truth.picard_limit = point1(0.0);
    inst.truth.expected_classes = {ContractionClass::Banach, ContractionClass::BoydWong,
                                   ContractionClass::Kirk, ContractionClass::MeirKeeler,
                                   ContractionClass::MKLeader, ContractionClass::Leader};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

Instance make_rotation_2d() {
    Instance inst;
    inst.name = "rotation_2d";
    inst.summary = "quarter-turn rotation of [-5,5]^2; planar isometry, negative control";
    BMetricSpace space;
    space.dimension = 2;
    space.domain = Box::cube(2, -5.0, 5.0);
    space.metric = MetricKind::Euclidean;
    space.coefficient_s = 1.0;
    inst.space = space;
    inst.map = SelfMap::parse(inst.space, std::vector<std::string>{"-x2", "x1"});
    inst.phi = ControlFunction::parse("t/2", {.subcontractive = true});
    inst.phi_seq = ControlSequence::constant(*inst.phi);
    inst.banach_q = 0.9;
    inst.classes_to_test = all_contraction_classes();
    inst.sample_region = inst.space.domain;
    Point origin(2);
    origin << 0.0, 0.0;
    inst.truth.fixed_point = origin;  // fixed, but not a contractive fixed point
    inst.truth.expected_non_classes = {ContractionClass::Banach, ContractionClass::BoydWong,
                                       ContractionClass::Kirk, ContractionClass::MeirKeeler,
                                       ContractionClass::MKLeader, ContractionClass::Leader};
    inst.truth.expected_nonexpansive = true;
    return inst;
}

std::vector<Instance> build_registry() {
    std::vector<Instance> registry;
    registry.push_back(make_banach_half());
    registry.push_back(make_boyd_wong_rational());
    registry.push_back(make_jachymski_counterexample());
    registry.push_back(make_translation());
    registry.push_back(make_right_usc_jump());
    registry.push_back(make_kirk_varying());
    registry.push_back(make_rotation_2d());
    return registry;
}

}  // namespace

std::string contraction_class_name(ContractionClass c) {
    switch (c) {
        case ContractionClass::Banach: return "banach";
        case ContractionClass::BoydWong: return "boyd_wong";
        case ContractionClass::Kirk: return "kirk";
        case ContractionClass::MeirKeeler: return "meir_keeler";
        case ContractionClass::MKLeader: return "mk_leader";
        case ContractionClass::Leader: return "leader";
    }
    return "unknown";
}

ContractionClass contraction_class_from_name(const std::string& name) {
    for (ContractionClass c : all_contraction_classes())
        if (contraction_class_name(c) == name) return c;
    throw std::invalid_argument("unknown contraction class '" + name + "'");
}

std::vector<ContractionClass> all_contraction_classes() {
    return {ContractionClass::Banach,     ContractionClass::BoydWong, ContractionClass::Kirk,
            ContractionClass::MeirKeeler, ContractionClass::MKLeader, ContractionClass::Leader};
}

UnknownInstanceError::UnknownInstanceError(const std::string& name,
                                           const std::vector<std::string>& available)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "unknown instance '" << name << "'; available:";
          for (const std::string& a : available) msg << ' ' << a;
          return msg.str();
      }()) {}

const std::vector<Instance>& gallery_instances() {
    static const std::vector<Instance> registry = build_registry();
    return registry;
}

const Instance& get_instance(std::string_view name) {
    for (const Instance& inst : gallery_instances())
        if (inst.name == name) return inst;
    throw UnknownInstanceError(std::string(name), instance_names());
}

std::vector<std::string> instance_names() {
    std::vector<std::string> names;
    for (const Instance& inst : gallery_instances()) names.push_back(inst.name);
    return names;
}

std::vector<double> standard_epsilon_grid(const BMetricSpace& space) {
    const double diam = domain_diameter(space);
    std::vector<double> grid;
    for (double eps : {0.01, 0.1, 0.5, 1.0})
        if (eps < diam) grid.push_back(eps);
    return grid;
}

}  // namespace contraction
