#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "contraction/gallery.hpp"
#include "contraction/picard.hpp"
#include "contraction/verify.hpp"

#include <algorithm>

using namespace contraction;

namespace {

Point pt(double v) {
    Point p(1);
    p[0] = v;
    return p;
}

}  // namespace

TEST_CASE("registry: at least the seven documented instances are present") {
    const auto names = instance_names();
    CHECK(names.size() >= 7);
    for (const char* required : {"banach_half", "boyd_wong_rational", "jachymski_counterexample",
                                 "translation", "right_usc_jump", "kirk_varying", "rotation_2d"}) {
        CAPTURE(required);
        CHECK(std::find(names.begin(), names.end(), required) != names.end());
    }
}

TEST_CASE("banach_half: canonical contraction with full ground truth") {
    const Instance& inst = get_instance("banach_half");
    CHECK(inst.map.apply(pt(2.0))[0] == 1.0);
    CHECK((*inst.phi)(2.0) == 1.0);
    CHECK(*inst.banach_q == 0.5);
    REQUIRE(inst.truth.fixed_point.has_value());
    CHECK((*inst.truth.fixed_point)[0] == 0.0);
    CHECK(inst.truth.expected_classes.size() == 6);
    CHECK(inst.truth.expected_classes.count(ContractionClass::Leader) == 1);
}

TEST_CASE("jachymski_counterexample: no fixed point, limit 0, searches only") {
    const Instance& inst = get_instance("jachymski_counterexample");
    CHECK(inst.truth.fixed_point_known_absent);
    CHECK_FALSE(inst.truth.fixed_point.has_value());
    REQUIRE(inst.truth.picard_limit.has_value());
    CHECK((*inst.truth.picard_limit)[0] == 0.0);
    CHECK_FALSE(inst.phi.has_value());
    CHECK_FALSE(inst.phi_seq.has_value());
    CHECK(inst.classes_to_test ==
          std::vector<ContractionClass>{ContractionClass::Leader, ContractionClass::MKLeader});
    CHECK(inst.map.apply(pt(0.0))[0] == 1.0);
    CHECK(inst.map.apply(pt(0.5))[0] == 0.25);
}

TEST_CASE("translation: unbounded domain with a bounded sample region") {
    const Instance& inst = get_instance("translation");
    CHECK_FALSE(inst.space.domain.bounded());
    CHECK(inst.sample_region.bounded());
    CHECK(inst.truth.expected_non_classes.size() == 6);
    CHECK(inst.truth.fixed_point_known_absent);
}

TEST_CASE("unknown instances list what is available") {
    try {
        get_instance("no_such_instance");
        FAIL("expected UnknownInstanceError");
    } catch (const UnknownInstanceError& e) {
        const std::string what = e.what();
        CHECK(what.find("available") != std::string::npos);
        CHECK(what.find("banach_half") != std::string::npos);
    }
}

TEST_CASE("every instance passes the metric axioms on 10^4 triples") {
    for (const Instance& inst : gallery_instances()) {
        CAPTURE(inst.name);
        SampleSpec spec{101, 10000, inst.sample_region};
        CHECK(check_metric_axioms(inst.space, spec).all_pass());
    }
}

TEST_CASE("every instance maps its domain into itself on 10^4 samples") {
    for (const Instance& inst : gallery_instances()) {
        CAPTURE(inst.name);
        SampleSpec spec{103, 10000, inst.sample_region};
        CHECK(check_maps_domain_into_itself(inst.map, spec).pass);
    }
}

TEST_CASE("gallery expressions survive a serialize-parse round trip") {
    for (const Instance& inst : gallery_instances()) {
        CAPTURE(inst.name);
        for (const Expression& comp : inst.map.components()) {
            const Expression reparsed = Expression::parse(comp.to_string());
            CHECK(reparsed == comp);
        }
        if (inst.phi) {
            const Expression& expr = inst.phi->expression();
            CHECK(Expression::parse(expr.to_string()) == expr);
        }
        if (inst.phi_seq) {
            const Expression& family = inst.phi_seq->family_expression();
            CHECK(Expression::parse(family.to_string()) == family);
        }
    }
}

TEST_CASE("standard epsilon grid clips at the domain diameter") {
    CHECK(standard_epsilon_grid(get_instance("banach_half").space) ==
          std::vector<double>{0.01, 0.1, 0.5, 1.0});
    // diameter of [0,1] is 1, so eps=1 is excluded
    CHECK(standard_epsilon_grid(get_instance("jachymski_counterexample").space) ==
          std::vector<double>{0.01, 0.1, 0.5});
    // unbounded domain keeps the whole grid
    CHECK(standard_epsilon_grid(get_instance("translation").space).size() == 4);
}

TEST_CASE("right_usc_jump: the stored limit is right-usc but not usc at the breakpoint") {
    const Instance& inst = get_instance("right_usc_jump");
    REQUIRE(inst.phi.has_value());
    CHECK(right_usc_probe(*inst.phi, 1.0).verdict == ProbeVerdict::Consistent);
    CHECK(usc_probe(*inst.phi, 1.0).verdict == ProbeVerdict::Violated);
    CHECK(check_subcontractive(*inst.phi, 4.0, 512).pass);
    // the family dominates the map's n-step factor with equality at n=1
    REQUIRE(inst.phi_seq.has_value());
    CHECK(inst.phi_seq->member(1, 0.5) == 0.25);
    CHECK(inst.phi_seq->member(1, 2.0) == 1.0);
    CHECK(inst.phi_seq->member(3, 2.0) == doctest::Approx(5.0 / 6.0));  // jump branch wins
}

TEST_CASE("right_usc_jump: kirk inequality holds on sampled pairs") {
    const Instance& inst = get_instance("right_usc_jump");
    SampleSpec spec{107, 2000, inst.sample_region};
    const auto pairs = sample_pairs(inst.space, spec);
    CHECK(check_kirk_asymptotic(inst.map, *inst.phi_seq, pairs, 20).pass);
}

TEST_CASE("kirk_varying: family converges uniformly to the instance control") {
    const Instance& inst = get_instance("kirk_varying");
    REQUIRE(inst.phi_seq.has_value());
    const auto result = uniform_convergence_check(*inst.phi_seq, 4.0, 1e-2, 256);
    REQUIRE(result.reached);
    CHECK(result.first_index == 100);
    SampleSpec spec{109, 2000, inst.sample_region};
    CHECK(check_kirk_asymptotic(inst.map, *inst.phi_seq, sample_pairs(inst.space, spec), 20).pass);
}

TEST_CASE("instances expecting a leader certificate have convergent orbits") {
    for (const Instance& inst : gallery_instances()) {
        if (!inst.truth.expected_classes.count(ContractionClass::Leader)) continue;
        CAPTURE(inst.name);
        const auto starts = sample_points(inst.space, SampleSpec{113, 5, inst.sample_region});
        for (const Point& x0 : starts) {
            // 1e-8: the rational map converges sublinearly (steps ~ 1/n^2),
            // so the tolerance has to fit inside the iteration budget
            const auto result = iterate(inst.map, x0, 100000, 1e-8);
            CHECK(result.report.converged);
        }
    }
}

TEST_CASE("rotation_2d: exact isometry in both coordinates") {
    const Instance& inst = get_instance("rotation_2d");
    Point x(2);
    x << 1.5, -2.0;
    const Point image = inst.map.apply(x);
    CHECK(image[0] == 2.0);
    CHECK(image[1] == 1.5);
    SampleSpec spec{111, 2000, inst.sample_region};
    for (const auto& pair : sample_pairs(inst.space, spec)) {
        const double before = distance(inst.space, pair.x, pair.y);
        const double after = distance(inst.space, inst.map.apply(pair.x), inst.map.apply(pair.y));
        CHECK(before == after);  // coordinate swap/negate is exact
    }
}
