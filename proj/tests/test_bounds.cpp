#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "contraction/bounds.hpp"

#include <cmath>

using namespace contraction;

namespace {

SelfMap map1(double lo, double hi, const std::string& expr) {
    BMetricSpace space;
    space.dimension = 1;
    space.domain = Box::cube(1, lo, hi);
    return SelfMap::parse(space, std::vector<std::string>{expr});
}

Point pt(double v) {
    Point p(1);
    p[0] = v;
    return p;
}

void check_record_invariants(const RetractBound& b) {
    CHECK(2.0 * b.delta < b.f_min);
    CHECK(b.delta < b.epsilon / 4.0);
    CHECK(static_cast<double>(b.p) > b.k_radius / b.delta + 1.0);
    CHECK(b.m == b.s * b.p);
    CHECK(b.f_min > 0.0);
    CHECK(b.delta > 0.0);
    CHECK(b.m1 >= 1);
    CHECK(b.m2 >= 1);
    CHECK(b.s >= 1);
    CHECK(b.p >= 1);
    CHECK(b.m >= 1);
}

}  // namespace

TEST_CASE("retract_bound: halving control with constant family, eps=0.1, K=1") {
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::constant(phi);
    const RetractBound bound = retract_bound(phi, seq, 0.1, 1.0);
    // f_min = f(0.05) = 0.025; delta = min(f_min, eps/2)/4; p = floor(1/delta + 1) + 1
    CHECK(bound.f_min == doctest::Approx(0.025).epsilon(1e-9));
    CHECK(bound.delta == doctest::Approx(0.00625).epsilon(1e-12));
    CHECK(bound.m2 == 1);
    CHECK(bound.s == 1);
    CHECK(bound.p == 162);
    CHECK(bound.m == 162);
    check_record_invariants(bound);
}

TEST_CASE("retract_bound: flat gap control, eps=0.2, K=1") {
    const ControlFunction phi = ControlFunction::parse("max(t - 0.1, 0)");
    const ControlSequence seq = ControlSequence::constant(phi);
    const RetractBound bound = retract_bound(phi, seq, 0.2, 1.0);
    // on [0.1, 1] the gap is identically 0.1; delta = 0.025; K/delta + 1 = 41
    CHECK(bound.f_min == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(bound.delta == doctest::Approx(0.025).epsilon(1e-9));
    CHECK(bound.p == 42);
    CHECK(bound.s == 1);
    CHECK(bound.m == 42);
    check_record_invariants(bound);
}

TEST_CASE("retract_bound: precondition and failure modes") {
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::constant(phi);
    CHECK_THROWS_AS(retract_bound(phi, seq, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(retract_bound(phi, seq, 2.0, 1.0), std::invalid_argument);

    const ControlFunction identity = ControlFunction::parse("t");
    const ControlSequence id_seq = ControlSequence::constant(identity);
    CHECK_THROWS_WITH_AS(retract_bound(identity, id_seq, 0.1, 1.0),
                         doctest::Contains("gap infimum nonpositive"), std::runtime_error);

    // family stuck a distance 1 away from its limit: no m2 exists
    const ControlSequence stuck = ControlSequence::parse("t/2 + 1", "t/2");
    CHECK_THROWS_WITH_AS(retract_bound(phi, stuck, 0.1, 1.0, 64),
                         doctest::Contains("uniform convergence index not found"),
                         std::runtime_error);
}

TEST_CASE("retract_bound: monotone in K and in 1/eps") {
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::constant(phi);
    long previous = 0;
    for (double k : {0.5, 1.0, 2.0, 4.0}) {
        const RetractBound bound = retract_bound(phi, seq, 0.1, k);
        check_record_invariants(bound);
        CHECK(bound.m >= previous);
        previous = bound.m;
    }
    previous = 0;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const RetractBound bound = retract_bound(phi, seq, eps, 1.0);
        check_record_invariants(bound);
        CHECK(bound.m >= previous);
        previous = bound.m;
    }
}

TEST_CASE("invariance_index_constructive: constant family gives m=1") {
    const ControlFunction phi = ControlFunction::parse("t/2");
    const InvarianceIndex inv =
        invariance_index_constructive(phi, ControlSequence::constant(phi), 0.1, 1.0);
    CHECK(inv.index == 1);
    CHECK(inv.mode == InvarianceMode::Constructive);
    CHECK_FALSE(inv.justification.empty());
}

TEST_CASE("invariance_index_constructive: perturbed family needs 1/n <= delta") {
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::parse("t/2 + 1/n", "t/2");
    const RetractBound bound = retract_bound(phi, seq, 0.1, 1.0);
    const InvarianceIndex inv = invariance_index_constructive(phi, seq, 0.1, 1.0);
    // oracle: recompute the smallest n whose tail stays within the module's delta
    long expected = 1;
    for (long n = bound.uniform_n_max; n >= 1; --n) {
        if (1.0 / static_cast<double>(n) > bound.delta + kValueTol) {
            expected = n + 1;
            break;
        }
    }
    CHECK(inv.index == expected);
    CHECK(expected == 160);  // 1/160 = 0.00625 = delta
}

TEST_CASE("invariance_index_constructive: propagates the gap failure") {
    const ControlFunction identity = ControlFunction::parse("t");
    CHECK_THROWS_AS(invariance_index_constructive(identity, ControlSequence::constant(identity),
                                                  0.1, 1.0),
                    std::runtime_error);
}

TEST_CASE("invariance_index_empirical: halving holds from the first iterate") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const InvarianceIndex inv = invariance_index_empirical(half, pt(0.0), 0.5, 51, 400, 50);
    CHECK(inv.index == 1);
    CHECK(inv.mode == InvarianceMode::Empirical);
}

TEST_CASE("invariance_index_empirical: sign-flipping contraction still holds at m=1") {
    const SelfMap flip = map1(-2.0, 2.0, "-0.9*x1");
    const InvarianceIndex inv = invariance_index_empirical(flip, pt(0.0), 1.0, 53, 400, 50);
    CHECK(inv.index == 1);
    // brute-force confirmation on fresh samples
    for (const Point& x : sample_points_in_ball(flip.space(), pt(0.0), 1.0, 99, 100)) {
        Point current = x;
        for (int n = 1; n <= 50; ++n) {
            current = flip.apply(current);
            CHECK(distance(flip.space(), current, pt(0.0)) < 1.0);
        }
    }
}

TEST_CASE("invariance_index_empirical: rejects an uncertified center") {
    const SelfMap counter = map1(0.0, 1.0, "if x1 = 0 then 1 else x1/2");
    CHECK_THROWS_AS(invariance_index_empirical(counter, pt(0.0), 0.5, 55, 100, 50),
                    std::invalid_argument);
}

TEST_CASE("verify_retract_bound: halving bound passes with worst entry 4") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const ControlFunction phi = ControlFunction::parse("t/2");
    const RetractBound bound = retract_bound(phi, ControlSequence::constant(phi), 0.1, 1.0);
    const RetractVerification v = verify_retract_bound(half, pt(0.0), bound, 57, 1000);
    CHECK(v.pass);
    CHECK(v.worst_entry == 4);
    CHECK(v.not_entered == 0);
    CHECK(v.samples == 1000);
}

TEST_CASE("verify_retract_bound: a hand-shrunk bound fails") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const ControlFunction phi = ControlFunction::parse("t/2");
    RetractBound bound = retract_bound(phi, ControlSequence::constant(phi), 0.1, 1.0);
    bound.m = 2;  // adversarial: the true worst entry is 4
    const RetractVerification v = verify_retract_bound(half, pt(0.0), bound, 57, 1000);
    CHECK_FALSE(v.pass);
}

TEST_CASE("verify_retract_bound: trivially passes when the start ball sits inside the target") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    RetractBound bound;
    bound.epsilon = 0.5;
    bound.k_radius = 0.4;
    bound.m = 10;
    const RetractVerification v = verify_retract_bound(half, pt(0.0), bound, 59, 200);
    CHECK(v.pass);
    CHECK(v.worst_entry == 0);
}

TEST_CASE("verify_uniform_convergence: composed bound 163 holds for halving") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::constant(phi);
    const RetractBound bound = retract_bound(phi, seq, 0.1, 1.0);
    const InvarianceIndex inv = invariance_index_constructive(phi, seq, 0.1, 1.0);
    const UniformVerification v =
        verify_uniform_convergence(half, pt(0.0), 0.1, 1.0, bound, inv, 61, 500);
    CHECK(v.pass);
    CHECK(v.composed_bound == 163);
    CHECK(v.cap == 195);
}

TEST_CASE("verify_uniform_convergence: rejects a map without a certified fixed point") {
    const SelfMap shift = map1(-1e9, 1e9, "x1 + 1");
    RetractBound bound;
    bound.epsilon = 0.1;
    bound.k_radius = 1.0;
    bound.m = 10;
    InvarianceIndex inv;
    inv.epsilon = 0.1;
    inv.index = 1;
    CHECK_THROWS_AS(verify_uniform_convergence(shift, pt(0.0), 0.1, 1.0, bound, inv, 63, 100),
                    std::invalid_argument);
}

TEST_CASE("verify_uniform_convergence: degenerate eps > K passes") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::constant(phi);
    const RetractBound bound = retract_bound(phi, seq, 0.1, 1.0);
    InvarianceIndex inv;
    inv.epsilon = 2.0;
    inv.index = 1;
    const UniformVerification v =
        verify_uniform_convergence(half, pt(0.0), 2.0, 1.0, bound, inv, 63, 200);
    CHECK(v.pass);
}

TEST_CASE("constructive invariance index satisfies the empirical sweep") {
    const SelfMap half = map1(-4.0, 4.0, "x1/2");
    const ControlFunction phi = ControlFunction::parse("t/2");
    const ControlSequence seq = ControlSequence::parse("t/2 + 1/n", "t/2");
    const InvarianceIndex inv = invariance_index_constructive(phi, seq, 0.1, 1.0);
    for (const Point& x : sample_points_in_ball(half.space(), pt(0.0), 0.1, 67, 100)) {
        Point current = half.iterate(x, inv.index);
        for (long n = inv.index; n <= inv.index + 40; ++n) {
            CHECK(distance(half.space(), current, pt(0.0)) < 0.1);
            current = half.apply(current);
        }
    }
}
