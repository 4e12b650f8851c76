// Acceptance suite: one criterion per function, one PASS/FAIL line each,
// nonzero exit when anything fails. Tolerances are pinned in the checks.

#include "contraction/bounds.hpp"
#include "contraction/experiment.hpp"
#include "contraction/gallery.hpp"
#include "contraction/picard.hpp"
#include "contraction/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace contraction;
using nlohmann::json;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Criterion> g_results;

class Checker {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            failed_ = true;
            if (!first_failure_.empty()) first_failure_ += "; ";
            first_failure_ += what;
        }
    }
    void note(const std::string& text) { notes_ = notes_.empty() ? text : notes_ + "; " + text; }
    bool failed() const { return failed_; }
    std::string detail() const { return failed_ ? first_failure_ : notes_; }

private:
    bool failed_ = false;
    std::string first_failure_;
    std::string notes_;
};

void run_criterion(int id, const std::string& name, const std::function<void(Checker&)>& body) {
    Checker checker;
    const auto started = std::chrono::steady_clock::now();
    try {
        body(checker);
    } catch (const std::exception& e) {
        checker.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    g_results.push_back({id, name, !checker.failed(), checker.detail(), seconds});
}

Point pt(double v) {
    Point p(1);
    p[0] = v;
    return p;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Shared gate used by criteria 2 and 6: kirk check, subcontractivity and
// right-usc probes on the limit.
bool passes_kirk_gate(const Instance& inst, Checker& checker, bool must_pass) {
    if (!inst.phi_seq) return false;
    SampleSpec spec{4242, 10000, inst.sample_region};
    const auto pairs = sample_pairs(inst.space, spec);
    const KirkReport kirk = check_kirk_asymptotic(inst.map, *inst.phi_seq, pairs, 20);
    if (!kirk.pass) {
        if (must_pass) checker.require(false, inst.name + ": kirk check unexpectedly failed");
        return false;
    }
    const ControlFunction& limit = inst.phi_seq->limit();
    const double diam = domain_diameter(inst.space);
    const double b = std::isfinite(diam) ? std::min(diam, 10.0) : 10.0;
    if (!check_subcontractive(limit, b, 1024).pass) {
        if (must_pass) checker.require(false, inst.name + ": limit not subcontractive");
        return false;
    }
    for (int i = 1; i <= 20; ++i) {
        const double t = static_cast<double>(i) / 10.0;
        if (t >= b) break;
        if (right_usc_probe(limit, t).verdict != ProbeVerdict::Consistent) {
            if (must_pass) checker.require(false, inst.name + ": right-usc probe violated");
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- criteria

void criterion_1(Checker& checker) {
    const Instance& inst = get_instance("jachymski_counterexample");
    for (double x0 : {1.0, 0.7, 0.3, 0.01}) {
        const IterateResult it = iterate(inst.map, pt(x0), 60, 1e-9);
        checker.require(it.report.converged, "x0=" + fmt(x0) + " did not converge within 60 iters");
        if (it.report.limit_estimate)
            checker.require(std::fabs((*it.report.limit_estimate)[0]) <= 1e-9,
                            "x0=" + fmt(x0) + " limit estimate not within 1e-9 of 0");
    }
    const double residual = fixed_point_residual(inst.map, pt(0.0));
    checker.require(residual == 1.0, "residual at the limit is " + fmt(residual) + ", not exactly 1.0");

    long max_r = 0;
    for (double eps : {0.1, 0.25, 0.5}) {
        SampleSpec spec{4242, 10000, inst.sample_region};
        const SearchResult result = search_leader_params(inst.map, eps, spec, {}, 16);
        checker.require(result.certified(), "no leader certificate at eps=" + fmt(eps));
        if (result.certificate) {
            checker.require(result.certificate->r <= 16, "certificate r exceeds 16");
            max_r = std::max(max_r, result.certificate->r);
        }
    }
    checker.note("residual 1.0 exactly; worst certificate r=" + std::to_string(max_r));
}

void criterion_2(Checker& checker) {
    int gated = 0;
    int certificates = 0;
    for (const Instance& inst : gallery_instances()) {
        if (!passes_kirk_gate(inst, checker, false)) continue;
        ++gated;
        for (double eps : standard_epsilon_grid(inst.space)) {
            SampleSpec spec{4242, 10000, inst.sample_region};
            const SearchResult result = search_leader_params(inst.map, eps, spec);
            checker.require(result.certified(),
                            inst.name + ": leader falsified at eps=" + fmt(eps));
            if (result.certified()) ++certificates;
        }
    }
    checker.require(gated >= 4, "kirk gate admitted only " + std::to_string(gated) + " instances");
    checker.note(std::to_string(gated) + " gated instances, " + std::to_string(certificates) +
                 " leader certificates, zero falsifications");
}

void criterion_3(Checker& checker) {
    int implications = 0;
    for (const Instance& inst : gallery_instances()) {
        for (double eps : standard_epsilon_grid(inst.space)) {
            SampleSpec spec{777, 10000, inst.sample_region};
            SearchResult mk;
            try {
                mk = search_mk_leader_params(inst.map, eps, spec);
            } catch (const VacuousSampleError&) {
                continue;
            }
            if (!mk.certified()) continue;
            const SearchResult leader = search_leader_params(inst.map, eps, spec);
            checker.require(leader.certified(),
                            inst.name + ": mk-leader certified but leader failed at eps=" + fmt(eps));
            ++implications;
        }
    }
    checker.require(implications >= 15,
                    "only " + std::to_string(implications) + " mk->leader implications exercised");
    checker.note(std::to_string(implications) + " implications, zero exceptions");
}

void criterion_4(Checker& checker) {
    const Instance& inst = get_instance("banach_half");
    const ControlSequence seq = ControlSequence::constant(*inst.phi);
    const RetractBound bound = retract_bound(*inst.phi, seq, 0.1, 1.0);
    checker.require(std::fabs(bound.f_min - 0.025) <= 1e-9,
                    "f_min=" + fmt(bound.f_min) + " not within 1e-9 of 0.025");
    checker.require(std::fabs(bound.delta - 0.00625) <= 1e-9,
                    "delta=" + fmt(bound.delta) + " != 0.00625");
    checker.require(bound.p == 162, "p=" + std::to_string(bound.p) + " != 162");
    checker.require(bound.m == 162, "m=" + std::to_string(bound.m) + " != 162");
    const RetractVerification v =
        verify_retract_bound(inst.map, *inst.truth.fixed_point, bound, 4242, 1000);
    checker.require(v.pass, "retract verification failed");
    checker.require(v.worst_entry == 4, "worst entry " + std::to_string(v.worst_entry) + " != 4");
    checker.note("f_min=" + fmt(bound.f_min) + ", delta=" + fmt(bound.delta) +
                 ", p=162, m=162, worst entry 4");
}

void criterion_5(Checker& checker) {
    for (const char* name : {"banach_half", "boyd_wong_rational"}) {
        const Instance& inst = get_instance(name);
        const ControlSequence seq = ControlSequence::constant(*inst.phi);
        const double eps = 0.1;
        const double k_radius = 1.0;
        const RetractBound bound = retract_bound(*inst.phi, seq, eps, k_radius);
        const InvarianceIndex inv = invariance_index_constructive(*inst.phi, seq, eps, k_radius);
        const long composed = inv.index + bound.m;
        const Point& z = *inst.truth.fixed_point;
        const EntryProfile profile =
            uniform_entry_profile(inst.map, z, k_radius, eps, 4242, 1000, composed);
        checker.require(profile.not_entered_count == 0,
                        std::string(name) + ": " + std::to_string(profile.not_entered_count) +
                            " starts never entered");
        if (profile.max_entry)
            checker.require(*profile.max_entry <= composed,
                            std::string(name) + ": max entry exceeds composed bound");
        const UniformVerification uv = verify_uniform_convergence(
            inst.map, z, eps, k_radius, bound, inv, 4242, 1000);
        checker.require(uv.pass, std::string(name) + ": composed-bound sweep failed");
        if (profile.max_entry)
            checker.note(std::string(name) + ": max entry " + std::to_string(*profile.max_entry) +
                         " <= q+m = " + std::to_string(composed));
    }
}

void criterion_6(Checker& checker) {
    const Instance& inst = get_instance("right_usc_jump");
    const ControlFunction& phi = *inst.phi;
    checker.require(right_usc_probe(phi, 1.0).verdict == ProbeVerdict::Consistent,
                    "right-usc probe violated at the breakpoint");
    checker.require(usc_probe(phi, 1.0).verdict == ProbeVerdict::Violated,
                    "two-sided usc probe unexpectedly consistent at the breakpoint");
    checker.require(passes_kirk_gate(inst, checker, true), "kirk gate rejected right_usc_jump");
    int certificates = 0;
    for (double eps : standard_epsilon_grid(inst.space)) {
        SampleSpec spec{4242, 10000, inst.sample_region};
        const SearchResult result = search_leader_params(inst.map, eps, spec);
        checker.require(result.certified(), "leader falsified at eps=" + fmt(eps));
        if (result.certified()) ++certificates;
    }
    checker.note("breakpoint probes as expected; " + std::to_string(certificates) +
                 " leader certificates on the grid");
}

void criterion_7(Checker& checker) {
    int checked = 0;
    for (const Instance& inst : gallery_instances()) {
        if (!inst.phi) continue;
        for (const auto& [a, b] : std::vector<std::pair<double, double>>{
                 {0.05, 1.0}, {0.5, 2.0}, {0.9, 1.1}}) {
            const GapReport report = gap_infimum(*inst.phi, a, b);
            checker.require(report.infimum_estimate > 0.0,
                            inst.name + ": nonpositive gap on [" + fmt(a) + "," + fmt(b) + "]");
            ++checked;
        }
        double previous = std::numeric_limits<double>::infinity();
        for (int rounds = 0; rounds <= 3; ++rounds) {
            const GapReport report = gap_infimum(*inst.phi, 0.05, 1.0, kDefaultGridPoints, rounds);
            checker.require(report.infimum_estimate <= previous,
                            inst.name + ": refinement increased the estimate");
            previous = report.infimum_estimate;
        }
    }
    checker.require(checked >= 15, "too few gap intervals checked");
    checker.note(std::to_string(checked) + " strictly positive gap estimates, monotone refinement");
}

void criterion_8(Checker& checker) {
    for (const char* name : {"translation", "rotation_2d"}) {
        const Instance& inst = get_instance(name);
        SampleSpec spec{4242, 10000, inst.sample_region};
        const auto pairs = sample_pairs(inst.space, spec);
        checker.require(!check_banach(inst.map, *inst.banach_q, pairs).pass,
                        std::string(name) + ": banach unexpectedly passed");
        checker.require(!check_boyd_wong(inst.map, *inst.phi, pairs).pass,
                        std::string(name) + ": boyd-wong unexpectedly passed");
        checker.require(!check_kirk_asymptotic(inst.map, *inst.phi_seq, pairs, 20).pass,
                        std::string(name) + ": kirk unexpectedly passed");
        for (double eps : standard_epsilon_grid(inst.space)) {
            const SearchResult leader = search_leader_params(inst.map, eps, spec);
            const SearchResult mk = search_mk_leader_params(inst.map, eps, spec);
            const SearchResult meir = search_meir_keeler_params(inst.map, eps, spec);
            checker.require(!leader.certified() && leader.witness.has_value(),
                            std::string(name) + ": leader produced no witness at eps=" + fmt(eps));
            checker.require(!mk.certified() && mk.witness.has_value(),
                            std::string(name) + ": mk-leader produced no witness at eps=" + fmt(eps));
            checker.require(!meir.certified() && meir.witness.has_value(),
                            std::string(name) + ": meir-keeler produced no witness at eps=" + fmt(eps));
        }
        checker.require(check_nonexpansive(inst.map, pairs).pass,
                        std::string(name) + ": nonexpansive check failed");
    }
    const Instance& shift = get_instance("translation");
    const IterateResult it = iterate(shift.map, pt(0.0), 100, 1e-10);
    checker.require(!it.report.converged && it.report.unbounded_suspect,
                    "translation orbit not flagged unbounded-suspect");
    checker.note("witnesses for every class and eps; both maps nonexpansive; translation flagged");
}

void criterion_9(Checker& checker) {
    const json doc{{"instance", "banach_half"},
                   {"sampling", json{{"seed", 20250809}, {"count", 4000}}},
                   {"tasks", json::array({json{{"kind", "axioms"}},
                                          json{{"kind", "classify"},
                                               {"epsilons", json::array({0.1, 0.5})}},
                                          json{{"kind", "iterate"}, {"x0", 1.0}},
                                          json{{"kind", "certify"},
                                               {"epsilon", 0.1},
                                               {"k_radius", 1.0}}})}};
    const RunReport first = run(parse_config(doc));
    const RunReport second = run(parse_config(doc));
    checker.require(first.results.dump() == second.results.dump(),
                    "result payloads differ between identical runs");
    checker.require(first.exit_code == 0 && second.exit_code == 0, "runs did not succeed");
    checker.note("payloads byte-identical across runs (" +
                 std::to_string(first.results.dump().size()) + " bytes)");
}

void criterion_10(Checker& checker) {
    BMetricSpace space;
    space.dimension = 1;
    space.domain = Box::cube(1, 0.0, 2.0);
    space.metric = MetricKind::PowerEuclidean;
    space.power_p = 2.0;

    space.coefficient_s = 2.0;
    SampleSpec spec{4242, 10000, space.domain};
    const AxiomReport good = check_metric_axioms(space, spec);
    checker.require(good.all_pass(), "s=2 declaration failed the axiom check");

    space.coefficient_s = 1.0;
    const AxiomReport bad = check_metric_axioms(space, spec);
    checker.require(!bad.b_triangle, "s=1 declaration passed the b-triangle");
    checker.require(bad.first_violation.has_value(), "no witness triple reported");
    if (bad.first_violation) {
        const auto& v = *bad.first_violation;
        checker.require(v.axiom == "b-triangle", "wrong axiom reported");
        const double lhs = distance(space, v.tuple[0], v.tuple[2]);
        const double rhs = 1.0 * (distance(space, v.tuple[0], v.tuple[1]) +
                                  distance(space, v.tuple[1], v.tuple[2]));
        checker.require(lhs > rhs, "witness triple does not replay");
    }
    checker.note("s=2 passes, s=1 falsified with a replaying witness on 10^4 triples");
}

}  // namespace

int main() {
    run_criterion(1, "counterexample reproduction", criterion_1);
    run_criterion(2, "kirk implies leader at desk scale", criterion_2);
    run_criterion(3, "mk-leader implies leader", criterion_3);
    run_criterion(4, "constructive retract bound soundness", criterion_4);
    run_criterion(5, "uniform convergence on bounded sets", criterion_5);
    run_criterion(6, "right-usc relaxation", criterion_6);
    run_criterion(7, "gap positivity and refinement monotonicity", criterion_7);
    run_criterion(8, "negative controls", criterion_8);
    run_criterion(9, "determinism", criterion_9);
    run_criterion(10, "metric axioms for power-euclidean", criterion_10);

    // runtime caps stated by the criteria themselves
    for (Criterion& c : g_results) {
        if (c.id == 1 && c.seconds >= 5.0) {
            c.pass = false;
            c.detail += "; runtime " + fmt(c.seconds) + "s >= 5s";
        }
        if (c.id == 4 && c.seconds >= 1.0) {
            c.pass = false;
            c.detail += "; runtime " + fmt(c.seconds) + "s >= 1s";
        }
    }

    int failures = 0;
    for (const Criterion& c : g_results) {
        std::printf("C%-2d %-45s %s  [%.2fs]%s%s\n", c.id, c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.seconds,
                    c.detail.empty() ? "" : "  — ", c.detail.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures == 0 ? 0 : 1;
}
