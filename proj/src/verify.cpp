#include "contraction/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace contraction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool leq_with_slack(double lhs, double rhs) { return lhs <= rhs + kStrictSlack; }
bool strictly_below(double lhs, double rhs) { return lhs < rhs - kStrictSlack; }

bool guard_holds(GuardKind kind, double d0, double epsilon, double delta) {
    switch (kind) {
        case GuardKind::Leader:
            return d0 < epsilon + delta;
        case GuardKind::MKLeader:
        case GuardKind::MeirKeeler:
            return d0 >= epsilon && d0 < epsilon + delta;
    }
    return false;
}

void validate_ladder(std::span<const double> ladder) {
    if (ladder.empty()) throw std::invalid_argument("delta ladder must be non-empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0)) throw std::invalid_argument("delta ladder entries must be positive");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw std::invalid_argument("delta ladder must be strictly decreasing");
    }
}

SearchResult run_search(const SelfMap& map, GuardKind kind, double epsilon,
                        std::span<const PointPair> pairs, std::span<const double> ladder,
                        long r_max) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (r_max < 1) throw std::invalid_argument("r_max must be >= 1");
    validate_ladder(ladder);
    if (pairs.empty()) throw VacuousSampleError(epsilon);

    std::vector<std::vector<double>> traces;
    traces.reserve(pairs.size());
    for (const PointPair& pair : pairs)
        traces.push_back(map.pair_distance_trace(pair.x, pair.y, r_max));

    bool any_guard_populated = false;
    std::vector<std::size_t> guard_members;
    std::vector<std::size_t> smallest_populated_guard;
    for (double delta : ladder) {
        guard_members.clear();
        for (std::size_t i = 0; i < traces.size(); ++i)
            if (guard_holds(kind, traces[i][0], epsilon, delta)) guard_members.push_back(i);
        if (guard_members.empty()) continue;
        any_guard_populated = true;
        smallest_populated_guard = guard_members;
        for (long r = 1; r <= r_max; ++r) {
            bool all_contract = true;
            for (std::size_t i : guard_members) {
                if (!strictly_below(traces[i][static_cast<std::size_t>(r)], epsilon)) {
                    all_contract = false;
                    break;
                }
            }
            if (all_contract) {
                Certificate cert;
                cert.epsilon = epsilon;
                cert.delta = delta;
                cert.r = r;
                cert.sample_size = static_cast<long>(pairs.size());
                cert.pairs_checked = static_cast<long>(guard_members.size());
                cert.guard = kind;
                cert.delta_ladder.assign(ladder.begin(), ladder.end());
                SearchResult result;
                result.certificate = std::move(cert);
                return result;
            }
        }
    }
    if (!any_guard_populated) throw VacuousSampleError(epsilon);

    // No (delta, r) worked: report the most resistant pair in the smallest
    // populated guard — the pair whose iterate distances stayed highest.
    std::size_t best = smallest_populated_guard.front();
    double best_min = -kInf;
    for (std::size_t i : smallest_populated_guard) {
        double min_dist = kInf;
        for (long r = 1; r <= r_max; ++r)
            min_dist = std::min(min_dist, traces[i][static_cast<std::size_t>(r)]);
        if (min_dist > best_min) {
            best_min = min_dist;
            best = i;
        }
    }
    Witness witness;
    witness.epsilon = epsilon;
    witness.pair = pairs[best];
    witness.distances = traces[best];
    SearchResult result;
    result.witness = std::move(witness);
    return result;
}

CheckReport run_leq_check(const SelfMap& map, std::span<const PointPair> pairs,
                          const std::function<double(double)>& bound) {
    CheckReport report;
    for (const PointPair& pair : pairs) {
        const double d0 = distance(map.space(), pair.x, pair.y);
        const double d1 = distance(map.space(), map.apply(pair.x), map.apply(pair.y));
        const double rhs = bound(d0);
        ++report.pairs_checked;
        if (!leq_with_slack(d1, rhs)) {
            report.pass = false;
            report.witness = PairViolation{pair, d1, rhs};
            break;
        }
    }
    return report;
}

}  // namespace

std::string guard_kind_name(GuardKind kind) {
    switch (kind) {
        case GuardKind::Leader: return "leader";
        case GuardKind::MKLeader: return "mk_leader";
        case GuardKind::MeirKeeler: return "meir_keeler";
    }
    return "unknown";
}

CheckReport check_banach(const SelfMap& map, double q, std::span<const PointPair> pairs) {
    if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("banach factor must satisfy 0 < q < 1");
    return run_leq_check(map, pairs, [q](double d0) { return q * d0; });
}

CheckReport check_boyd_wong(const SelfMap& map, const ControlFunction& phi,
                            std::span<const PointPair> pairs) {
    return run_leq_check(map, pairs, [&phi](double d0) { return phi(d0); });
}

CheckReport check_nonexpansive(const SelfMap& map, std::span<const PointPair> pairs) {
    return run_leq_check(map, pairs, [](double d0) { return d0; });
}

KirkReport check_kirk_asymptotic(const SelfMap& map, const ControlSequence& seq,
                                 std::span<const PointPair> pairs, long n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    KirkReport report;
    report.n_max = n_max;
    for (const PointPair& pair : pairs) {
        const std::vector<double> trace = map.pair_distance_trace(pair.x, pair.y, n_max);
        ++report.pairs_checked;
        for (long n = 1; n <= n_max; ++n) {
            const double rhs = seq.member(n, trace[0]);
            if (!leq_with_slack(trace[static_cast<std::size_t>(n)], rhs)) {
                report.pass = false;
                report.witness = KirkViolation{n, {pair, trace[static_cast<std::size_t>(n)], rhs}};
                return report;
            }
        }
    }
    return report;
}

std::vector<double> default_delta_ladder(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    return {epsilon, 0.5 * epsilon, 0.1 * epsilon, 0.05 * epsilon, 0.01 * epsilon, 0.001 * epsilon};
}

SearchResult search_leader_params(const SelfMap& map, double epsilon,
                                  std::span<const PointPair> pairs,
                                  std::span<const double> delta_ladder, long r_max) {
    return run_search(map, GuardKind::Leader, epsilon, pairs, delta_ladder, r_max);
}

SearchResult search_mk_leader_params(const SelfMap& map, double epsilon,
                                     std::span<const PointPair> pairs,
                                     std::span<const double> delta_ladder, long r_max) {
    return run_search(map, GuardKind::MKLeader, epsilon, pairs, delta_ladder, r_max);
}

SearchResult search_meir_keeler_params(const SelfMap& map, double epsilon,
                                       std::span<const PointPair> pairs,
                                       std::span<const double> delta_ladder) {
    return run_search(map, GuardKind::MeirKeeler, epsilon, pairs, delta_ladder, 1);
}

namespace {

std::vector<PointPair> pairs_for_search(const SelfMap& map, double epsilon,
                                        const SampleSpec& spec, std::span<const double> ladder) {
    // One band [eps, eps+delta) per ladder rung, so even the narrowest
    // guard sees pairs at its bite point.
    return sample_pairs_banded(map.space(), spec, ladder, epsilon);
}

}  // namespace

SearchResult search_leader_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                  std::span<const double> delta_ladder, long r_max) {
    const std::vector<double> ladder = delta_ladder.empty()
                                           ? default_delta_ladder(epsilon)
                                           : std::vector<double>(delta_ladder.begin(), delta_ladder.end());
    const auto pairs = pairs_for_search(map, epsilon, spec, ladder);
    return search_leader_params(map, epsilon, pairs, ladder, r_max);
}

SearchResult search_mk_leader_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                     std::span<const double> delta_ladder, long r_max) {
    const std::vector<double> ladder = delta_ladder.empty()
                                           ? default_delta_ladder(epsilon)
                                           : std::vector<double>(delta_ladder.begin(), delta_ladder.end());
    const auto pairs = pairs_for_search(map, epsilon, spec, ladder);
    return search_mk_leader_params(map, epsilon, pairs, ladder, r_max);
}

SearchResult search_meir_keeler_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                       std::span<const double> delta_ladder) {
    const std::vector<double> ladder = delta_ladder.empty()
                                           ? default_delta_ladder(epsilon)
                                           : std::vector<double>(delta_ladder.begin(), delta_ladder.end());
    const auto pairs = pairs_for_search(map, epsilon, spec, ladder);
    return search_meir_keeler_params(map, epsilon, pairs, ladder);
}

bool holds_on_pairs(const SelfMap& map, GuardKind guard, double epsilon, double delta, long r,
                    std::span<const PointPair> pairs, long* pairs_in_guard) {
    if (pairs_in_guard) *pairs_in_guard = 0;
    bool holds = true;
    for (const PointPair& pair : pairs) {
        const double d0 = distance(map.space(), pair.x, pair.y);
        if (!guard_holds(guard, d0, epsilon, delta)) continue;
        if (pairs_in_guard) ++*pairs_in_guard;
        const Point tx = map.iterate(pair.x, r);
        const Point ty = map.iterate(pair.y, r);
        if (!strictly_below(distance(map.space(), tx, ty), epsilon)) holds = false;
    }
    return holds;
}

ChenReport check_chen_condition(const ControlSequence& seq, long n_star,
                                std::span<const double> t_grid) {
    if (n_star < 1) throw std::invalid_argument("n_star must be >= 1");
    std::vector<double> grid(t_grid.begin(), t_grid.end());
    if (grid.empty())
        for (int i = 1; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 10.0);

    ChenReport report;
    report.n_star = n_star;
    report.phi_at_zero = seq.member(n_star, 0.0);
    report.zero_at_zero = std::fabs(report.phi_at_zero) <= kValueTol;
    if (!report.zero_at_zero) report.pass = false;

    const ControlFunction phi_star(seq.family_expression().substituted("n", static_cast<double>(n_star)));
    for (double t : grid) {
        if (usc_probe(phi_star, t).verdict == ProbeVerdict::Violated) {
            report.pass = false;
            report.usc_violation_t = t;
            break;
        }
    }
    return report;
}

ContinuityReport continuity_probe(const SelfMap& map, long n, std::span<const Point> samples,
                                  double probe_radius, double jump_tol) {
    if (n < 1) throw std::invalid_argument("iterate order n must be >= 1");
    if (!(probe_radius > 0.0)) throw std::invalid_argument("probe radius must be positive");

    ContinuityReport report;
    const Box& box = map.space().domain;
    for (const Point& x : samples) {
        const Point image = map.iterate(x, n);
        ++report.points_probed;
        for (int axis = 0; axis < map.dimension(); ++axis) {
            for (int shrink = 0; shrink <= 2; ++shrink) {
                const double offset = probe_radius * std::pow(10.0, -shrink);
                for (double sign : {-1.0, 1.0}) {
                    Point probe = x;
                    probe[axis] = std::clamp(x[axis] + sign * offset, box.lo[axis], box.hi[axis]);
                    if (probe[axis] == x[axis]) continue;
                    const double base = distance(map.space(), x, probe);
                    const double jump = distance(map.space(), image, map.iterate(probe, n));
                    if (base > 0.0)
                        report.max_oscillation = std::max(report.max_oscillation, jump / base);
                    if (shrink == 2 && jump > jump_tol)
                        report.suspects.push_back(ContinuitySuspect{probe, x, jump, base});
                }
            }
        }
    }
    return report;
}

}  // namespace contraction
