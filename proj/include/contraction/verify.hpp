#pragma once

#include "contraction/control.hpp"
#include "contraction/selfmap.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contraction {

// Strict "<" conclusions are satisfied only with this much room; equality
// within the slack counts as a violation, biasing toward falsification.
// Non-strict "<=" checks symmetrically tolerate the same slack so exact
// isometries are not falsified by arithmetic noise.
inline constexpr double kStrictSlack = 1e-12;

inline constexpr long kDefaultRMax = 64;

enum class GuardKind { Leader, MKLeader, MeirKeeler };
std::string guard_kind_name(GuardKind kind);

/// Sampled (epsilon, delta, r) evidence that a guard-conditioned
/// contraction implication held on every applicable sampled pair.
struct Certificate {
    double epsilon = 0.0;
    double delta = 0.0;
    long r = 1;
    long sample_size = 0;    // pairs sampled
    long pairs_checked = 0;  // pairs satisfying the guard
    GuardKind guard = GuardKind::Leader;
    std::vector<double> delta_ladder;
};

/// A concrete pair whose iterate distances stayed at or above epsilon.
struct Witness {
    double epsilon = 0.0;
    PointPair pair;
    std::vector<double> distances;  // distance(T^i x, T^i y), i = 0..r_max
};

struct SearchResult {
    std::optional<Certificate> certificate;
    std::optional<Witness> witness;
    bool certified() const { return certificate.has_value(); }
};

/// No sampled pair satisfied any guard in the ladder.
class VacuousSampleError : public std::runtime_error {
public:
    explicit VacuousSampleError(double epsilon)
        : std::runtime_error("vacuous sample: no sampled pair satisfies any guard"),
          epsilon_(epsilon) {}
    double epsilon() const { return epsilon_; }

private:
    double epsilon_;
};

struct PairViolation {
    PointPair pair;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct CheckReport {
    bool pass = true;
    std::optional<PairViolation> witness;
    long pairs_checked = 0;
};

struct KirkViolation {
    long n = 0;
    PairViolation violation;
};

struct KirkReport {
    bool pass = true;
    std::optional<KirkViolation> witness;
    long pairs_checked = 0;
    long n_max = 0;
};

// ------------------------------------------------- inequality-style checks

/// distance(Tx, Ty) <= q * distance(x, y) on every pair.
CheckReport check_banach(const SelfMap& map, double q, std::span<const PointPair> pairs);

/// distance(Tx, Ty) <= phi(distance(x, y)) on every pair.
CheckReport check_boyd_wong(const SelfMap& map, const ControlFunction& phi,
                            std::span<const PointPair> pairs);

/// distance(Tx, Ty) <= distance(x, y) on every pair.
CheckReport check_nonexpansive(const SelfMap& map, std::span<const PointPair> pairs);

/// distance(T^n x, T^n y) <= phi_n(distance(x, y)) for all n <= n_max.
KirkReport check_kirk_asymptotic(const SelfMap& map, const ControlSequence& seq,
                                 std::span<const PointPair> pairs, long n_max);

// --------------------------------------------------- (delta, r) searches

/// {1, 0.5, 0.1, 0.05, 0.01, 0.001} * epsilon.
std::vector<double> default_delta_ladder(double epsilon);

/// Searches the ladder (delta descending, then r ascending) for the first
/// (delta, r) with: distance(x,y) < eps + delta implies
/// distance(T^r x, T^r y) < eps on every sampled pair. Combinations with
/// an empty guard are skipped; if every guard is empty the search throws
/// VacuousSampleError. On failure returns the guard pair whose iterate
/// distances resisted epsilon the longest, with its full trace.
SearchResult search_leader_params(const SelfMap& map, double epsilon,
                                  std::span<const PointPair> pairs,
                                  std::span<const double> delta_ladder, long r_max);

/// Two-sided guard eps <= distance(x,y) < eps + delta.
SearchResult search_mk_leader_params(const SelfMap& map, double epsilon,
                                     std::span<const PointPair> pairs,
                                     std::span<const double> delta_ladder, long r_max);

/// MK guard with r fixed to 1.
SearchResult search_meir_keeler_params(const SelfMap& map, double epsilon,
                                       std::span<const PointPair> pairs,
                                       std::span<const double> delta_ladder);

// SampleSpec conveniences: pairs are drawn with half the sample
// concentrated in the guard band [eps, eps + max delta).
SearchResult search_leader_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                  std::span<const double> delta_ladder = {}, long r_max = kDefaultRMax);
SearchResult search_mk_leader_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                     std::span<const double> delta_ladder = {}, long r_max = kDefaultRMax);
SearchResult search_meir_keeler_params(const SelfMap& map, double epsilon, const SampleSpec& spec,
                                       std::span<const double> delta_ladder = {});

/// Validates a specific (epsilon, delta, r) against pairs; used for the
/// downward-closure property and certificate replay.
bool holds_on_pairs(const SelfMap& map, GuardKind guard, double epsilon, double delta, long r,
                    std::span<const PointPair> pairs, long* pairs_in_guard = nullptr);

// ----------------------------------------------------------- other checks

struct ChenReport {
    bool pass = true;
    long n_star = 1;
    double phi_at_zero = 0.0;
    bool zero_at_zero = true;
    std::optional<double> usc_violation_t;
};

/// phi_{n*}(0) = 0 (within kValueTol) and two-sided usc probes across a
/// grid of t values (default 0.1, 0.2, ..., 2.0).
ChenReport check_chen_condition(const ControlSequence& seq, long n_star,
                                std::span<const double> t_grid = {});

struct ContinuitySuspect {
    Point at;          // probe location where the image jumped
    Point from;        // sampled base point
    double image_jump = 0.0;
    double base_distance = 0.0;
};

struct ContinuityReport {
    double max_oscillation = 0.0;  // max distance(T^n x, T^n x') / distance(x, x')
    std::vector<ContinuitySuspect> suspects;
    long points_probed = 0;
};

/// Probes T^n near each sampled x at shrinking offsets (clamped to the
/// domain box). A probe pair is suspect when the image jump exceeds
/// jump_tol while the base distance has shrunk to probe_radius/100 scale.
ContinuityReport continuity_probe(const SelfMap& map, long n, std::span<const Point> samples,
                                  double probe_radius, double jump_tol = 1e-2);

}  // namespace contraction
