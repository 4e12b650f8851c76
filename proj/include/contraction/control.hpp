#pragma once

#include "contraction/expression.hpp"

#include <optional>
#include <span>
#include <vector>

namespace contraction {

// Shared numeric defaults for grid sweeps and probes.
inline constexpr int kDefaultGridPoints = 1024;
inline constexpr double kValueTol = 1e-9;   // value comparisons (sup <= tol, phi(0) = 0)
inline constexpr double kProbeTol = 1e-6;   // limsup probes

struct ControlFlags {
    bool subcontractive = false;
    bool right_usc = false;
    bool usc = false;
    bool zero_at_zero = false;
};

/// Evaluable control function phi: R+ -> R+ given by an expression in t.
class ControlFunction {
public:
    ControlFunction() = default;
    explicit ControlFunction(Expression expr, ControlFlags declared = {});
    static ControlFunction parse(std::string_view source, ControlFlags declared = {});

    /// phi(t). Throws std::domain_error on t < 0 and std::runtime_error
    /// when the expression produces a negative or non-finite value.
    double operator()(double t) const;

    bool valid() const { return expr_.valid(); }
    const Expression& expression() const { return expr_; }
    const ControlFlags& declared() const { return declared_; }

private:
    Expression expr_;  // bound to ("t")
    ControlFlags declared_;
};

/// Indexed family {phi_n} given by an expression in (n, t), its limit,
/// and an optional strictly-increasing subsequence rule n(k).
class ControlSequence {
public:
    ControlSequence() = default;
    ControlSequence(Expression family, ControlFunction limit,
                    std::optional<Expression> subsequence_rule = std::nullopt);
    static ControlSequence parse(std::string_view family, std::string_view limit,
                                 std::optional<std::string_view> subsequence_rule = std::nullopt);
    /// Family identically equal to its limit.
    static ControlSequence constant(ControlFunction phi);

    /// phi_n(t); contract-checked like ControlFunction.
    double member(long n, double t) const;
    const ControlFunction& limit() const { return limit_; }
    bool has_subsequence() const { return subsequence_rule_.has_value(); }
    const Expression& family_expression() const { return family_; }
    const std::optional<Expression>& subsequence_rule() const { return subsequence_rule_; }

    /// Indices to test up to n_max: 1..n_max, or the materialized
    /// subsequence n(1), n(2), ... clipped to n_max. Throws if the rule
    /// yields indices that are < 1 or not strictly increasing.
    std::vector<long> test_indices(long n_max) const;

    bool valid() const { return family_.valid() && limit_.valid(); }

private:
    Expression family_;  // bound to ("n", "t")
    ControlFunction limit_;
    std::optional<Expression> subsequence_rule_;  // bound to ("k")
};

// ------------------------------------------------------------ operations

struct SubcontractivityReport {
    bool pass = true;
    std::optional<double> violation_t;  // first grid t with phi(t) >= t
    int points_checked = 0;
};

/// Evaluates phi(t) < t on grid_n points of (0, b].
SubcontractivityReport check_subcontractive(const ControlFunction& phi, double b, int grid_n);

enum class ProbeVerdict { Consistent, Violated };

struct UscProbeReport {
    ProbeVerdict verdict = ProbeVerdict::Consistent;
    double limsup_estimate = 0.0;  // over the smallest probe window
    double value_at_t = 0.0;
    double smallest_width = 0.0;
    bool two_sided = false;
};

/// Default shrinking probe widths {1e-2, ..., 1e-6}.
std::vector<double> default_probe_widths();

/// Estimates limsup of phi over (t, t+w] for shrinking w; "violated" when
/// the estimate exceeds phi(t) + kProbeTol. A sampled probe, not a proof.
UscProbeReport right_usc_probe(const ControlFunction& phi, double t,
                               std::span<const double> probe_widths = {});

/// Two-sided variant over (t-w, t+w) \ {t}.
UscProbeReport usc_probe(const ControlFunction& phi, double t,
                         std::span<const double> probe_widths = {});

struct GapReport {
    double a = 0.0;
    double b = 0.0;
    double infimum_estimate = 0.0;
    double argmin_estimate = 0.0;
    double grid_resolution = 0.0;  // spacing of the finest grid evaluated
    int initial_grid = 0;
    int refine_rounds = 0;
};

/// Raised by gap_infimum when the estimated infimum of t - phi(t) is <= 0.
class GapViolation : public std::runtime_error {
public:
    GapViolation(double t, double value)
        : std::runtime_error("subcontractivity violated on interval"), t_(t), value_(value) {}
    double witness_t() const { return t_; }
    double value() const { return value_; }

private:
    double t_;
    double value_;
};

/// Grid estimate of inf over [a,b] of f(t) = t - phi(t), with
/// refine_rounds rounds of 10x local refinement around the running argmin.
/// Each pass also probes just right of every knot, since a right-usc phi
/// can push f down immediately to the right of a breakpoint.
GapReport gap_infimum(const ControlFunction& phi, double a, double b,
                      int initial_grid = kDefaultGridPoints, int refine_rounds = 3);

struct UniformConvergenceResult {
    bool reached = false;
    long first_index = 0;      // first tested n from which all later tested sups <= tol
    double sup_at_first = 0.0;
    long n_max = 0;
    int grid_points = 0;
};

/// Estimates sup over [0,b] of |phi_n - phi| on a fixed grid for each
/// tested n (all of 1..n_max, or the subsequence when present) and finds
/// the first index from which every later tested sup stays <= tol
/// (within kValueTol comparison slack). Exhaustion is reported, not thrown.
UniformConvergenceResult uniform_convergence_check(const ControlSequence& seq, double b,
                                                   double tol, long n_max,
                                                   int grid_n = kDefaultGridPoints);

struct TailSupReport {
    double sup_estimate = 0.0;
    bool suspect_divergent = false;
    long argmax_n = 0;
    double argmax_t = 0.0;
    long indices_checked = 0;
};

/// Estimates sup { phi_n(t) : t in [0,a], m_a <= n <= n_max }. Verdict
/// "suspect-divergent" when the running sup sets a new record at every
/// tested index across the last quarter of the scan.
TailSupReport tail_sup_bounded(const ControlSequence& seq, double a, long m_a, long n_max,
                               int grid_n = kDefaultGridPoints);

}  // namespace contraction
