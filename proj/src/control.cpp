#include "contraction/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace contraction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kProbeSamplesPerWindow = 64;
// Offset factor for the just-right-of-knot probes in gap_infimum.
constexpr double kKnotOffsetFactor = 1e-3;

// Function-local statics: safe against cross-TU initialization order.
const std::vector<std::string>& var_t() {
    static const std::vector<std::string> names = {"t"};
    return names;
}
const std::vector<std::string>& var_nt() {
    static const std::vector<std::string> names = {"n", "t"};
    return names;
}
const std::vector<std::string>& var_k() {
    static const std::vector<std::string> names = {"k"};
    return names;
}

double checked_value(double value, double t) {
    if (!std::isfinite(value) || value < 0.0)
        throw std::runtime_error("control function produced a negative or non-finite value at t=" +
                                 std::to_string(t));
    return value;
}

void check_argument(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error("control function argument must satisfy t >= 0");
}

}  // namespace

ControlFunction::ControlFunction(Expression expr, ControlFlags declared)
    : expr_(expr.bound(var_t())), declared_(declared) {}

ControlFunction ControlFunction::parse(std::string_view source, ControlFlags declared) {
    return ControlFunction(Expression::parse(source), declared);
}

double ControlFunction::operator()(double t) const {
    check_argument(t);
    const double env[1] = {t};
    return checked_value(expr_.eval(env), t);
}

ControlSequence::ControlSequence(Expression family, ControlFunction limit,
                                 std::optional<Expression> subsequence_rule)
    : family_(family.bound(var_nt())), limit_(std::move(limit)) {
    if (subsequence_rule) subsequence_rule_ = subsequence_rule->bound(var_k());
}

ControlSequence ControlSequence::parse(std::string_view family, std::string_view limit,
                                       std::optional<std::string_view> subsequence_rule) {
    std::optional<Expression> rule;
    if (subsequence_rule) rule = Expression::parse(*subsequence_rule);
    return ControlSequence(Expression::parse(family), ControlFunction::parse(limit), rule);
}

ControlSequence ControlSequence::constant(ControlFunction phi) {
    // The family expression only sees t, so binding against (n, t) keeps it constant in n.
    return ControlSequence(phi.expression(), phi);
}

double ControlSequence::member(long n, double t) const {
    check_argument(t);
    if (n < 1) throw std::domain_error("family index n must be >= 1");
    const double env[2] = {static_cast<double>(n), t};
    return checked_value(family_.eval(env), t);
}

std::vector<long> ControlSequence::test_indices(long n_max) const {
    std::vector<long> out;
    if (n_max < 1) return out;
    if (!subsequence_rule_) {
        out.reserve(static_cast<std::size_t>(n_max));
        for (long n = 1; n <= n_max; ++n) out.push_back(n);
        return out;
    }
    long previous = 0;
    for (long k = 1; k <= n_max; ++k) {
        const double env[1] = {static_cast<double>(k)};
        const double raw = subsequence_rule_->eval(env);
        if (!std::isfinite(raw))
            throw std::invalid_argument("subsequence rule produced a non-finite index");
        const long n = std::llround(raw);
        if (n < 1 || n <= previous)
            throw std::invalid_argument("subsequence rule must produce strictly increasing indices >= 1");
        if (n > n_max) break;
        out.push_back(n);
        previous = n;
    }
    return out;
}

// -------------------------------------------------------------- checks

SubcontractivityReport check_subcontractive(const ControlFunction& phi, double b, int grid_n) {
    if (!(b > 0.0)) throw std::invalid_argument("range bound b must be positive");
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");
    SubcontractivityReport report;
    for (int i = 1; i <= grid_n; ++i) {
        const double t = b * static_cast<double>(i) / static_cast<double>(grid_n);
        ++report.points_checked;
        if (!(phi(t) < t)) {
            report.pass = false;
            report.violation_t = t;
            break;
        }
    }
    return report;
}

std::vector<double> default_probe_widths() {
    return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

namespace {

UscProbeReport usc_probe_impl(const ControlFunction& phi, double t,
                              std::span<const double> probe_widths, bool two_sided) {
    if (!(t > 0.0)) throw std::invalid_argument("probe location t must be positive");
    std::vector<double> widths(probe_widths.begin(), probe_widths.end());
    if (widths.empty()) widths = default_probe_widths();
    for (std::size_t i = 1; i < widths.size(); ++i)
        if (!(widths[i] < widths[i - 1]) || !(widths[i] > 0.0))
            throw std::invalid_argument("probe widths must be positive and decreasing");

    UscProbeReport report;
    report.value_at_t = phi(t);
    report.two_sided = two_sided;
    double window_max = -kInf;
    for (double w : widths) {
        window_max = -kInf;
        for (int i = 1; i <= kProbeSamplesPerWindow; ++i) {
            const double step = w * static_cast<double>(i) / kProbeSamplesPerWindow;
            window_max = std::max(window_max, phi(t + step));
            if (two_sided) {
                const double left = t - step;
                if (left >= 0.0 && left != t) window_max = std::max(window_max, phi(left));
            }
        }
        report.smallest_width = w;
    }
    report.limsup_estimate = window_max;
    report.verdict = window_max > report.value_at_t + kProbeTol ? ProbeVerdict::Violated
                                                                : ProbeVerdict::Consistent;
    return report;
}

}  // namespace

UscProbeReport right_usc_probe(const ControlFunction& phi, double t,
                               std::span<const double> probe_widths) {
    return usc_probe_impl(phi, t, probe_widths, false);
}

UscProbeReport usc_probe(const ControlFunction& phi, double t,
                         std::span<const double> probe_widths) {
    return usc_probe_impl(phi, t, probe_widths, true);
}

GapReport gap_infimum(const ControlFunction& phi, double a, double b,
                      int initial_grid, int refine_rounds) {
    if (!(0.0 < a) || !(a < b)) throw std::invalid_argument("gap interval requires 0 < a < b");
    if (initial_grid < 2) throw std::invalid_argument("initial_grid must be >= 2");
    if (refine_rounds < 0) throw std::invalid_argument("refine_rounds must be >= 0");

    double best_f = kInf;
    double best_t = a;
    auto visit = [&](double t) {
        if (t < a || t > b) return;
        const double f = t - phi(t);
        if (f < best_f) {
            best_f = f;
            best_t = t;
        }
    };

    double spacing = (b - a) / static_cast<double>(initial_grid - 1);
    for (int i = 0; i < initial_grid; ++i) {
        const double t = (i == initial_grid - 1) ? b : a + spacing * static_cast<double>(i);
        visit(t);
        visit(t + spacing * kKnotOffsetFactor);
    }

    for (int round = 0; round < refine_rounds; ++round) {
        const double radius = spacing;
        spacing /= 10.0;
        const double lo = std::max(a, best_t - radius);
        const double hi = std::min(b, best_t + radius);
        for (double t = lo; t <= hi; t += spacing) {
            visit(t);
            visit(t + spacing * kKnotOffsetFactor);
        }
        visit(hi);
    }

    if (!(best_f > 0.0)) throw GapViolation(best_t, best_f);

    GapReport report;
    report.a = a;
    report.b = b;
    report.infimum_estimate = best_f;
    report.argmin_estimate = best_t;
    report.grid_resolution = spacing;
    report.initial_grid = initial_grid;
    report.refine_rounds = refine_rounds;
    return report;
}

UniformConvergenceResult uniform_convergence_check(const ControlSequence& seq, double b,
                                                   double tol, long n_max, int grid_n) {
    if (!(b > 0.0)) throw std::invalid_argument("interval bound b must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");

    const std::vector<long> indices = seq.test_indices(n_max);
    UniformConvergenceResult result;
    result.n_max = n_max;
    result.grid_points = grid_n;
    if (indices.empty()) return result;  // not reached

    std::vector<double> grid(static_cast<std::size_t>(grid_n));
    for (int j = 0; j < grid_n; ++j)
        grid[static_cast<std::size_t>(j)] = b * static_cast<double>(j) / static_cast<double>(grid_n - 1);

    std::vector<double> limit_values(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) limit_values[j] = seq.limit()(grid[j]);

    std::vector<double> sups(indices.size(), 0.0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        double sup = 0.0;
        try {
            for (std::size_t j = 0; j < grid.size(); ++j)
                sup = std::max(sup, std::fabs(seq.member(indices[i], grid[j]) - limit_values[j]));
        } catch (const std::runtime_error&) {
            sup = kInf;  // family member left R+ on the grid; certainly not within tol
        }
        sups[i] = sup;
    }

    std::size_t first = 0;
    for (std::size_t i = indices.size(); i-- > 0;) {
        if (sups[i] > tol + kValueTol) {
            first = i + 1;
            break;
        }
    }
    if (first >= indices.size()) return result;  // not reached within n_max

    result.reached = true;
    result.first_index = indices[first];
    result.sup_at_first = sups[first];
    return result;
}

TailSupReport tail_sup_bounded(const ControlSequence& seq, double a, long m_a, long n_max,
                               int grid_n) {
    if (!(a > 0.0)) throw std::invalid_argument("interval bound a must be positive");
    if (m_a < 1) throw std::invalid_argument("m_a must be >= 1");
    if (n_max < m_a) throw std::invalid_argument("n_max must be >= m_a");
    if (grid_n < 2) throw std::invalid_argument("grid_n must be >= 2");

    TailSupReport report;
    report.sup_estimate = -kInf;
    const long total = n_max - m_a + 1;
    const long tail_start = n_max - total / 4;  // last quarter of the scan
    bool tail_all_records = total >= 4;

    for (long n = m_a; n <= n_max; ++n) {
        double sup_n = 0.0;
        double argmax_t = 0.0;
        for (int j = 0; j < grid_n; ++j) {
            const double t = a * static_cast<double>(j) / static_cast<double>(grid_n - 1);
            const double v = seq.member(n, t);
            if (v > sup_n) {
                sup_n = v;
                argmax_t = t;
            }
        }
        ++report.indices_checked;
        const bool record = sup_n > report.sup_estimate;
        if (record) {
            report.sup_estimate = sup_n;
            report.argmax_n = n;
            report.argmax_t = argmax_t;
        }
        if (n > tail_start && !record) tail_all_records = false;
    }
    report.suspect_divergent = tail_all_records;
    return report;
}

}  // namespace contraction
