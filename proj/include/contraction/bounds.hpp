#pragma once

#include "contraction/control.hpp"
#include "contraction/picard.hpp"
#include "contraction/selfmap.hpp"

#include <optional>
#include <string>

namespace contraction {

inline constexpr long kDefaultUniformNMax = 4096;

/// Constructive a-priori iteration bound: every point of B(z, K) must
/// visit B(z, eps) within m = s*p steps. All intermediates are kept for
/// audit; the construction is derived from proof-schema inequalities and
/// is validated empirically, not re-derived.
struct RetractBound {
    double epsilon = 0.0;
    double k_radius = 0.0;
    double f_min = 0.0;   // estimated inf over [eps/2, K] of t - phi(t)
    double delta = 0.0;   // min(f_min, eps/2)/4; gives 2*delta < f_min and delta < eps/4
    long m1 = 0;          // invariance index for B(z, K), set to m2 constructively
    long m2 = 0;          // first index with sup |phi_n - phi| <= delta on [0, K]
    long s = 0;           // max(m1, m2)
    long p = 0;           // floor(K/delta + 1) + 1, realizing p > K/delta + 1
    long m = 0;           // s * p
    GapReport gap;
    long uniform_n_max = 0;
};

/// Computes the bound record. Throws std::runtime_error with message
/// "gap infimum nonpositive" (via GapViolation) when subcontractivity
/// fails on [eps/2, K], and "uniform convergence index not found" when
/// no m2 <= n_max exists.
RetractBound retract_bound(const ControlFunction& phi, const ControlSequence& seq, double epsilon,
                           double k_radius, long n_max = kDefaultUniformNMax);

enum class InvarianceMode { Empirical, Constructive };

/// Index m such that T^n B(z, eps) stays inside B(z, eps) for all
/// tested/justified n >= m.
struct InvarianceIndex {
    double epsilon = 0.0;
    long index = 0;
    InvarianceMode mode = InvarianceMode::Empirical;
    std::string justification;
};

/// Smallest m <= n_cap with distance(T^n x, z) < eps for every sampled
/// x in B(z, eps) and every n in [m, n_cap]. Requires a residual-certified
/// fixed point z. Throws when no such m exists within the cap.
InvarianceIndex invariance_index_empirical(const SelfMap& map, const Point& z, double epsilon,
                                           std::uint64_t seed, long sample_count, long n_cap);

/// m = m2 from the retract construction: for s >= m2 the uniform
/// approximation gives phi_s(t) <= t - delta on [eps/2, K] and
/// phi_s(t) < eps/2 + delta on [0, eps/2), so both B(z, eps) and B(z, K)
/// are invariant under T^s (conditional on a certified fixed point z).
InvarianceIndex invariance_index_constructive(const ControlFunction& phi, const ControlSequence& seq,
                                              double epsilon, double k_radius,
                                              long n_max = kDefaultUniformNMax);

struct RetractVerification {
    bool pass = false;
    long worst_entry = 0;
    long not_entered = 0;
    long samples = 0;
    long bound_m = 0;
};

/// Empirical soundness sweep: max first-entry index into B(z, eps) over
/// sampled starts in B(z, K) must be <= bound.m.
RetractVerification verify_retract_bound(const SelfMap& map, const Point& z,
                                         const RetractBound& bound, std::uint64_t seed,
                                         long sample_count);

struct UniformVerification {
    bool pass = false;
    long composed_bound = 0;  // inv.index + bound.m
    long cap = 0;
    long samples = 0;
    std::optional<long> first_failure_iterate;
};

/// Composed-bound sweep: distance(T^i x, z) < eps for every sampled
/// x in B(z, K) and every i in [inv.index + bound.m, cap]. cap = 0 means
/// composed bound + 32.
UniformVerification verify_uniform_convergence(const SelfMap& map, const Point& z, double epsilon,
                                               double k_radius, const RetractBound& bound,
                                               const InvarianceIndex& inv, std::uint64_t seed,
                                               long sample_count, long cap = 0);

}  // namespace contraction
