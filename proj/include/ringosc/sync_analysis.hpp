#pragma once

// Synchronous solutions of the homogeneous ring: the frequency equation
//   Omega = omega - kappa sin(Omega tau),
// their stability, counts, tau-continuation with fold/transcritical points,
// and characteristic exponents of the factorised characteristic equation
//   mu + K - K exp(-mu tau) e_n = 0,   e_n = exp(2 pi i n / N).

#include <complex>
#include <vector>

#include "ringosc/core.hpp"

namespace ringosc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool empty() const { return !(hi > lo); }
};

struct SolutionSet {
    RingParams params;
    std::vector<SyncSolution> solutions;  // ascending Omega
    int n_stable = 0;
    int n_unstable = 0;
};

/// All roots of f(Omega) = Omega - omega + kappa sin(Omega tau) in
/// [omega - kappa, omega + kappa], bracketed on a uniform scan grid and
/// refined by bisection followed by Newton.
SolutionSet find_sync_solutions(const RingParams& params);

/// Scan pitch used by find_sync_solutions.
double scan_step(const RingParams& params);

/// The stable solution whose frequency is closest to omega.
/// Throws PreconditionError if the set has no stable solution.
const SyncSolution& closest_stable(const SolutionSet& set);

struct CountBounds {
    double lower = 0.0;       // kappa tau / pi - 1/2
    bool check = false;       // n_stable >= lower && n_unstable >= lower
    double floor_lower = 0.0; // floor(kappa tau / pi - 1/2), the integer-valid bound
    bool floor_check = false;
    double upper = 0.0;       // kappa tau / pi + 3/2
    bool upper_check = false;
    int n_stable = 0;
    int n_unstable = 0;
};

/// Compares the solution census against the count bounds. Requires 2 kappa tau > pi.
CountBounds count_bounds(const RingParams& params);

struct BranchPoint {
    double s = 0.0;  // s = Omega tau
    double tau = 0.0;
    double omega_sync = 0.0;
    double stiffness = 0.0;
    bool stable = false;
    int segment = 0;  // increments across poles and tau <= 0 gaps
};

/// Samples tau(s) = s / (omega + kappa sin(-s)), Omega(s) = s / tau(s) on
/// the grid s_range.lo, s_range.lo + ds, ... <= s_range.hi. Points with
/// tau <= 0 or |omega + kappa sin(-s)| < 1e-9 are dropped.
std::vector<BranchPoint> trace_branch(double omega, double kappa, Interval s_range, double ds);

enum class BifurcationKind { Transcritical, Fold };

struct Bifurcation {
    BifurcationKind kind = BifurcationKind::Transcritical;
    double tau = 0.0;
    double omega_sync = 0.0;
    double s = 0.0;
    bool degenerate = false;  // fold with omega = pi l kappa, l odd
};

const char* to_string(BifurcationKind kind);

/// Transcritical (K = 0) and fold (tau K = -1) points of the synchronous
/// branches with tau in tau_range, sorted by tau.
std::vector<Bifurcation> find_bifurcations(double omega, double kappa, Interval tau_range);

struct ComplexRect {
    double re_lo = -1.0;
    double re_hi = 1.0;
    double im_lo = -1.0;
    double im_hi = 1.0;
    [[nodiscard]] bool contains(std::complex<double> z) const {
        return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
    }
};

struct CharRoot {
    int branch_index = 0;
    std::complex<double> mu;
    double residual = 0.0;
};

struct CharRootResult {
    std::vector<CharRoot> roots;          // sorted by (branch, Re, Im)
    std::vector<ComplexRect> unresolved;  // subcells where every seed failed
};

/// mu + K - K exp(-mu tau) e_n for branch n of an N-ring.
std::complex<double> characteristic_function(double stiffness, double tau, int n_branch, int n_total,
                                             std::complex<double> mu);

/// Characteristic exponents of sol inside region for every branch n = 0..N-1,
/// found by Newton iteration from a seed grid.
CharRootResult characteristic_roots(const RingParams& params, const SyncSolution& sol, const ComplexRect& region,
                                    int threads = 1);

}  // namespace ringosc
