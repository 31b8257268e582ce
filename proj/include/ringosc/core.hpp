#pragma once

// Shared types for the delayed unidirectional phase-oscillator ring
//
//   dx_j/dt = omega + kappa * sin(x_{j+1}(t - tau) - x_j(t)),   j mod N
//
// Phases are kept unwrapped everywhere; wrap_phase() is only used for
// display and crossing logic.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace ringosc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute residual tolerance for roots of the frequency equation.
inline constexpr double kRootTolerance = 1e-12;

/// Invalid argument values (negative delay, non-finite input, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File could not be read, written or parsed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Homogeneous ring: N oscillators, natural frequency omega, coupling
/// strength kappa and a common transmission delay tau.
struct RingParams {
    int n = 2;
    double omega = 1.0;
    double kappa = 1.0;
    double tau = 0.0;

    /// Throws DomainError when N < 2, kappa <= 0, tau < 0 or a field is not finite.
    void validate() const;

    friend bool operator==(const RingParams&, const RingParams&) = default;
};

void to_json(nlohmann::json& j, const RingParams& p);
void from_json(const nlohmann::json& j, RingParams& p);

/// A point on the circle R / 2piZ, canonical representative in [0, 2pi).
class Phase {
public:
    constexpr Phase() = default;
    [[nodiscard]] constexpr double value() const { return value_; }

    friend Phase wrap_phase(double x);
    friend constexpr bool operator==(Phase, Phase) = default;

private:
    explicit constexpr Phase(double v) : value_(v) {}
    double value_ = 0.0;
};

/// x mod 2pi in [0, 2pi). Throws DomainError on non-finite input.
Phase wrap_phase(double x);

/// f(Omega) = Omega - omega + kappa * sin(Omega * tau); zero at synchronous frequencies.
double sync_residual(const RingParams& params, double omega_sync);

/// Synchronous solution x_j(t) = Omega t of the homogeneous ring.
struct SyncSolution {
    double omega_sync = 0.0;
    double stiffness = 0.0;  // K = kappa cos(Omega tau)
    bool stable = false;     // K > 0
    double residual = 0.0;   // |f(Omega)|
    bool degenerate = false; // merged double root at a fold (f and f' vanish)
};

/// Builds the solution record for a refined root: stiffness, stability and residual.
SyncSolution make_sync_solution(const RingParams& params, double omega_sync, bool degenerate = false);

void to_json(nlohmann::json& j, const SyncSolution& s);

}  // namespace ringosc
