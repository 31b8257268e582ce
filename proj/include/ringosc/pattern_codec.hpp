#pragma once

// Time-shift encoding: a firing pattern P = (p_1..p_N) becomes the per-edge
// delays tau_j = tau - (p_{j+1} - p_j), with p_{N+1} = p_1. The encoded ring
// then carries y_j(t) = Omega (t - p_j) as a periodic orbit with the same
// stability as the synchronous state Omega t of the homogeneous ring.

#include <vector>

#include "ringosc/core.hpp"
#include "ringosc/dde.hpp"

namespace ringosc {

struct Pattern {
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    void validate(std::size_t n) const;
};

void to_json(nlohmann::json& j, const Pattern& p);
void from_json(const nlohmann::json& j, Pattern& p);

struct Encoding {
    RingParams params;
    DelayVector delays;
    SyncSolution omega_ref;
    Pattern pattern;
};

void to_json(nlohmann::json& j, const Encoding& e);
void from_json(const nlohmann::json& j, Encoding& e);

/// max_j (p_{j+1} - p_j) over the cyclic differences: the smallest base delay
/// for which every encoded delay is non-negative.
double min_base_delay(const Pattern& pattern);

/// Thrown by encode() when the base delay is too small; carries the minimum.
class DelayTooSmallError : public DomainError {
public:
    DelayTooSmallError(const std::string& what, double minimal_tau) : DomainError(what), minimal_tau_(minimal_tau) {}
    [[nodiscard]] double minimal_tau() const { return minimal_tau_; }

private:
    double minimal_tau_;
};

Encoding encode(const RingParams& params, const Pattern& pattern, const SyncSolution& omega_ref);

/// Linear-ramp history y_j(t) = Omega_ref (t - q_j) on [-max tau_j, 0].
HistoryFunction probe_history(const Encoding& encoding, const Pattern& probe);

}  // namespace ringosc
