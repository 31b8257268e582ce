#include "ringosc/core.hpp"

namespace ringosc {

void RingParams::validate() const {
    if (n < 2) {
        throw DomainError("ring needs at least 2 oscillators, got n=" + std::to_string(n));
    }
    if (!std::isfinite(omega) || !std::isfinite(kappa) || !std::isfinite(tau)) {
        throw DomainError("ring parameters must be finite");
    }
    if (kappa <= 0.0) {
        throw DomainError("coupling strength kappa must be positive");
    }
    if (tau < 0.0) {
        throw DomainError("delay tau must be non-negative");
    }
}

void to_json(nlohmann::json& j, const RingParams& p) {
    j = nlohmann::json{{"n", p.n}, {"omega", p.omega}, {"kappa", p.kappa}, {"tau", p.tau}};
}

void from_json(const nlohmann::json& j, RingParams& p) {
    j.at("n").get_to(p.n);
    j.at("omega").get_to(p.omega);
    j.at("kappa").get_to(p.kappa);
    j.at("tau").get_to(p.tau);
}

Phase wrap_phase(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("wrap_phase: non-finite input");
    }
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2pi
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return Phase(r);
}

double sync_residual(const RingParams& params, double omega_sync) {
    if (!std::isfinite(omega_sync)) {
        throw DomainError("sync_residual: non-finite frequency");
    }
    return omega_sync - params.omega + params.kappa * std::sin(omega_sync * params.tau);
}

SyncSolution make_sync_solution(const RingParams& params, double omega_sync, bool degenerate) {
    SyncSolution s;
    s.omega_sync = omega_sync;
    s.stiffness = params.kappa * std::cos(omega_sync * params.tau);
    s.stable = s.stiffness > 0.0;
    s.residual = std::abs(sync_residual(params, omega_sync));
    s.degenerate = degenerate;
    return s;
}

void to_json(nlohmann::json& j, const SyncSolution& s) {
    j = nlohmann::json{{"omega_sync", s.omega_sync},
                       {"K", s.stiffness},
                       {"stable", s.stable},
                       {"residual", s.residual},
                       {"degenerate", s.degenerate}};
}

}  // namespace ringosc
