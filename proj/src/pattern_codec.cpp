#include "ringosc/pattern_codec.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ringosc {

void Pattern::validate(std::size_t n) const {
    if (values.size() != n) {
        std::ostringstream msg;
        msg << "pattern has " << values.size() << " values, ring has " << n << " oscillators";
        throw DomainError(msg.str());
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DomainError("pattern values must be finite");
        }
    }
}

void to_json(nlohmann::json& j, const Pattern& p) { j = p.values; }

void from_json(const nlohmann::json& j, Pattern& p) {
    if (!j.is_array()) {
        throw IoError("pattern must be a JSON array of numbers");
    }
    p.values = j.get<std::vector<double>>();
}

void to_json(nlohmann::json& j, const Encoding& e) {
    j = nlohmann::json{{"params", e.params},
                       {"omega_ref", e.omega_ref.omega_sync},
                       {"delays", e.delays.delays},
                       {"pattern", e.pattern}};
}

void from_json(const nlohmann::json& j, Encoding& e) {
    j.at("params").get_to(e.params);
    e.params.validate();
    e.omega_ref = make_sync_solution(e.params, j.at("omega_ref").get<double>());
    e.delays.delays = j.at("delays").get<std::vector<double>>();
    j.at("pattern").get_to(e.pattern);
    e.pattern.validate(static_cast<std::size_t>(e.params.n));
    if (e.delays.size() != e.pattern.size()) {
        throw IoError("encoding: delays and pattern differ in length");
    }
}

double min_base_delay(const Pattern& pattern) {
    const auto& p = pattern.values;
    if (p.empty()) {
        return 0.0;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.size(); ++j) {
        m = std::max(m, p[(j + 1) % p.size()] - p[j]);
    }
    return m;
}

Encoding encode(const RingParams& params, const Pattern& pattern, const SyncSolution& omega_ref) {
    params.validate();
    const auto n = static_cast<std::size_t>(params.n);
    pattern.validate(n);
    if (!omega_ref.stable) {
        throw PreconditionError("encode: reference frequency must be a stable synchronous solution");
    }
    if (!(std::abs(sync_residual(params, omega_ref.omega_sync)) <= 1e-9)) {
        throw PreconditionError("encode: reference frequency is not a root of the frequency equation");
    }
    Encoding e;
    e.params = params;
    e.pattern = pattern;
    e.omega_ref = omega_ref;
    e.delays.delays.resize(n);
    const auto& p = pattern.values;
    for (std::size_t j = 0; j < n; ++j) {
        e.delays.delays[j] = params.tau - (p[(j + 1) % n] - p[j]);
    }
    for (double d : e.delays.delays) {
        if (d < 0.0) {
            const double minimal = min_base_delay(pattern);
            std::ostringstream msg;
            msg << "encode: base delay tau = " << params.tau << " gives a negative edge delay; need tau >= "
                << minimal;
            throw DelayTooSmallError(msg.str(), minimal);
        }
    }
    return e;
}

HistoryFunction probe_history(const Encoding& encoding, const Pattern& probe) {
    probe.validate(encoding.pattern.size());
    return HistoryFunction::linear_ramp(encoding.omega_ref.omega_sync, probe.values, encoding.delays.max());
}

}  // namespace ringosc
