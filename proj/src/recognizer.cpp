#include "ringosc/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <future>
#include <limits>

#include "ringosc/parallel.hpp"

namespace ringosc {

namespace {

constexpr double kTieTolerance = 1e-9;

const char* score_name(ScoreKind k) { return k == ScoreKind::CrossCorrelation ? "cross_correlation" : "order_parameter"; }

// Scores for every horizon, from one integration.
std::vector<double> score_horizons(const Encoding& enc, const Pattern& probe, std::span<const double> horizons,
                                   const RecognitionConfig& cfg) {
    if (horizons.empty()) {
        throw DomainError("recognition: no horizons requested");
    }
    const auto n = static_cast<std::size_t>(enc.params.n);
    probe.validate(n);
    const double window = effective_window(enc, cfg);
    const double t_min = *std::min_element(horizons.begin(), horizons.end());
    const double t_max = *std::max_element(horizons.begin(), horizons.end());
    if (!(t_min > 0.0) || !(window < t_min)) {
        throw DomainError("recognition: need 0 <= window < T for every horizon");
    }
    const double h = cfg.step > 0.0 ? cfg.step : default_step(enc.delays);
    const double period = kTwoPi / enc.omega_ref.omega_sync;
    const auto& p = enc.pattern.values;
    const double p_min = std::min(0.0, *std::min_element(p.begin(), p.end()));
    const double p_max = std::max(0.0, *std::max_element(p.begin(), p.end()));

    const double lookback = cfg.score == ScoreKind::CrossCorrelation ? 1.1 * std::abs(period) + window : window;
    IntegrationOptions opts;
    opts.step = h;
    opts.record_from = std::max(0.0, t_min - lookback + p_min - 2.0 * h);
    const auto history = probe_history(enc, probe);
    const Trajectory traj = integrate(enc.params, enc.delays, history, t_max + p_max + 2.0 * h, opts);

    auto y_at = [&](std::size_t j, double s) { return s <= 0.0 ? history.value(j, s) : traj.phase_at(j, s); };
    std::vector<double> x(n);
    auto back_shifted_r = [&](double t) {
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = y_at(j, t + p[j]);
        }
        return order_parameter(x);
    };

    std::vector<std::vector<double>> crossings;
    if (cfg.score == ScoreKind::CrossCorrelation) {
        crossings = crossing_times(traj, wrap_phase(0.0));
    }

    std::vector<double> out;
    out.reserve(horizons.size());
    for (double t_end : horizons) {
        if (cfg.score == ScoreKind::OrderParameter) {
            const auto k = static_cast<std::size_t>(std::llround(window / h));
            if (k == 0) {
                out.push_back(back_shifted_r(t_end));
                continue;
            }
            double sum = 0.0;
            for (std::size_t i = 0; i <= k; ++i) {
                sum += back_shifted_r(t_end - window + window * static_cast<double>(i) / static_cast<double>(k));
            }
            out.push_back(sum / static_cast<double>(k + 1));
            continue;
        }
        // Phasors of the last crossing of each oscillator before T against the pattern.
        std::vector<std::complex<double>> a(n), b(n);
        bool complete = true;
        for (std::size_t j = 0; j < n && complete; ++j) {
            const auto& list = crossings[j];
            const auto it = std::upper_bound(list.begin(), list.end(), t_end);
            if (it == list.begin()) {
                complete = false;
                break;
            }
            a[j] = std::polar(1.0, kTwoPi * *(it - 1) / period);
            b[j] = std::polar(1.0, kTwoPi * p[j] / period);
        }
        if (!complete) {
            out.push_back(0.0);
            continue;
        }
        double best = 0.0;
        for (std::size_t lag = 0; lag < n; ++lag) {
            std::complex<double> acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += a[(j + lag) % n] * std::conj(b[j]);
            }
            best = std::max(best, std::abs(acc) / static_cast<double>(n));
        }
        out.push_back(std::min(best, 1.0));
    }
    return out;
}

Choice decision_for(std::span<const Encoding> encodings, std::span<const double> scores, double threshold) {
    if (encodings.size() == 1) {
        return scores[0] >= threshold ? Choice::Pattern2 : Choice::None;
    }
    return decide(scores[0], scores[1], threshold).value;
}

void check_encodings(std::span<const Encoding> encodings) {
    if (encodings.empty() || encodings.size() > 2) {
        throw DomainError("calibration supports one or two encodings");
    }
    if (encodings.size() == 2 && encodings[0].params.n != encodings[1].params.n) {
        throw DomainError("encodings must share the ring size");
    }
}

// scores[probe * n_enc + enc][horizon]
std::vector<std::vector<double>> score_table(std::span<const Encoding> encodings, std::span<const LabeledProbe> labeled,
                                             std::span<const double> horizons, const RecognitionConfig& cfg,
                                             int threads) {
    const std::size_t n_enc = encodings.size();
    std::vector<std::vector<double>> table(labeled.size() * n_enc);
    parallel_for(table.size(), threads, [&](std::size_t i) {
        table[i] = score_horizons(encodings[i % n_enc], labeled[i / n_enc].probe, horizons, cfg);
    });
    return table;
}

}  // namespace

void RecognitionConfig::validate() const {
    if (!(t_horizon > 0.0) || !std::isfinite(t_horizon)) {
        throw DomainError("recognition config: T must be positive");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw DomainError("recognition config: threshold must lie in (0, 1]");
    }
    if (window && !(*window >= 0.0 && *window < t_horizon)) {
        throw DomainError("recognition config: window must satisfy 0 <= window < T");
    }
    if (step < 0.0) {
        throw DomainError("recognition config: step must be >= 0");
    }
}

void to_json(nlohmann::json& j, const RecognitionConfig& c) {
    j = nlohmann::json{{"t_horizon", c.t_horizon}, {"threshold", c.threshold}, {"score", score_name(c.score)}};
    j["window"] = c.window ? nlohmann::json(*c.window) : nlohmann::json(nullptr);
    if (c.step > 0.0) {
        j["step"] = c.step;
    }
}

void from_json(const nlohmann::json& j, RecognitionConfig& c) {
    c = RecognitionConfig{};
    j.at("t_horizon").get_to(c.t_horizon);
    j.at("threshold").get_to(c.threshold);
    if (j.contains("window") && !j.at("window").is_null()) {
        c.window = j.at("window").get<double>();
    }
    if (j.contains("score")) {
        const auto s = j.at("score").get<std::string>();
        if (s == "cross_correlation") {
            c.score = ScoreKind::CrossCorrelation;
        } else if (s == "order_parameter") {
            c.score = ScoreKind::OrderParameter;
        } else {
            throw IoError("recognition config: unknown score '" + s + "'");
        }
    }
    if (j.contains("step")) {
        j.at("step").get_to(c.step);
    }
    c.validate();
}

double effective_window(const Encoding& encoding, const RecognitionConfig& cfg) {
    if (cfg.window) {
        return *cfg.window;
    }
    return kTwoPi / std::abs(encoding.omega_ref.omega_sync);
}

Recognition recognize(const Encoding& encoding, const Pattern& probe, const RecognitionConfig& cfg) {
    cfg.validate();
    const double horizon = cfg.t_horizon;
    const double score = score_horizons(encoding, probe, std::span(&horizon, 1), cfg).front();
    return {score, score >= cfg.threshold};
}

std::vector<double> recognition_scores(const Encoding& encoding, const Pattern& probe,
                                       std::span<const double> horizons, const RecognitionConfig& cfg) {
    return score_horizons(encoding, probe, horizons, cfg);
}

Decision decide(double score1, double score2, double threshold) {
    Decision d;
    d.score1 = score1;
    d.score2 = score2;
    if (score1 < threshold && score2 < threshold) {
        d.value = Choice::None;
    } else if (score1 >= threshold && score2 >= threshold && std::abs(score1 - score2) < kTieTolerance) {
        d.value = Choice::None;
        d.tie = true;
    } else {
        d.value = score1 > score2 ? Choice::Pattern1 : Choice::Pattern2;
    }
    return d;
}

Decision classify(const Encoding& enc1, const Encoding& enc2, const Pattern& probe, const RecognitionConfig& cfg) {
    if (enc1.params.n != enc2.params.n) {
        throw DomainError("classify: encodings must share the ring size");
    }
    cfg.validate();
    auto second = std::async(std::launch::async, [&] { return recognize(enc2, probe, cfg); });
    const auto first = recognize(enc1, probe, cfg);
    return decide(first.score, second.get().score, cfg.threshold);
}

Calibration calibrate(std::span<const Encoding> encodings, std::span<const LabeledProbe> labeled,
                      std::span<const double> t_grid, std::span<const double> theta_grid,
                      const RecognitionConfig& base, int threads) {
    check_encodings(encodings);
    if (labeled.empty() || t_grid.empty() || theta_grid.empty()) {
        throw DomainError("calibrate: grids and labelled set must be non-empty");
    }
    std::vector<double> horizons(t_grid.begin(), t_grid.end());
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    std::vector<double> thetas(theta_grid.begin(), theta_grid.end());
    std::sort(thetas.begin(), thetas.end(), std::greater<>());
    for (double th : thetas) {
        if (!(th > 0.0 && th <= 1.0)) {
            throw DomainError("calibrate: thresholds must lie in (0, 1]");
        }
    }

    const auto table = score_table(encodings, labeled, horizons, base, threads);
    const std::size_t n_enc = encodings.size();
    Calibration best;
    best.accuracy = -1.0;
    std::vector<double> s(n_enc);
    for (std::size_t ti = 0; ti < horizons.size(); ++ti) {
        for (double th : thetas) {
            std::size_t correct = 0;
            for (std::size_t pi = 0; pi < labeled.size(); ++pi) {
                for (std::size_t e = 0; e < n_enc; ++e) {
                    s[e] = table[pi * n_enc + e][ti];
                }
                const Choice c = decision_for(encodings, s, th);
                const int want = labeled[pi].label;
                correct += static_cast<int>(c) == (n_enc == 1 ? (want != 0 ? 1 : 0) : want) ? 1 : 0;
            }
            const double acc = static_cast<double>(correct) / static_cast<double>(labeled.size());
            if (acc > best.accuracy) {
                best.accuracy = acc;
                best.config = base;
                best.config.t_horizon = horizons[ti];
                best.config.threshold = th;
            }
        }
    }
    return best;
}

double accuracy(std::span<const Encoding> encodings, std::span<const LabeledProbe> labeled,
                const RecognitionConfig& cfg, int threads) {
    const double t = cfg.t_horizon;
    const double th = cfg.threshold;
    return calibrate(encodings, labeled, std::span(&t, 1), std::span(&th, 1), cfg, threads).accuracy;
}

}  // namespace ringosc
