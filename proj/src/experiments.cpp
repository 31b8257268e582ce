#include "ringosc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "ringosc/parallel.hpp"

namespace ringosc {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PerturbationMapConfig, n, omega, kappa, tau, t_end, eps, sites, step)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BasinMapConfig, omega, kappa, tau, t_end, slope_lo, slope_hi, grid, step,
                                                rate_window)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(IngestConfig, sample_rate, fft_size, cutoff_hz, n, beta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SineDiscriminationConfig, omega, kappa, tau, t_end, ingest, f1, f2,
                                                amplitude, phase, sweep_lo, sweep_hi, sweep_step, theta_grid)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SpeechSurrogateConfig, omega, kappa, tau, ingest, words, takes, tasks,
                                                tones_per_word, tone_lo, tone_hi, jitter, voice_shift, amp_jitter, snr_db,
                                                train_takes, t_grid, theta_grid)

namespace {

int choice_int(Choice c) { return static_cast<int>(c); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Rejects override keys that the defaults do not have, recursing into objects.
void check_keys(const nlohmann::json& defaults, const nlohmann::json& overrides, const std::string& where) {
    if (!overrides.is_object()) {
        throw DomainError("experiment overrides must be a JSON object" + (where.empty() ? "" : " at " + where));
    }
    for (const auto& [key, value] : overrides.items()) {
        if (!defaults.contains(key)) {
            throw DomainError("unknown experiment parameter '" + (where.empty() ? key : where + "." + key) + "'");
        }
        if (defaults.at(key).is_object() && value.is_object()) {
            check_keys(defaults.at(key), value, where.empty() ? key : where + "." + key);
        }
    }
}

template <typename Config>
Config with_overrides(const nlohmann::json& overrides) {
    nlohmann::json params = Config{};
    check_keys(params, overrides, "");
    params.merge_patch(overrides);
    try {
        return params.get<Config>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad experiment parameter: ") + e.what());
    }
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const nlohmann::json& params, const std::vector<std::string>& header)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
        out_ << "# params: " << params.dump() << '\n';
        row(header);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i];
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) {
            throw IoError("failed writing " + path_.string());
        }
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

struct ScoredProbe {
    std::vector<double> s1;  // per horizon
    std::vector<double> s2;
    int label = 0;
};

// Grid search shared by the audio experiments; same tie rule as calibrate().
RecognitionConfig search_grid(const std::vector<ScoredProbe>& probes, const std::vector<double>& horizons,
                              std::vector<double> thetas, const RecognitionConfig& base, double& best_accuracy) {
    std::sort(thetas.begin(), thetas.end(), std::greater<>());
    RecognitionConfig best = base;
    best_accuracy = -1.0;
    for (std::size_t ti = 0; ti < horizons.size(); ++ti) {
        for (double th : thetas) {
            std::size_t correct = 0;
            for (const auto& p : probes) {
                correct += choice_int(decide(p.s1[ti], p.s2[ti], th).value) == p.label ? 1 : 0;
            }
            const double acc = probes.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(probes.size());
            if (acc > best_accuracy) {
                best_accuracy = acc;
                best.t_horizon = horizons[ti];
                best.threshold = th;
            }
        }
    }
    return best;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::string to_string(ExperimentName name) {
    switch (name) {
        case ExperimentName::PerturbationMap: return "PerturbationMap";
        case ExperimentName::BasinMap: return "BasinMap";
        case ExperimentName::SineDiscrimination: return "SineDiscrimination";
        case ExperimentName::SpeechSurrogate: return "SpeechSurrogate";
    }
    return "?";
}

ExperimentName experiment_from_string(const std::string& name) {
    for (auto e : {ExperimentName::PerturbationMap, ExperimentName::BasinMap, ExperimentName::SineDiscrimination,
                   ExperimentName::SpeechSurrogate}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    throw DomainError("unknown experiment '" + name + "'");
}

std::vector<double> default_theta_grid() {
    std::vector<double> out;
    for (int k = 4; k <= 32; ++k) {
        out.push_back(1.0 - std::pow(10.0, -k / 4.0));
    }
    return out;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<PerturbationCell> perturbation_map(const PerturbationMapConfig& cfg, int threads) {
    const RingParams params{cfg.n, cfg.omega, cfg.kappa, cfg.tau};
    params.validate();
    Pattern base{std::vector<double>(static_cast<std::size_t>(cfg.n), 1.0)};
    base.values[0] = 2.0;
    const auto set = find_sync_solutions(params);
    const Encoding enc = encode(params, base, closest_stable(set));

    std::vector<int> sites = cfg.sites;
    if (sites.empty()) {
        for (int j = 0; j < cfg.n; ++j) {
            sites.push_back(j);
        }
    }
    for (int j : sites) {
        if (j < 0 || j >= cfg.n) {
            throw DomainError("perturbation site out of range");
        }
    }
    RecognitionConfig rc;
    rc.t_horizon = cfg.t_end;
    rc.step = cfg.step;
    std::vector<PerturbationCell> cells(sites.size() * cfg.eps.size());
    parallel_for(cells.size(), threads, [&](std::size_t i) {
        const int site = sites[i / cfg.eps.size()];
        const double eps = cfg.eps[i % cfg.eps.size()];
        Pattern probe = base;
        probe.values[static_cast<std::size_t>(site)] += eps;
        cells[i] = {site, eps, recognize(enc, probe, rc).score};
    });
    return cells;
}

BasinMapResult basin_map(const BasinMapConfig& cfg, int threads) {
    const RingParams params{2, cfg.omega, cfg.kappa, cfg.tau};
    params.validate();
    if (cfg.grid < 1 || !(cfg.rate_window > 0.0) || !(cfg.rate_window < cfg.t_end)) {
        throw DomainError("basin map: need grid >= 1 and 0 < rate_window < t_end");
    }
    BasinMapResult result;
    result.solutions = find_sync_solutions(params);
    const auto& sols = result.solutions.solutions;
    const DelayVector delays = DelayVector::homogeneous(2, cfg.tau);
    const auto g = static_cast<std::size_t>(cfg.grid);
    auto slope = [&](std::size_t k) {
        return g == 1 ? cfg.slope_lo
                      : cfg.slope_lo + (cfg.slope_hi - cfg.slope_lo) * static_cast<double>(k) / static_cast<double>(g - 1);
    };
    // A cell snaps to a solution only within a quarter of the smallest frequency gap.
    double min_gap = 1.0;
    for (std::size_t i = 1; i < sols.size(); ++i) {
        min_gap = std::min(min_gap, sols[i].omega_sync - sols[i - 1].omega_sync);
    }
    result.cells.resize(g * g);
    parallel_for(result.cells.size(), threads, [&](std::size_t i) {
        const double a = slope(i / g);
        const double b = slope(i % g);
        std::vector<std::vector<HistoryKnot>> knots;
        for (double slope_j : {a, b}) {
            knots.push_back({{-cfg.tau, -slope_j * cfg.tau, slope_j}, {0.0, 0.0, slope_j}});
        }
        const auto hist = HistoryFunction::sampled(knots, cfg.tau);
        IntegrationOptions opts;
        opts.step = cfg.step;
        opts.record_from = cfg.t_end - cfg.rate_window;
        opts.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.rate_window / cfg.step / 8.0)));
        const auto traj = integrate(params, delays, hist, cfg.t_end, opts);
        const std::size_t last = traj.samples() - 1;
        const double dt = traj.times[last] - traj.times[0];
        const double f1 = (traj.phase(last, 0) - traj.phase(0, 0)) / dt;
        const double f2 = (traj.phase(last, 1) - traj.phase(0, 1)) / dt;
        BasinCell cell{a, b, 0.5 * (f1 + f2), std::abs(f1 - f2), -1};
        if (cell.spread < 1e-3) {
            std::size_t best = 0;
            for (std::size_t s = 1; s < sols.size(); ++s) {
                if (std::abs(sols[s].omega_sync - cell.freq) < std::abs(sols[best].omega_sync - cell.freq)) {
                    best = s;
                }
            }
            if (std::abs(sols[best].omega_sync - cell.freq) < 0.25 * min_gap) {
                cell.solution = static_cast<int>(best);
            }
        }
        result.cells[i] = cell;
    });
    return result;
}

Pattern ingest(const AudioClip& clip, const IngestConfig& cfg, double tau) {
    auto spec = power_spectrum(clip, cfg.fft_size);
    apply_cutoff(spec, cfg.cutoff_hz);
    return to_pattern(spec, cfg.n, tau, cfg.beta);
}

SineDiscriminationResult sine_discrimination(const SineDiscriminationConfig& cfg, std::vector<double> probes,
                                             int threads) {
    const RingParams params{static_cast<int>(cfg.ingest.n), cfg.omega, cfg.kappa, cfg.tau};
    params.validate();
    const double duration = static_cast<double>(cfg.ingest.fft_size) / cfg.ingest.sample_rate;
    auto pattern_of = [&](double f) {
        const auto clip = synthesize(Sine{f, cfg.amplitude, cfg.phase}, duration, cfg.ingest.sample_rate);
        return ingest(clip, cfg.ingest, cfg.tau);
    };
    const SyncSolution ref = closest_stable(find_sync_solutions(params));
    const Encoding enc1 = encode(params, pattern_of(cfg.f1), ref);
    const Encoding enc2 = encode(params, pattern_of(cfg.f2), ref);

    // Training probes: small offsets are positives, offsets of 0.3 Hz and more are negatives.
    std::vector<std::pair<double, int>> train;
    for (double d : {-0.03, 0.0, 0.03}) {
        train.emplace_back(cfg.f1 + d, choice_int(Choice::Pattern1));
        train.emplace_back(cfg.f2 + d, choice_int(Choice::Pattern2));
    }
    for (double d : {0.3, 0.5, 0.8, 1.2}) {
        for (double f : {cfg.f1 - d, cfg.f1 + d, cfg.f2 - d, cfg.f2 + d}) {
            train.emplace_back(f, choice_int(Choice::None));
        }
    }
    for (double d : {-2.0, 0.0, 2.0}) {
        train.emplace_back(0.5 * (cfg.f1 + cfg.f2) + d, choice_int(Choice::None));
    }

    RecognitionConfig rc;
    rc.t_horizon = cfg.t_end;
    const double horizon = cfg.t_end;
    auto score_pair = [&](double f) {
        const auto q = pattern_of(f);
        return std::pair{recognition_scores(enc1, q, std::span(&horizon, 1), rc).front(),
                         recognition_scores(enc2, q, std::span(&horizon, 1), rc).front()};
    };

    std::vector<ScoredProbe> scored(train.size());
    parallel_for(train.size(), threads, [&](std::size_t i) {
        const auto [s1, s2] = score_pair(train[i].first);
        scored[i] = {{s1}, {s2}, train[i].second};
    });
    SineDiscriminationResult result;
    const auto thetas = cfg.theta_grid.empty() ? default_theta_grid() : cfg.theta_grid;
    result.calibration.config =
        search_grid(scored, {cfg.t_end}, thetas, rc, result.calibration.accuracy);

    if (probes.empty()) {
        if (!(cfg.sweep_step > 0.0) || !(cfg.sweep_hi >= cfg.sweep_lo)) {
            throw DomainError("sine sweep: need sweep_step > 0 and sweep_hi >= sweep_lo");
        }
        const auto count = static_cast<std::size_t>(std::floor((cfg.sweep_hi - cfg.sweep_lo) / cfg.sweep_step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) {
            probes.push_back(cfg.sweep_lo + cfg.sweep_step * static_cast<double>(k));
        }
    }
    result.rows.resize(probes.size());
    const double theta = result.calibration.config.threshold;
    parallel_for(probes.size(), threads, [&](std::size_t i) {
        const auto [s1, s2] = score_pair(probes[i]);
        result.rows[i] = {probes[i], s1, s2, decide(s1, s2, theta).value};
    });
    return result;
}

SpeechSurrogateResult speech_surrogate(const SpeechSurrogateConfig& cfg, std::uint64_t seed, int threads) {
    if (cfg.words < 2 || cfg.takes < 2 || cfg.tasks < 1 || cfg.tones_per_word < 1 || cfg.t_grid.empty()) {
        throw DomainError("speech surrogate: need words >= 2, takes >= 2, tasks >= 1 and a non-empty t_grid");
    }
    for (int t : cfg.train_takes) {
        if (t < 1 || t >= cfg.takes) {
            throw DomainError("speech surrogate: training takes must lie in 1..takes-1");
        }
    }
    if (static_cast<int>(cfg.train_takes.size()) >= cfg.takes - 1) {
        throw DomainError("speech surrogate: no takes left for evaluation");
    }
    if (cfg.tasks > cfg.words * (cfg.words - 1) / 2) {
        throw DomainError("speech surrogate: more tasks than distinct word pairs");
    }
    const RingParams params{static_cast<int>(cfg.ingest.n), cfg.omega, cfg.kappa, cfg.tau};
    params.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Words: fixed tone sets. Takes: two voices, jittered frequencies and amplitudes, additive noise.
    const double duration = static_cast<double>(cfg.ingest.fft_size) / cfg.ingest.sample_rate;
    const auto takes = static_cast<std::size_t>(cfg.takes);
    std::vector<MultiTone> clips_spec(static_cast<std::size_t>(cfg.words) * takes);
    std::vector<std::uint64_t> noise_seeds(clips_spec.size());
    for (int w = 0; w < cfg.words; ++w) {
        std::vector<Tone> word;
        for (int k = 0; k < cfg.tones_per_word; ++k) {
            const double f = cfg.tone_lo * std::pow(cfg.tone_hi / cfg.tone_lo, unit(rng));
            word.push_back({f, 0.3 + 0.7 * unit(rng), kTwoPi * unit(rng)});
        }
        for (std::size_t t = 0; t < takes; ++t) {
            MultiTone take;
            for (const auto& tone : word) {
                const double voice = 2 * t < takes ? 1.0 : 1.0 + cfg.voice_shift;
                const double f = voice * tone.freq * (1.0 + cfg.jitter * (2.0 * unit(rng) - 1.0));
                const double a = tone.amp * (1.0 + cfg.amp_jitter * (2.0 * unit(rng) - 1.0));
                take.tones.push_back({f, a, kTwoPi * unit(rng)});
            }
            clips_spec[static_cast<std::size_t>(w) * takes + t] = take;
            noise_seeds[static_cast<std::size_t>(w) * takes + t] = rng();
        }
    }
    std::vector<Pattern> patterns(clips_spec.size());
    parallel_for(patterns.size(), threads, [&](std::size_t i) {
        auto clip = synthesize(clips_spec[i], duration, cfg.ingest.sample_rate);
        add_noise(clip, cfg.snr_db, noise_seeds[i]);
        patterns[i] = ingest(clip, cfg.ingest, cfg.tau);
    });

    // Tasks: distinct word pairs; take 0 of each word is encoded.
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < cfg.words; ++a) {
        for (int b = a + 1; b < cfg.words; ++b) {
            pairs.emplace_back(a, b);
        }
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(static_cast<std::size_t>(cfg.tasks));

    const SyncSolution ref = closest_stable(find_sync_solutions(params));
    std::vector<Encoding> encodings;
    for (const auto& [a, b] : pairs) {
        encodings.push_back(encode(params, patterns[static_cast<std::size_t>(a) * takes], ref));
        encodings.push_back(encode(params, patterns[static_cast<std::size_t>(b) * takes], ref));
    }

    SpeechSurrogateResult result;
    for (std::size_t task = 0; task < pairs.size(); ++task) {
        for (int side = 0; side < 2; ++side) {
            const int word = side == 0 ? pairs[task].first : pairs[task].second;
            for (int t = 1; t < cfg.takes; ++t) {
                SpeechTrial trial;
                trial.task = static_cast<int>(task);
                trial.word = word;
                trial.take = t;
                trial.label = choice_int(side == 0 ? Choice::Pattern1 : Choice::Pattern2);
                trial.train = std::find(cfg.train_takes.begin(), cfg.train_takes.end(), t) != cfg.train_takes.end();
                result.trials.push_back(trial);
            }
        }
    }
    const auto horizons = sorted_unique(cfg.t_grid);
    RecognitionConfig base;
    std::vector<ScoredProbe> scored(result.trials.size());
    parallel_for(2 * scored.size(), threads, [&](std::size_t i) {
        const auto& trial = result.trials[i / 2];
        const auto& enc = encodings[2 * static_cast<std::size_t>(trial.task) + i % 2];
        const auto& probe = patterns[static_cast<std::size_t>(trial.word) * takes + static_cast<std::size_t>(trial.take)];
        auto s = recognition_scores(enc, probe, horizons, base);
        (i % 2 == 0 ? scored[i / 2].s1 : scored[i / 2].s2) = std::move(s);
    });
    for (std::size_t i = 0; i < scored.size(); ++i) {
        scored[i].label = result.trials[i].label;
    }
    std::vector<ScoredProbe> train;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (result.trials[i].train) {
            train.push_back(scored[i]);
        }
    }
    const auto thetas = cfg.theta_grid.empty() ? default_theta_grid() : cfg.theta_grid;
    result.config = search_grid(train, horizons, thetas, base, result.train_accuracy);
    const auto ti = static_cast<std::size_t>(
        std::find(horizons.begin(), horizons.end(), result.config.t_horizon) - horizons.begin());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        auto& trial = result.trials[i];
        trial.score1 = scored[i].s1[ti];
        trial.score2 = scored[i].s2[ti];
        trial.decision = decide(trial.score1, trial.score2, result.config.threshold).value;
        if (!trial.train) {
            ++result.test_count;
            correct += choice_int(trial.decision) == trial.label ? 1 : 0;
        }
    }
    result.test_accuracy = result.test_count ? static_cast<double>(correct) / static_cast<double>(result.test_count) : 0.0;
    std::tie(result.ci_lo, result.ci_hi) = wilson_interval(correct, result.test_count);
    return result;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    ExperimentReport report;
    report.name = to_string(spec.name);
    auto csv = [&](const std::string& file, const std::vector<std::string>& header) {
        report.files.push_back(out_dir / file);
        return CsvWriter(report.files.back(), report.params, header);
    };

    switch (spec.name) {
        case ExperimentName::PerturbationMap: {
            const auto cfg = with_overrides<PerturbationMapConfig>(spec.overrides);
            report.params = cfg;
            report.params["seed"] = spec.seed;
            const auto cells = perturbation_map(cfg, spec.threads);
            auto out = csv("perturbation_map.csv", {"site", "eps", "score"});
            double lo = 1.0, hi = 0.0;
            for (const auto& c : cells) {
                out.row({std::to_string(c.site), fmt(c.eps), fmt(c.score)});
                lo = std::min(lo, c.score);
                hi = std::max(hi, c.score);
            }
            out.close();
            report.summary = {{"cells", cells.size()}, {"min_score", lo}, {"max_score", hi}};
            break;
        }
        case ExperimentName::BasinMap: {
            const auto cfg = with_overrides<BasinMapConfig>(spec.overrides);
            report.params = cfg;
            report.params["seed"] = spec.seed;
            const auto res = basin_map(cfg, spec.threads);
            auto sols = csv("basin_solutions.csv", {"index", "omega_sync", "K", "stable"});
            for (std::size_t i = 0; i < res.solutions.solutions.size(); ++i) {
                const auto& s = res.solutions.solutions[i];
                sols.row({std::to_string(i), fmt(s.omega_sync), fmt(s.stiffness), s.stable ? "1" : "0"});
            }
            sols.close();
            auto out = csv("basin_map.csv", {"slope1", "slope2", "freq", "spread", "solution"});
            std::vector<int> hits(res.solutions.solutions.size(), 0);
            int unsynced = 0;
            for (const auto& c : res.cells) {
                out.row({fmt(c.slope1), fmt(c.slope2), fmt(c.freq), fmt(c.spread), std::to_string(c.solution)});
                (c.solution >= 0 ? hits[static_cast<std::size_t>(c.solution)] : unsynced) += 1;
            }
            out.close();
            report.summary = {{"solutions", res.solutions.solutions.size()},
                              {"stable", res.solutions.n_stable},
                              {"cells_per_solution", hits},
                              {"unsynchronised", unsynced}};
            break;
        }
        case ExperimentName::SineDiscrimination: {
            const auto cfg = with_overrides<SineDiscriminationConfig>(spec.overrides);
            report.params = cfg;
            report.params["seed"] = spec.seed;
            const auto res = sine_discrimination(cfg, {}, spec.threads);
            auto out = csv("sine_discrimination.csv", {"freq", "score1", "score2", "decision"});
            for (const auto& r : res.rows) {
                out.row({fmt(r.freq), fmt(r.score1), fmt(r.score2), std::to_string(choice_int(r.decision))});
            }
            out.close();
            report.summary = {{"calibration", res.calibration.config}, {"train_accuracy", res.calibration.accuracy}};
            break;
        }
        case ExperimentName::SpeechSurrogate: {
            const auto cfg = with_overrides<SpeechSurrogateConfig>(spec.overrides);
            report.params = cfg;
            report.params["seed"] = spec.seed;
            const auto res = speech_surrogate(cfg, spec.seed, spec.threads);
            auto out = csv("speech_trials.csv",
                           {"task", "word", "take", "label", "split", "score1", "score2", "decision"});
            for (const auto& t : res.trials) {
                out.row({std::to_string(t.task), std::to_string(t.word), std::to_string(t.take), std::to_string(t.label),
                         t.train ? "train" : "test", fmt(t.score1), fmt(t.score2), std::to_string(choice_int(t.decision))});
            }
            out.close();
            report.summary = {{"calibration", res.config},     {"train_accuracy", res.train_accuracy},
                              {"test_accuracy", res.test_accuracy}, {"test_trials", res.test_count},
                              {"ci95", {res.ci_lo, res.ci_hi}},   {"reference_accuracy_human_speech", 0.75}};
            break;
        }
    }
    return report;
}

}  // namespace ringosc
