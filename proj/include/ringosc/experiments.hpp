#pragma once

// Scripted numerical experiments. Each one takes a JSON map of parameter
// overrides, is deterministic for a fixed seed and writes CSV files whose
// first line is "# params: {...}" followed by a header row.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringosc/recognizer.hpp"
#include "ringosc/signal.hpp"
#include "ringosc/sync_analysis.hpp"

namespace ringosc {

enum class ExperimentName { PerturbationMap, BasinMap, SineDiscrimination, SpeechSurrogate };

std::string to_string(ExperimentName name);
ExperimentName experiment_from_string(const std::string& name);

struct ExperimentSpec {
    ExperimentName name = ExperimentName::PerturbationMap;
    nlohmann::json overrides = nlohmann::json::object();
    std::uint64_t seed = 0;
    int threads = 1;
};

struct ExperimentReport {
    std::string name;
    nlohmann::json params;   // full parameter set after overrides
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
};

/// Runs the named experiment and writes its CSV files into out_dir (created if missing).
ExperimentReport run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

// Single-site perturbations P + eps e_j of P = (2, 1, ..., 1).
struct PerturbationMapConfig {
    int n = 50;
    double omega = 1.0;
    double kappa = 1.0;
    double tau = 3.0;
    double t_end = 900.0;
    std::vector<double> eps{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<int> sites;  // 0-based; empty = all
    double step = 0.0;
};

struct PerturbationCell {
    int site = 0;
    double eps = 0.0;
    double score = 0.0;
};

std::vector<PerturbationCell> perturbation_map(const PerturbationMapConfig& cfg, int threads = 1);

// Two oscillators started on ramps [Omega_1 t, Omega_2 t].
struct BasinMapConfig {
    double omega = 2.0;
    double kappa = 1.0;
    double tau = 20.0;
    double t_end = 5000.0;
    double slope_lo = 1.0;
    double slope_hi = 3.0;
    int grid = 21;
    double step = 0.02;
    double rate_window = 100.0;  // final frequency = phase advance over this window
};

struct BasinCell {
    double slope1 = 0.0;
    double slope2 = 0.0;
    double freq = 0.0;        // mean final frequency
    double spread = 0.0;      // |freq_1 - freq_2|
    int solution = -1;        // index into the solution list, -1 if not synchronised
};

struct BasinMapResult {
    SolutionSet solutions;
    std::vector<BasinCell> cells;
};

BasinMapResult basin_map(const BasinMapConfig& cfg, int threads = 1);

// Front end producing probe patterns from audio.
struct IngestConfig {
    double sample_rate = 64.0;
    std::size_t fft_size = 1024;
    double cutoff_hz = 20.0;
    std::size_t n = 50;
    double beta = 0.9;
};

Pattern ingest(const AudioClip& clip, const IngestConfig& cfg, double tau);

struct SineDiscriminationConfig {
    double omega = 1.0;
    double kappa = 1.0;
    double tau = 3.0;
    double t_end = 50.0;
    IngestConfig ingest;
    double f1 = 5.0;
    double f2 = 15.0;
    double amplitude = 0.8;
    double phase = 0.3;
    double sweep_lo = 3.0;
    double sweep_hi = 17.0;
    double sweep_step = 0.05;
    std::vector<double> theta_grid;  // empty: 1 - 10^(-k/4) for k = 4..32
};

struct SineRow {
    double freq = 0.0;
    double score1 = 0.0;
    double score2 = 0.0;
    Choice decision = Choice::None;
};

struct SineDiscriminationResult {
    Calibration calibration;
    std::vector<SineRow> rows;
};

/// Calibrates theta on a training set of probe frequencies, then classifies the given probes
/// (the frequency sweep when `probes` is empty).
SineDiscriminationResult sine_discrimination(const SineDiscriminationConfig& cfg, std::vector<double> probes = {},
                                             int threads = 1);

struct SpeechSurrogateConfig {
    double omega = 1.0;
    double kappa = 1.0;
    double tau = 3.0;
    IngestConfig ingest{8000.0, 4096, 4000.0, 128, 0.5};
    int words = 10;
    int takes = 6;
    int tasks = 10;
    int tones_per_word = 4;
    double tone_lo = 200.0;
    double tone_hi = 3500.0;
    double jitter = 0.01;        // relative frequency jitter per take
    double voice_shift = 0.03;   // second half of the takes: all tones scaled by 1 + voice_shift
    double amp_jitter = 0.2;     // relative amplitude jitter per take
    double snr_db = 20.0;
    std::vector<int> train_takes{1, 3};  // calibration takes (one per voice); the other non-encoded takes evaluate
    std::vector<double> t_grid{25.0, 50.0, 100.0};
    std::vector<double> theta_grid;  // empty: the default fine grid
};

struct SpeechTrial {
    int task = 0;
    int word = 0;
    int take = 0;
    int label = 0;
    double score1 = 0.0;
    double score2 = 0.0;
    Choice decision = Choice::None;
    bool train = false;
};

struct SpeechSurrogateResult {
    RecognitionConfig config;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t test_count = 0;
    std::vector<SpeechTrial> trials;
};

SpeechSurrogateResult speech_surrogate(const SpeechSurrogateConfig& cfg, std::uint64_t seed, int threads = 1);

/// Fine thresholds near 1: 1 - 10^(-k/4), k = 4..32.
std::vector<double> default_theta_grid();

/// Wilson score interval at 95 % for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

}  // namespace ringosc
