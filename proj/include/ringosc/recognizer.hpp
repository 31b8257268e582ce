#pragma once

// Recognition protocol: start the encoded ring from the probe's linear-ramp
// history, evolve for time T, and score closeness to the encoded orbit by the
// order parameter of the back-shifted phases x_j(t) = y_j(t + p_j).

#include <optional>
#include <span>
#include <vector>

#include "ringosc/pattern_codec.hpp"

namespace ringosc {

enum class ScoreKind {
    OrderParameter,    // windowed mean of r(t) near T
    CrossCorrelation,  // max over cyclic lag of phasor correlation between crossings and pattern
};

struct RecognitionConfig {
    double t_horizon = 50.0;
    double threshold = 0.9;
    std::optional<double> window;  // unset: one period 2 pi / Omega_ref
    ScoreKind score = ScoreKind::OrderParameter;
    double step = 0.0;             // integrator step, 0 = default

    void validate() const;
};

void to_json(nlohmann::json& j, const RecognitionConfig& c);
void from_json(const nlohmann::json& j, RecognitionConfig& c);

struct Recognition {
    double score = 0.0;
    bool accepted = false;
};

/// Averaging window actually used for an encoding.
double effective_window(const Encoding& encoding, const RecognitionConfig& cfg);

Recognition recognize(const Encoding& encoding, const Pattern& probe, const RecognitionConfig& cfg);

/// Scores at several horizons from a single integration to the largest one.
/// Identical to calling recognize() once per horizon.
std::vector<double> recognition_scores(const Encoding& encoding, const Pattern& probe,
                                       std::span<const double> horizons, const RecognitionConfig& cfg);

enum class Choice : int { Pattern1 = -1, None = 0, Pattern2 = 1 };

struct Decision {
    Choice value = Choice::None;
    double score1 = 0.0;
    double score2 = 0.0;
    bool tie = false;  // both accepted with |r1 - r2| < 1e-9
};

/// Two-class decision rule from a pair of scores.
Decision decide(double score1, double score2, double threshold);

/// Recognizes the probe against both encodings (concurrently) and decides.
Decision classify(const Encoding& enc1, const Encoding& enc2, const Pattern& probe, const RecognitionConfig& cfg);

struct LabeledProbe {
    Pattern probe;
    int label = 0;  // one encoding: 1 accept / 0 reject; two encodings: -1, 0, +1
};

struct Calibration {
    RecognitionConfig config;
    double accuracy = 0.0;
};

/// Exhaustive (T, theta) grid search maximising accuracy; ties go to the
/// smaller T, then to the larger theta.
Calibration calibrate(std::span<const Encoding> encodings, std::span<const LabeledProbe> labeled,
                      std::span<const double> t_grid, std::span<const double> theta_grid,
                      const RecognitionConfig& base = {}, int threads = 1);

/// Accuracy of a fixed configuration on a labelled set.
double accuracy(std::span<const Encoding> encodings, std::span<const LabeledProbe> labeled,
                const RecognitionConfig& cfg, int threads = 1);

}  // namespace ringosc
