#pragma once

// Fixed-step integrator for the ring with per-edge delays
//
//   dy_j/dt = omega + kappa sin(y_{j+1}(t - tau_j) - y_j(t)).
//
// Classical RK4 in time; delayed states come from cubic Hermite
// interpolation over a ring buffer of past (value, rate) samples, or from
// the initial function while t - tau_j <= 0.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ringosc/core.hpp"

namespace ringosc {

/// Per-edge delays; delays[j] is the lag on the edge j+1 -> j.
struct DelayVector {
    std::vector<double> delays;

    static DelayVector homogeneous(int n, double tau) { return {std::vector<double>(static_cast<std::size_t>(n), tau)}; }
    [[nodiscard]] std::size_t size() const { return delays.size(); }
    [[nodiscard]] double max() const;
    /// Smallest strictly positive delay, or 0 if every delay is zero.
    [[nodiscard]] double min_positive() const;
};

/// Knot of a piecewise cubic Hermite history.
struct HistoryKnot {
    double t = 0.0;
    double value = 0.0;
    double rate = 0.0;
};

/// Initial function on [-horizon, 0] for every oscillator.
class HistoryFunction {
public:
    /// y_j(t) = slope (t - offsets[j]).
    static HistoryFunction linear_ramp(double slope, std::vector<double> offsets, double horizon);
    /// Per-oscillator knots, ascending in t, evaluated by cubic Hermite
    /// interpolation (linear extrapolation with the end rate outside the knots).
    /// Two knots may share a time to mark a jump in the rate: the first holds
    /// the left rate, the second the right one.
    static HistoryFunction sampled(std::vector<std::vector<HistoryKnot>> knots, double horizon);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] double value(std::size_t j, double t) const;
    [[nodiscard]] bool is_linear_ramp() const { return std::holds_alternative<Ramp>(data_); }
    [[nodiscard]] double ramp_slope() const;
    [[nodiscard]] const std::vector<double>& ramp_offsets() const;

private:
    struct Ramp {
        double slope;
        std::vector<double> offsets;
    };
    struct Sampled {
        std::vector<std::vector<HistoryKnot>> knots;
    };
    HistoryFunction(std::variant<Ramp, Sampled> d, double horizon) : data_(std::move(d)), horizon_(horizon) {}

    std::variant<Ramp, Sampled> data_;
    double horizon_ = 0.0;
};

/// Sampled solution. Row k holds the state at times[k].
struct Trajectory {
    std::size_t n = 0;
    double spacing = 0.0;  // time between consecutive records
    std::vector<double> times;
    std::vector<double> phases;  // row-major, times.size() x n, unwrapped
    std::vector<double> rates;   // dy/dt at the same samples
    std::vector<double> order_param;

    [[nodiscard]] std::size_t samples() const { return times.size(); }
    [[nodiscard]] double phase(std::size_t k, std::size_t j) const { return phases[k * n + j]; }
    [[nodiscard]] double rate(std::size_t k, std::size_t j) const { return rates[k * n + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t k) const { return {phases.data() + k * n, n}; }
    /// Oscillator j at time t, Hermite-interpolated between recorded samples.
    /// Requires a stride-1 recording covering t.
    [[nodiscard]] double phase_at(std::size_t j, double t) const;
};

struct IntegrationOptions {
    double step = 0.0;         // 0 selects default_step()
    std::size_t stride = 1;    // record every stride-th step
    double record_from = 0.0;  // first recorded time (samples before are skipped)
};

/// min(min positive delay / 20, 0.01).
double default_step(const DelayVector& delays);

/// Integration aborted because the state became non-finite.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integrates from t = 0 to t_end (the last step lands on or after t_end).
Trajectory integrate(const RingParams& params, const DelayVector& delays, const HistoryFunction& init, double t_end,
                     const IntegrationOptions& options = {});

/// (1/N) |sum_j exp(i x_j)|.
double order_parameter(std::span<const double> phases);

/// Upward crossings of level + 2 pi k for each oscillator, located by linear
/// interpolation between bracketing samples.
std::vector<std::vector<double>> crossing_times(const Trajectory& trajectory, Phase level);

}  // namespace ringosc
