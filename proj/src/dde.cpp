#include "ringosc/dde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace ringosc {

namespace {

struct HermiteWeights {
    double h00, h10, h01, h11;
};

HermiteWeights hermite(double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return {2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + theta, -2.0 * t3 + 3.0 * t2, t3 - t2};
}

double hermite_eval(const HermiteWeights& w, double dt, double y0, double r0, double y1, double r1) {
    return w.h00 * y0 + w.h10 * dt * r0 + w.h01 * y1 + w.h11 * dt * r1;
}

// Delayed lookup position for one edge and one RK stage, relative to the
// current step index n: sample n + offset, fraction theta towards the next one.
struct Lookup {
    long offset = 0;
    double theta = 0.0;
    double stage_shift = 0.0;  // c - tau_j / h, for history evaluation
    HermiteWeights w{};
};

Lookup make_lookup(double stage, double delay_in_steps) {
    Lookup l;
    l.stage_shift = stage - delay_in_steps;
    const double f = std::floor(l.stage_shift);
    l.offset = static_cast<long>(f);
    l.theta = l.stage_shift - f;
    l.w = hermite(l.theta);
    return l;
}

}  // namespace

double DelayVector::max() const {
    double m = 0.0;
    for (double d : delays) {
        m = std::max(m, d);
    }
    return m;
}

double DelayVector::min_positive() const {
    double m = std::numeric_limits<double>::infinity();
    for (double d : delays) {
        if (d > 0.0) {
            m = std::min(m, d);
        }
    }
    return std::isfinite(m) ? m : 0.0;
}

HistoryFunction HistoryFunction::linear_ramp(double slope, std::vector<double> offsets, double horizon) {
    if (!std::isfinite(slope) || !std::isfinite(horizon) || horizon < 0.0) {
        throw DomainError("linear ramp history: slope and horizon must be finite, horizon >= 0");
    }
    for (double q : offsets) {
        if (!std::isfinite(q)) {
            throw DomainError("linear ramp history: non-finite offset");
        }
    }
    return HistoryFunction(Ramp{slope, std::move(offsets)}, horizon);
}

HistoryFunction HistoryFunction::sampled(std::vector<std::vector<HistoryKnot>> knots, double horizon) {
    for (const auto& series : knots) {
        if (series.empty()) {
            throw DomainError("sampled history: every oscillator needs at least one knot");
        }
        for (std::size_t i = 1; i < series.size(); ++i) {
            const bool increasing = series[i].t > series[i - 1].t;
            const bool rate_break = series[i].t == series[i - 1].t && (i < 2 || series[i - 2].t < series[i].t);
            if (!increasing && !rate_break) {
                throw DomainError("sampled history: knot times must increase (at most two knots per time)");
            }
        }
    }
    return HistoryFunction(Sampled{std::move(knots)}, horizon);
}

std::size_t HistoryFunction::size() const {
    return std::visit(
        [](const auto& d) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Ramp>) {
                return d.offsets.size();
            } else {
                return d.knots.size();
            }
        },
        data_);
}

double HistoryFunction::ramp_slope() const {
    return std::get<Ramp>(data_).slope;
}

const std::vector<double>& HistoryFunction::ramp_offsets() const {
    return std::get<Ramp>(data_).offsets;
}

double HistoryFunction::value(std::size_t j, double t) const {
    if (const auto* ramp = std::get_if<Ramp>(&data_)) {
        return ramp->slope * (t - ramp->offsets[j]);
    }
    const auto& series = std::get<Sampled>(data_).knots[j];
    if (t <= series.front().t) {
        return series.front().value + series.front().rate * (t - series.front().t);
    }
    if (t >= series.back().t) {
        return series.back().value + series.back().rate * (t - series.back().t);
    }
    const auto it = std::upper_bound(series.begin(), series.end(), t,
                                     [](double v, const HistoryKnot& k) { return v < k.t; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double dt = b.t - a.t;
    return hermite_eval(hermite((t - a.t) / dt), dt, a.value, a.rate, b.value, b.rate);
}

double Trajectory::phase_at(std::size_t j, double t) const {
    if (times.size() < 2 || !(spacing > 0.0)) {
        throw DomainError("phase_at: trajectory needs at least two samples");
    }
    const double pos = (t - times.front()) / spacing;
    if (pos < -1e-9 || pos > static_cast<double>(times.size() - 1) + 1e-9) {
        throw DomainError("phase_at: time outside recorded range");
    }
    auto k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(times.size() - 2)));
    const double theta = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
    if (theta == 0.0) {
        return phase(k, j);
    }
    return hermite_eval(hermite(theta), spacing, phase(k, j), rate(k, j), phase(k + 1, j), rate(k + 1, j));
}

double default_step(const DelayVector& delays) {
    const double m = delays.min_positive();
    return m > 0.0 ? std::min(m / 20.0, 0.01) : 0.01;
}

Trajectory integrate(const RingParams& params, const DelayVector& delays, const HistoryFunction& init, double t_end,
                     const IntegrationOptions& options) {
    if (params.n < 2 || !std::isfinite(params.omega) || !std::isfinite(params.kappa) || params.kappa < 0.0) {
        throw DomainError("integrate: need n >= 2, finite omega and kappa >= 0");
    }
    const auto n = static_cast<std::size_t>(params.n);
    if (delays.size() != n || init.size() != n) {
        throw DomainError("integrate: delay vector and history must have one entry per oscillator");
    }
    for (double d : delays.delays) {
        if (!std::isfinite(d) || d < 0.0) {
            throw DomainError("integrate: delays must be finite and non-negative");
        }
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("integrate: t_end must be positive");
    }
    const double h = options.step > 0.0 ? options.step : default_step(delays);
    if (!std::isfinite(h)) {
        throw DomainError("integrate: step must be positive");
    }
    const double min_pos = delays.min_positive();
    if (min_pos > 0.0 && h > min_pos / 4.0) {
        std::ostringstream msg;
        msg << "integrate: step " << h << " exceeds min positive delay / 4 = " << min_pos / 4.0;
        throw DomainError(msg.str());
    }
    if (options.stride == 0) {
        throw DomainError("integrate: stride must be >= 1");
    }

    const double omega = params.omega;
    const double kappa = params.kappa;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    const std::size_t capacity = static_cast<std::size_t>(std::ceil(delays.max() / h)) + 4;

    // Lookups for stages c = 0, 1/2, 1 on every edge.
    std::vector<bool> instantaneous(n);
    std::vector<Lookup> half(n), full(n);
    for (std::size_t j = 0; j < n; ++j) {
        instantaneous[j] = delays.delays[j] == 0.0;
        const double d = delays.delays[j] / h;
        half[j] = make_lookup(0.5, d);
        full[j] = make_lookup(1.0, d);
    }

    std::vector<double> buf_y(capacity * n), buf_r(capacity * n);
    auto slot = [&](std::size_t m) { return (m % capacity) * n; };

    // Value of y_{j+1} for edge j at step n with the given lookup.
    auto delayed = [&](std::size_t step, std::size_t j, const Lookup& l) {
        const std::size_t src = (j + 1) % n;
        const long m = static_cast<long>(step) + l.offset;
        if (m < 0) {
            return init.value(src, (static_cast<double>(step) + l.stage_shift) * h);
        }
        const std::size_t a = slot(static_cast<std::size_t>(m)) + src;
        if (l.theta == 0.0) {
            return buf_y[a];
        }
        const std::size_t b = slot(static_cast<std::size_t>(m) + 1) + src;
        return hermite_eval(l.w, h, buf_y[a], buf_r[a], buf_y[b], buf_r[b]);
    };

    std::vector<double> y(n), y_stage(n), k2(n), k3(n), k4(n), d_half(n), d_full(n), rate(n);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = init.value(j, 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double other = instantaneous[j] ? y[(j + 1) % n] : init.value((j + 1) % n, -delays.delays[j]);
        rate[j] = omega + kappa * std::sin(other - y[j]);
    }

    Trajectory traj;
    traj.n = n;
    traj.spacing = h * static_cast<double>(options.stride);
    std::size_t first_record = 0;
    bool recording = false;
    auto maybe_record = [&](std::size_t step) {
        const double t = static_cast<double>(step) * h;
        if (!recording) {
            if (t < options.record_from - 1e-9 * h) {
                return;
            }
            recording = true;
            first_record = step;
        }
        if ((step - first_record) % options.stride != 0) {
            return;
        }
        traj.times.push_back(t);
        traj.phases.insert(traj.phases.end(), y.begin(), y.end());
        traj.rates.insert(traj.rates.end(), rate.begin(), rate.end());
        traj.order_param.push_back(order_parameter(y));
    };

    std::copy(y.begin(), y.end(), buf_y.begin() + static_cast<long>(slot(0)));
    std::copy(rate.begin(), rate.end(), buf_r.begin() + static_cast<long>(slot(0)));
    maybe_record(0);

    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!instantaneous[j]) {
                d_half[j] = delayed(step, j, half[j]);
                d_full[j] = delayed(step, j, full[j]);
            }
        }
        // k1 is the stored rate at the current sample.
        for (std::size_t j = 0; j < n; ++j) {
            y_stage[j] = y[j] + 0.5 * h * rate[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double other = instantaneous[j] ? y_stage[(j + 1) % n] : d_half[j];
            k2[j] = omega + kappa * std::sin(other - y_stage[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            y_stage[j] = y[j] + 0.5 * h * k2[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double other = instantaneous[j] ? y_stage[(j + 1) % n] : d_half[j];
            k3[j] = omega + kappa * std::sin(other - y_stage[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            y_stage[j] = y[j] + h * k3[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double other = instantaneous[j] ? y_stage[(j + 1) % n] : d_full[j];
            k4[j] = omega + kappa * std::sin(other - y_stage[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            y[j] += h / 6.0 * (rate[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double other = instantaneous[j] ? y[(j + 1) % n] : d_full[j];
            rate[j] = omega + kappa * std::sin(other - y[j]);
            if (!std::isfinite(y[j]) || !std::isfinite(rate[j])) {
                std::ostringstream msg;
                msg << "integrate: non-finite state for oscillator " << j << " at t = "
                    << static_cast<double>(step + 1) * h;
                throw IntegrationError(msg.str());
            }
        }
        const std::size_t s = slot(step + 1);
        std::copy(y.begin(), y.end(), buf_y.begin() + static_cast<long>(s));
        std::copy(rate.begin(), rate.end(), buf_r.begin() + static_cast<long>(s));
        maybe_record(step + 1);
    }
    return traj;
}

double order_parameter(std::span<const double> phases) {
    if (phases.empty()) {
        return 0.0;
    }
    double c = 0.0;
    double s = 0.0;
    for (double x : phases) {
        c += std::cos(x);
        s += std::sin(x);
    }
    const double r = std::hypot(c, s) / static_cast<double>(phases.size());
    return std::min(r, 1.0);
}

std::vector<std::vector<double>> crossing_times(const Trajectory& trajectory, Phase level) {
    const double base = level.value();
    std::vector<std::vector<double>> out(trajectory.n);
    for (std::size_t j = 0; j < trajectory.n; ++j) {
        auto& list = out[j];
        for (std::size_t k = 0; k + 1 < trajectory.samples(); ++k) {
            const double y0 = trajectory.phase(k, j);
            const double y1 = trajectory.phase(k + 1, j);
            if (!(y1 > y0)) {
                continue;
            }
            const double t0 = trajectory.times[k];
            const double t1 = trajectory.times[k + 1];
            for (double m = std::floor((y0 - base) / kTwoPi) + 1.0;; m += 1.0) {
                const double target = base + kTwoPi * m;
                if (target <= y0) {
                    continue;
                }
                if (target > y1) {
                    break;
                }
                const double t = t0 + (target - y0) / (y1 - y0) * (t1 - t0);
                if (list.empty() || t > list.back()) {
                    list.push_back(t);
                }
            }
        }
    }
    return out;
}

}  // namespace ringosc
