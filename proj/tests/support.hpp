#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ringosc/dde.hpp"
#include "ringosc/pattern_codec.hpp"
#include "ringosc/sync_analysis.hpp"

namespace oracle {

using cd = std::complex<double>;

// Branch k of the Lambert W function by Halley iteration.
inline cd lambert_w(cd z, int k) {
    cd w;
    const cd branch_pt = z * std::exp(1.0) + 1.0;
    if (k == 0 && std::abs(branch_pt) < 0.3) {
        const cd p = std::sqrt(2.0 * branch_pt);
        w = -1.0 + p - p * p / 3.0;
    } else if (k == 0 && std::abs(z) < 1.0) {
        w = z;
    } else {
        const cd l1 = std::log(z) + cd(0.0, 2.0 * M_PI * k);
        const cd l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 200; ++it) {
        const cd ew = std::exp(w);
        const cd f = w * ew - z;
        const cd step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(w))) {
            break;
        }
    }
    return w;
}

// Roots mu = -K + W_k(K tau e^{K tau} e_n) / tau of mu + K - K e^{-mu tau} e_n = 0, for |k| <= k_max.
inline std::vector<cd> lambert_roots(double K, double tau, int n, int big_n, int k_max) {
    const cd e_n = std::polar(1.0, 2.0 * M_PI * n / big_n);
    const cd z = K * tau * std::exp(K * tau) * e_n;
    std::vector<cd> out;
    for (int k = -k_max; k <= k_max; ++k) {
        const cd mu = -K + lambert_w(z, k) / tau;
        if (std::abs(mu + K - K * std::exp(-mu * tau) * e_n) > 1e-8 * (1.0 + std::abs(mu))) {
            continue;
        }
        bool dup = false;
        for (const auto& m : out) {
            dup = dup || std::abs(m - mu) < 1e-8;
        }
        if (!dup) {
            out.push_back(mu);
        }
    }
    return out;
}

// Sign changes of f(Omega) = Omega - omega + kappa sin(Omega tau) on a dense uniform grid.
inline int dense_root_count(double omega, double kappa, double tau, int samples) {
    const double lo = omega - kappa;
    const double hi = omega + kappa;
    auto f = [&](double x) { return x - omega + kappa * std::sin(x * tau); };
    int count = 0;
    double prev = f(lo);
    if (prev == 0.0) {
        ++count;
    }
    for (int i = 1; i <= samples; ++i) {
        const double cur = f(lo + (hi - lo) * i / samples);
        if (cur == 0.0 || (prev != 0.0 && (prev < 0.0) != (cur < 0.0))) {
            ++count;
        }
        prev = cur;
    }
    return count;
}

// Smallest tau > tau_lo at which tau kappa cos(s) + 1 changes sign along the branch
// tau(s) = s / (omega - kappa sin s), scanning s in [-s_max, s_max] with pitch ds.
inline double first_fold_scan(double omega, double kappa, double s_max, double ds, double tau_lo = 0.0) {
    double best = INFINITY;
    auto tau_of = [&](double s) { return s / (omega - kappa * std::sin(s)); };
    auto g = [&](double s) { return tau_of(s) * kappa * std::cos(s) + 1.0; };
    const long steps = static_cast<long>(2.0 * s_max / ds);
    for (long i = 0; i < steps; ++i) {
        const double a = -s_max + ds * static_cast<double>(i);
        const double b = a + ds;
        const double ta = tau_of(a), tb = tau_of(b);
        if (!(ta > tau_lo) || !(tb > tau_lo) || std::abs(omega - kappa * std::sin(a)) < 1e-6 ||
            std::abs(omega - kappa * std::sin(b)) < 1e-6 || std::abs(ta - tb) > 1.0) {
            continue;
        }
        if ((g(a) < 0.0) != (g(b) < 0.0)) {
            best = std::min(best, 0.5 * (ta + tb));
        }
    }
    return best;
}

// History on [-horizon, 0] for the encoded ring that reproduces, after the
// back shift x_j(t) = y_j(t + p_j), a given homogeneous run exactly:
// y_j(t) = x_j(t - p_j). Needs max p = 0 so that the required x values lie in
// the recorded range of the homogeneous trajectory (stride-1, step h).
inline ringosc::HistoryFunction shifted_history(const ringosc::Pattern& p, double horizon,
                                                const ringosc::HistoryFunction& x_hist, const ringosc::Trajectory& x,
                                                double x_rate_at_history) {
    const double h = x.spacing;
    std::vector<std::vector<ringosc::HistoryKnot>> knots(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double pj = p.values[j];
        const long k0 = static_cast<long>(std::floor((-horizon - pj - h) / h));
        const long k1 = static_cast<long>(std::ceil(-pj / h));
        for (long k = k0; k <= k1; ++k) {
            const double s = static_cast<double>(k) * h;
            if (k <= 0) {
                knots[j].push_back({s + pj, x_hist.value(j, s), x_rate_at_history});
                if (k == 0) {
                    knots[j].push_back({s + pj, x.phase(0, j), x.rate(0, j)});
                }
            } else {
                knots[j].push_back({s + pj, x.phase(static_cast<std::size_t>(k), j), x.rate(static_cast<std::size_t>(k), j)});
            }
        }
    }
    return ringosc::HistoryFunction::sampled(std::move(knots), horizon);
}

// Max |a - b| on a's sample times, b recorded with a spacing that divides a's.
inline double max_difference(const ringosc::Trajectory& a, const ringosc::Trajectory& b) {
    const auto ratio = static_cast<std::size_t>(std::llround(a.spacing / b.spacing));
    double m = 0.0;
    for (std::size_t k = 0; k < a.samples() && k * ratio < b.samples(); ++k) {
        for (std::size_t j = 0; j < a.n; ++j) {
            m = std::max(m, std::abs(a.phase(k, j) - b.phase(k * ratio, j)));
        }
    }
    return m;
}

}  // namespace oracle
