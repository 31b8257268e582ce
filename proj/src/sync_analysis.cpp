#include "ringosc/sync_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringosc/parallel.hpp"

namespace ringosc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleTolerance = 1e-9;
constexpr double kCharResidual = 1e-9;
constexpr double kCharDedup = 1e-7;
constexpr int kSeedsPerSubcell = 4;  // subcell = 4 x 4 seed block

double residual_derivative(const RingParams& p, double x) { return 1.0 + p.kappa * p.tau * std::cos(x * p.tau); }

// Bisection on a sign-changing bracket down to adjacent doubles.
template <typename F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) {
            break;
        }
        const double fm = f(m);
        if (fm == 0.0) {
            return m;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

double refine_root(const RingParams& p, double a, double b) {
    auto f = [&](double x) { return sync_residual(p, x); };
    double x = bisect(f, a, b);
    double best = x;
    double best_res = std::abs(f(x));
    for (int it = 0; it < 4 && best_res > 0.0; ++it) {
        const double d = residual_derivative(p, x);
        if (d == 0.0) {
            break;
        }
        const double next = x - f(x) / d;
        if (!(next >= a && next <= b)) {
            break;
        }
        x = next;
        const double r = std::abs(f(x));
        if (r < best_res) {
            best = x;
            best_res = r;
        }
    }
    return best;
}

}  // namespace

double scan_step(const RingParams& params) {
    const double kt = params.kappa * params.tau;
    double step = params.kappa / 64.0;
    if (params.tau > 0.0) {
        step = std::min(step, kPi / (8.0 * params.tau * std::max(1.0, kt)));
    }
    return step;
}

SolutionSet find_sync_solutions(const RingParams& params) {
    params.validate();
    SolutionSet set;
    set.params = params;

    std::vector<SyncSolution> found;
    if (params.tau == 0.0) {
        found.push_back(make_sync_solution(params, params.omega));
    } else {
        const double lo = params.omega - params.kappa;
        const double hi = params.omega + params.kappa;
        const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / scan_step(params)));
        auto grid = [&](std::size_t i) { return i == cells ? hi : lo + (hi - lo) * static_cast<double>(i) / cells; };
        auto f = [&](double x) { return sync_residual(params, x); };
        auto fprime = [&](double x) { return residual_derivative(params, x); };

        std::vector<double> fv(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            fv[i] = f(grid(i));
        }
        auto push = [&](double x, bool degenerate) { found.push_back(make_sync_solution(params, x, degenerate)); };

        for (std::size_t i = 0; i <= cells; ++i) {
            const double x0 = grid(i);
            if (fv[i] == 0.0) {
                push(x0, std::abs(fprime(x0)) < kRootTolerance);
            }
            if (i == cells) {
                break;
            }
            const double x1 = grid(i + 1);
            const double f0 = fv[i];
            const double f1 = fv[i + 1];
            if (f0 == 0.0 || f1 == 0.0) {
                continue;
            }
            if ((f0 < 0.0) != (f1 < 0.0)) {
                push(refine_root(params, x0, x1), false);
                continue;
            }
            // Same sign at both ends: look for a stationary point of f inside
            // the cell that touches or crosses zero (near-tangent pair).
            const double d0 = fprime(x0);
            const double d1 = fprime(x1);
            if ((d0 < 0.0) == (d1 < 0.0)) {
                continue;
            }
            const double xs = bisect(fprime, x0, x1);
            const double fs = f(xs);
            if (std::abs(fs) <= kRootTolerance) {
                push(xs, true);
            } else if ((fs < 0.0) != (f0 < 0.0)) {
                push(refine_root(params, x0, xs), false);
                push(refine_root(params, xs, x1), false);
            }
        }
    }

    std::sort(found.begin(), found.end(),
              [](const SyncSolution& a, const SyncSolution& b) { return a.omega_sync < b.omega_sync; });
    for (const auto& s : found) {
        if (!set.solutions.empty() && s.omega_sync - set.solutions.back().omega_sync <= kRootTolerance) {
            set.solutions.back().degenerate = true;
            continue;
        }
        set.solutions.push_back(s);
    }
    for (const auto& s : set.solutions) {
        (s.stable ? set.n_stable : set.n_unstable) += 1;
    }
    return set;
}

const SyncSolution& closest_stable(const SolutionSet& set) {
    const SyncSolution* best = nullptr;
    for (const auto& s : set.solutions) {
        if (s.stable && (best == nullptr || std::abs(s.omega_sync - set.params.omega) <
                                                std::abs(best->omega_sync - set.params.omega))) {
            best = &s;
        }
    }
    if (best == nullptr) {
        throw PreconditionError("no stable synchronous solution for these parameters");
    }
    return *best;
}

CountBounds count_bounds(const RingParams& params) {
    params.validate();
    const double kt = params.kappa * params.tau;
    if (!(2.0 * kt > kPi)) {
        throw PreconditionError("count bounds require 2 kappa tau > pi");
    }
    const auto set = find_sync_solutions(params);
    CountBounds b;
    b.n_stable = set.n_stable;
    b.n_unstable = set.n_unstable;
    b.lower = kt / kPi - 0.5;
    b.floor_lower = std::floor(b.lower);
    b.upper = kt / kPi + 1.5;
    b.check = b.n_stable >= b.lower && b.n_unstable >= b.lower;
    b.floor_check = b.n_stable >= b.floor_lower && b.n_unstable >= b.floor_lower;
    b.upper_check = b.n_stable <= b.upper && b.n_unstable <= b.upper;
    return b;
}

std::vector<BranchPoint> trace_branch(double omega, double kappa, Interval s_range, double ds) {
    if (!(ds > 0.0) || !std::isfinite(ds)) {
        throw DomainError("trace_branch: ds must be positive");
    }
    if (s_range.empty()) {
        throw DomainError("trace_branch: empty s range");
    }
    const auto count = static_cast<std::size_t>(std::floor((s_range.hi - s_range.lo) / ds + 1e-9)) + 1;
    std::vector<BranchPoint> out;
    int segment = 0;
    bool gap = false;
    for (std::size_t i = 0; i < count; ++i) {
        const double s = s_range.lo + ds * static_cast<double>(i);
        const double denom = omega + kappa * std::sin(-s);
        const double tau = s / denom;
        if (std::abs(denom) < kPoleTolerance || !(tau > 0.0)) {
            gap = true;
            continue;
        }
        if (gap && !out.empty()) {
            ++segment;
        }
        gap = false;
        BranchPoint p;
        p.s = s;
        p.tau = tau;
        p.omega_sync = s / tau;
        p.stiffness = kappa * std::cos(p.omega_sync * tau);
        p.stable = p.stiffness > 0.0;
        p.segment = segment;
        out.push_back(p);
    }
    return out;
}

const char* to_string(BifurcationKind kind) {
    return kind == BifurcationKind::Fold ? "fold" : "transcritical";
}

std::vector<Bifurcation> find_bifurcations(double omega, double kappa, Interval tau_range) {
    if (kappa == 0.0) {
        throw PreconditionError("find_bifurcations requires kappa != 0");
    }
    if (!std::isfinite(omega) || !std::isfinite(kappa) || !std::isfinite(tau_range.lo) ||
        !std::isfinite(tau_range.hi) || tau_range.hi < tau_range.lo) {
        throw DomainError("find_bifurcations: invalid tau range");
    }
    // |Omega tau| = |s| <= tau (|omega| + |kappa|) bounds the branch parameter.
    const double s_max = tau_range.hi * (std::abs(omega) + std::abs(kappa)) + 1.0;
    constexpr double ds = 1e-3;
    const auto pts = trace_branch(omega, kappa, {-s_max, s_max}, ds);

    auto tau_of = [&](double s) { return s / (omega + kappa * std::sin(-s)); };
    auto transcritical = [&](double s) { return std::cos(s); };
    auto fold = [&](double s) { return tau_of(s) * kappa * std::cos(s) + 1.0; };

    const double l = omega / (kPi * kappa);
    const double l_odd = 2.0 * std::round((l - 1.0) / 2.0) + 1.0;
    const bool fold_degenerate = std::abs(l - l_odd) <= 1e-8 * std::max(1.0, std::abs(l_odd));

    std::vector<Bifurcation> out;
    auto record = [&](BifurcationKind kind, double s) {
        const double tau = tau_of(s);
        if (!(tau >= tau_range.lo && tau <= tau_range.hi)) {
            return;
        }
        Bifurcation b;
        b.kind = kind;
        b.s = s;
        b.tau = tau;
        b.omega_sync = s / tau;
        b.degenerate = kind == BifurcationKind::Fold && fold_degenerate;
        out.push_back(b);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        if (a.segment != b.segment) {
            continue;
        }
        const double t0 = transcritical(a.s);
        const double t1 = transcritical(b.s);
        if (t0 == 0.0) {
            record(BifurcationKind::Transcritical, a.s);
        } else if (t1 != 0.0 && (t0 < 0.0) != (t1 < 0.0)) {
            record(BifurcationKind::Transcritical, bisect(transcritical, a.s, b.s));
        }
        const double g0 = fold(a.s);
        const double g1 = fold(b.s);
        if (g0 == 0.0) {
            record(BifurcationKind::Fold, a.s);
        } else if (g1 != 0.0 && (g0 < 0.0) != (g1 < 0.0)) {
            record(BifurcationKind::Fold, bisect(fold, a.s, b.s));
        }
    }
    std::sort(out.begin(), out.end(), [](const Bifurcation& a, const Bifurcation& b) {
        return a.tau != b.tau ? a.tau < b.tau : a.s < b.s;
    });
    return out;
}

std::complex<double> characteristic_function(double stiffness, double tau, int n_branch, int n_total,
                                             std::complex<double> mu) {
    const std::complex<double> e_n = std::polar(1.0, kTwoPi * n_branch / n_total);
    return mu + stiffness - stiffness * std::exp(-mu * tau) * e_n;
}

CharRootResult characteristic_roots(const RingParams& params, const SyncSolution& sol, const ComplexRect& region,
                                    int threads) {
    params.validate();
    if (!(region.re_hi > region.re_lo) || !(region.im_hi > region.im_lo) || !std::isfinite(region.re_lo) ||
        !std::isfinite(region.re_hi) || !std::isfinite(region.im_lo) || !std::isfinite(region.im_hi)) {
        throw DomainError("characteristic_roots: region must be a bounded non-empty rectangle");
    }
    if (!(sol.residual <= kRootTolerance)) {
        throw PreconditionError("characteristic_roots: solution residual above root tolerance");
    }
    const int n_total = params.n;
    const double tau = params.tau;
    const double k = sol.stiffness;

    CharRootResult result;
    auto add_root = [&](std::vector<CharRoot>& roots, int n, std::complex<double> mu) {
        if (!region.contains(mu)) {
            return;
        }
        for (const auto& r : roots) {
            if (std::abs(r.mu - mu) < kCharDedup) {
                return;
            }
        }
        roots.push_back({n, mu, std::abs(characteristic_function(k, tau, n, n_total, mu))});
    };

    std::vector<std::vector<CharRoot>> per_branch(static_cast<std::size_t>(n_total));
    std::vector<std::vector<ComplexRect>> unresolved(static_cast<std::size_t>(n_total));

    if (tau == 0.0 || k == 0.0) {
        // No delay term (or no coupling): mu = K (e_n - 1) is the only root.
        for (int n = 0; n < n_total; ++n) {
            const std::complex<double> e_n = std::polar(1.0, kTwoPi * n / n_total);
            add_root(per_branch[static_cast<std::size_t>(n)], n, n == 0 ? 0.0 : k * (e_n - 1.0));
        }
    } else {
        const double pitch = std::min(kPi / (2.0 * tau), std::abs(k)) / 4.0;
        const double sub = pitch * kSeedsPerSubcell;
        const auto nx = static_cast<std::size_t>(std::ceil((region.re_hi - region.re_lo) / sub));
        const auto ny = static_cast<std::size_t>(std::ceil((region.im_hi - region.im_lo) / sub));
        const double ak = std::abs(k);

        // A root satisfies |mu + K| = |K| exp(-Re(mu) tau); subcells where the
        // two sides cannot meet hold no root and are not seeded.
        std::vector<ComplexRect> cells;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t iy = 0; iy < ny; ++iy) {
                ComplexRect c;
                c.re_lo = region.re_lo + sub * static_cast<double>(ix);
                c.re_hi = std::min(region.re_hi, c.re_lo + sub);
                c.im_lo = region.im_lo + sub * static_cast<double>(iy);
                c.im_hi = std::min(region.im_hi, c.im_lo + sub);
                const double cx = std::clamp(-k, c.re_lo, c.re_hi);
                const double cy = std::clamp(0.0, c.im_lo, c.im_hi);
                const double d_min = std::hypot(cx + k, cy);
                const double d_max = std::max({std::hypot(c.re_lo + k, c.im_lo), std::hypot(c.re_lo + k, c.im_hi),
                                               std::hypot(c.re_hi + k, c.im_lo), std::hypot(c.re_hi + k, c.im_hi)});
                const double rhs_hi = ak * std::exp(-c.re_lo * tau);
                const double rhs_lo = ak * std::exp(-c.re_hi * tau);
                if (d_min <= rhs_hi && d_max >= rhs_lo) {
                    cells.push_back(c);
                }
            }
        }

        parallel_for(static_cast<std::size_t>(n_total), threads, [&](std::size_t nb) {
            const int n = static_cast<int>(nb);
            const std::complex<double> e_n = std::polar(1.0, kTwoPi * n / n_total);
            auto& roots = per_branch[nb];
            for (const auto& c : cells) {
                bool any_converged = false;
                const double px = (c.re_hi - c.re_lo) / kSeedsPerSubcell;
                const double py = (c.im_hi - c.im_lo) / kSeedsPerSubcell;
                for (int a = 0; a < kSeedsPerSubcell; ++a) {
                    for (int b = 0; b < kSeedsPerSubcell; ++b) {
                        std::complex<double> mu(c.re_lo + (a + 0.5) * px, c.im_lo + (b + 0.5) * py);
                        bool ok = false;
                        for (int it = 0; it < 60; ++it) {
                            const std::complex<double> ex = k * std::exp(-mu * tau) * e_n;
                            const std::complex<double> g = mu + k - ex;
                            const std::complex<double> dg = 1.0 + tau * ex;
                            if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || std::abs(dg) == 0.0) {
                                break;
                            }
                            const std::complex<double> step = g / dg;
                            mu -= step;
                            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(mu))) {
                                ok = true;
                                break;
                            }
                        }
                        if (!ok) {
                            continue;
                        }
                        const double res = std::abs(characteristic_function(k, tau, n, n_total, mu));
                        if (!(res < kCharResidual)) {
                            continue;
                        }
                        any_converged = true;
                        add_root(roots, n, mu);
                    }
                }
                if (!any_converged) {
                    unresolved[nb].push_back(c);
                }
            }
        });
    }

    // mu = 0 is always a root of branch 0.
    if (region.contains(0.0)) {
        auto& b0 = per_branch[0];
        std::erase_if(b0, [](const CharRoot& r) { return std::abs(r.mu) < kCharDedup; });
        b0.push_back({0, 0.0, 0.0});
    }

    for (std::size_t n = 0; n < per_branch.size(); ++n) {
        auto& roots = per_branch[n];
        std::sort(roots.begin(), roots.end(), [](const CharRoot& a, const CharRoot& b) {
            return a.mu.real() != b.mu.real() ? a.mu.real() < b.mu.real() : a.mu.imag() < b.mu.imag();
        });
        result.roots.insert(result.roots.end(), roots.begin(), roots.end());
        result.unresolved.insert(result.unresolved.end(), unresolved[n].begin(), unresolved[n].end());
    }
    return result;
}

}  // namespace ringosc
