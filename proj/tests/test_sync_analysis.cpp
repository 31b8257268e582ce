#include <doctest.h>

#include <random>

#include "ringosc/sync_analysis.hpp"
#include "support.hpp"

using namespace ringosc;

namespace {

void check_set_invariants(const SolutionSet& set) {
    const auto& p = set.params;
    int stable = 0;
    for (std::size_t i = 0; i < set.solutions.size(); ++i) {
        const auto& s = set.solutions[i];
        CHECK(s.residual <= kRootTolerance);
        CHECK(std::abs(sync_residual(p, s.omega_sync)) <= kRootTolerance);
        CHECK(s.omega_sync >= p.omega - p.kappa);
        CHECK(s.omega_sync <= p.omega + p.kappa);
        CHECK(s.stable == (s.stiffness > 0.0));
        CHECK(s.stable == (std::cos(s.omega_sync * p.tau) > 0.0));
        stable += s.stable ? 1 : 0;
        if (i > 0) {
            CHECK(s.omega_sync - set.solutions[i - 1].omega_sync > kRootTolerance);
        }
    }
    CHECK(set.n_stable == stable);
    CHECK(set.n_stable + set.n_unstable == static_cast<int>(set.solutions.size()));
}

}  // namespace

TEST_CASE("census of the omega = 2, kappa = 1, tau = 20 ring") {
    const auto set = find_sync_solutions({2, 2.0, 1.0, 20.0});
    CHECK(set.solutions.size() == 13);
    CHECK(set.n_stable == 7);
    check_set_invariants(set);
}

TEST_CASE("tau = 0 has the single solution Omega = omega") {
    const auto set = find_sync_solutions({2, 2.0, 1.0, 0.0});
    REQUIRE(set.solutions.size() == 1);
    CHECK(set.solutions[0].omega_sync == 2.0);
    CHECK(set.solutions[0].stable);
    CHECK(set.solutions[0].stiffness == 1.0);
}

TEST_CASE("omega = 0, kappa = 3, tau = 10 matches a dense sign-change scan") {
    const auto set = find_sync_solutions({2, 0.0, 3.0, 10.0});
    CHECK(static_cast<int>(set.solutions.size()) == oracle::dense_root_count(0.0, 3.0, 10.0, 2'000'000));
    check_set_invariants(set);
}

TEST_CASE("negative tau is rejected") {
    CHECK_THROWS_AS(find_sync_solutions({2, 1.0, 1.0, -1.0}), DomainError);
}

TEST_CASE("random parameters: invariants, dense-scan counts, alternation and bounds") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> om(-3.0, 3.0), ka(0.1, 2.0), ta(0.0, 40.0);
    for (int i = 0; i < 150; ++i) {
        const RingParams p{2, om(rng), ka(rng), ta(rng)};
        const auto set = find_sync_solutions(p);
        check_set_invariants(set);
        if (i < 40) {
            CHECK(static_cast<int>(set.solutions.size()) == oracle::dense_root_count(p.omega, p.kappa, p.tau, 400'000));
        }
        bool degenerate = false;
        for (const auto& s : set.solutions) {
            degenerate = degenerate || s.degenerate;
        }
        if (!degenerate) {
            // Simple roots of f alternate in the sign of f'; stable roots have f' > 0.
            auto slope = [&](const SyncSolution& s) { return 1.0 + p.kappa * p.tau * std::cos(s.omega_sync * p.tau); };
            for (std::size_t k = 1; k < set.solutions.size(); ++k) {
                CHECK((slope(set.solutions[k]) > 0.0) != (slope(set.solutions[k - 1]) > 0.0));
            }
            for (const auto& s : set.solutions) {
                if (s.stable) {
                    CHECK(slope(s) > 0.0);
                }
            }
        }
        if (2.0 * p.kappa * p.tau > std::numbers::pi) {
            const auto b = count_bounds(p);
            CHECK(b.floor_check);
            CHECK(b.upper_check);
            CHECK(b.n_stable <= b.upper);
            CHECK(b.n_unstable <= b.upper);
        }
    }
}

TEST_CASE("count bounds") {
    const auto b = count_bounds({2, 2.0, 1.0, 20.0});
    CHECK(b.lower == doctest::Approx(20.0 / std::numbers::pi - 0.5));
    CHECK(b.check);
    CHECK(b.n_stable == 7);
    CHECK(b.n_unstable == 6);
    const auto near = count_bounds({2, 0.7, 1.0, std::numbers::pi / 2.0 + 1e-6});
    CHECK(near.lower == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(near.floor_lower == 0.0);
    CHECK(near.floor_check);
    CHECK_THROWS_AS(count_bounds({2, 2.0, 1.0, 1.5}), PreconditionError);
}

TEST_CASE("trace_branch satisfies the branch parametrisation") {
    const auto pts = trace_branch(2.0, 1.0, {0.0, 40.0}, 0.01);
    REQUIRE(!pts.empty());
    for (const auto& b : pts) {
        CHECK(b.tau > 0.0);
        CHECK(std::abs(b.tau - b.s / (2.0 - std::sin(b.s))) <= 1e-12 * std::max(1.0, b.tau));
        CHECK(std::abs(b.omega_sync - b.s / b.tau) <= 1e-12);
        CHECK(std::abs(sync_residual({2, 2.0, 1.0, b.tau}, b.omega_sync)) <= 1e-10);
        CHECK(b.stiffness == doctest::Approx(std::cos(b.s)));
        CHECK(b.stable == (b.stiffness > 0.0));
    }
    // s = pi k gives tau = pi k / 2 and Omega = 2.
    const auto at_pi = trace_branch(2.0, 1.0, {std::numbers::pi, std::numbers::pi + 0.5}, 1.0);
    REQUIRE(at_pi.size() == 1);
    CHECK(at_pi[0].tau == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
    CHECK(at_pi[0].omega_sync == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(trace_branch(2.0, 1.0, {1.0, 0.0}, 0.1), DomainError);
    CHECK_THROWS_AS(trace_branch(2.0, 1.0, {0.0, 1.0}, 0.0), DomainError);
}

TEST_CASE("trace_branch splits at poles when kappa >= omega") {
    // omega - kappa sin s vanishes at sin s = 1/2.
    const auto pts = trace_branch(1.0, 2.0, {0.0, 20.0}, 1e-3);
    int segments = 1;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].segment >= pts[i - 1].segment);
        segments += pts[i].segment != pts[i - 1].segment ? 1 : 0;
    }
    int poles = 0;
    for (double s = 0.0; s < 20.0; s += 1e-4) {
        poles += (1.0 - 2.0 * std::sin(s) > 0.0) != (1.0 - 2.0 * std::sin(s + 1e-4) > 0.0) ? 1 : 0;
    }
    CHECK(poles == 7);
    CHECK(segments >= 3);
    CHECK(segments <= poles + 1);
    // Points of one segment never straddle a pole.
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].segment == pts[i - 1].segment) {
            CHECK(((1.0 - 2.0 * std::sin(pts[i].s)) > 0.0) == ((1.0 - 2.0 * std::sin(pts[i - 1].s)) > 0.0));
        }
    }
}

TEST_CASE("bifurcations of omega = 2, kappa = 1 on tau in [0, 20]") {
    const auto list = find_bifurcations(2.0, 1.0, {0.0, 20.0});
    REQUIRE(list.size() >= 10);
    int folds = 0, trans = 0;
    for (const auto& b : list) {
        const double k = std::cos(b.omega_sync * b.tau);
        if (b.kind == BifurcationKind::Fold) {
            ++folds;
            CHECK(std::abs(b.tau * k + 1.0) < 1e-10);
        } else {
            ++trans;
            CHECK(std::abs(k) < 1e-10);
        }
        CHECK(std::abs(sync_residual({2, 2.0, 1.0, b.tau}, b.omega_sync)) < 1e-10);
        CHECK(!b.degenerate);
    }
    CHECK(folds == trans);
    for (std::size_t i = 1; i < list.size(); ++i) {
        CHECK(list[i].tau >= list[i - 1].tau);
    }
}

TEST_CASE("first fold agrees with a dense branch scan") {
    double first = INFINITY;
    for (const auto& b : find_bifurcations(2.0, 1.0, {0.0, 20.0})) {
        if (b.kind == BifurcationKind::Fold) {
            first = std::min(first, b.tau);
        }
    }
    const double scan = oracle::first_fold_scan(2.0, 1.0, 61.0, 1e-5);
    CHECK(first == doctest::Approx(scan).epsilon(1e-4));
}

TEST_CASE("bifurcation preconditions and degenerate folds") {
    CHECK_THROWS_AS(find_bifurcations(2.0, 0.0, {0.0, 5.0}), PreconditionError);
    CHECK_THROWS_AS(find_bifurcations(2.0, 1.0, {5.0, 1.0}), DomainError);
    bool flagged = false;
    for (const auto& b : find_bifurcations(std::numbers::pi, 1.0, {0.0, 10.0})) {
        flagged = flagged || (b.kind == BifurcationKind::Fold && b.degenerate);
    }
    CHECK(flagged);
}

TEST_CASE("characteristic roots: trivial exponent, Lambert W oracle and stability bounds") {
    const RingParams p{3, 2.0, 1.0, 20.0};
    const auto set = find_sync_solutions(p);
    const ComplexRect rect{-2.0, 2.0, -3.0, 3.0};
    for (std::size_t i : {std::size_t{0}, std::size_t{7}}) {
        const auto& sol = set.solutions[i];
        const auto res = characteristic_roots(p, sol, rect);
        CHECK(res.unresolved.empty());
        bool has_zero = false;
        for (const auto& r : res.roots) {
            CHECK(r.residual < 1e-9);
            CHECK(rect.contains(r.mu));
            has_zero = has_zero || (r.branch_index == 0 && std::abs(r.mu) < 1e-9);
            if (std::abs(r.mu.real()) < 1e-9) {
                CHECK(std::abs(r.mu.imag()) < 1e-9);
            }
            if (sol.stable) {
                CHECK(r.mu.real() <= 1e-9);
            } else if (r.mu.real() > 0.0) {
                CHECK(r.mu.real() <= -2.0 * sol.stiffness + 1e-12);
            }
        }
        CHECK(has_zero);
        // Every Lambert W root well inside the rectangle must have been found.
        for (int n = 0; n < p.n; ++n) {
            for (const auto& mu : oracle::lambert_roots(sol.stiffness, p.tau, n, p.n, 40)) {
                const ComplexRect inner{rect.re_lo + 0.05, rect.re_hi - 0.05, rect.im_lo + 0.05, rect.im_hi - 0.05};
                if (!inner.contains(mu)) {
                    continue;
                }
                bool found = false;
                for (const auto& r : res.roots) {
                    found = found || (r.branch_index == n && std::abs(r.mu - mu) < 1e-7);
                }
                CHECK_MESSAGE(found, "missing root " << mu.real() << " + " << mu.imag() << "i on branch " << n);
            }
        }
    }
}

TEST_CASE("characteristic roots without delay use the closed form") {
    const RingParams p{4, 1.0, 1.0, 0.0};
    const auto set = find_sync_solutions(p);
    const auto res = characteristic_roots(p, set.solutions[0], {-5.0, 5.0, -5.0, 5.0});
    REQUIRE(res.roots.size() == 4);
    for (const auto& r : res.roots) {
        const auto e = std::polar(1.0, kTwoPi * r.branch_index / 4.0);
        CHECK(std::abs(r.mu - (e - 1.0)) < 1e-12);
    }
}
