#include <doctest.h>

#include <random>

#include "ringosc/dde.hpp"
#include "ringosc/sync_analysis.hpp"
#include "support.hpp"

using namespace ringosc;

TEST_CASE("DelayVector helpers") {
    const DelayVector d{{0.0, 2.0, 0.5, 3.0}};
    CHECK(d.size() == 4);
    CHECK(d.max() == 3.0);
    CHECK(d.min_positive() == 0.5);
    CHECK(DelayVector{{0.0, 0.0}}.min_positive() == 0.0);
    CHECK(DelayVector::homogeneous(3, 1.5).delays == std::vector<double>{1.5, 1.5, 1.5});
}

TEST_CASE("linear ramp history") {
    const auto h = HistoryFunction::linear_ramp(0.5, {0.0, 1.0}, 4.0);
    CHECK(h.is_linear_ramp());
    CHECK(h.size() == 2);
    CHECK(h.value(1, -2.0) == doctest::Approx(0.5 * (-3.0)));
    CHECK(h.ramp_slope() == 0.5);
    CHECK_THROWS_AS(HistoryFunction::linear_ramp(INFINITY, {0.0}, 1.0), DomainError);
}

TEST_CASE("sampled history is exact for cubics and supports rate breaks") {
    auto cubic = [](double t) { return 0.3 * t * t * t - t * t + 2.0 * t + 1.0; };
    auto dcubic = [](double t) { return 0.9 * t * t - 2.0 * t + 2.0; };
    std::vector<HistoryKnot> knots;
    for (double t : {-3.0, -1.7, -0.4, 0.0}) {
        knots.push_back({t, cubic(t), dcubic(t)});
    }
    const auto h = HistoryFunction::sampled({knots}, 3.0);
    for (double t = -3.0; t <= 0.0; t += 0.01) {
        CHECK(h.value(0, t) == doctest::Approx(cubic(t)).epsilon(1e-12));
    }
    // Kink at t = -1: slope 1 to the left, slope 2 to the right.
    const auto kink = HistoryFunction::sampled({{{-2.0, -1.0, 1.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 2.0}, {0.0, 2.0, 2.0}}}, 2.0);
    CHECK(kink.value(0, -1.5) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(kink.value(0, -0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(HistoryFunction::sampled({{{0.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}}}, 1.0), DomainError);
    CHECK_THROWS_AS(HistoryFunction::sampled({{}}, 1.0), DomainError);
}

TEST_CASE("the synchronous state is an exact solution") {
    const RingParams p{3, 1.0, 1.0, 3.0};
    const auto sol = closest_stable(find_sync_solutions(p));
    const auto d = DelayVector::homogeneous(3, 3.0);
    const auto traj = integrate(p, d, HistoryFunction::linear_ramp(sol.omega_sync, {0.0, 0.0, 0.0}, 3.0), 300.0,
                                IntegrationOptions{0.0, 10, 0.0});
    double dev = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        for (std::size_t j = 0; j < 3; ++j) {
            dev = std::max(dev, std::abs(traj.phase(k, j) - sol.omega_sync * traj.times[k]));
        }
        CHECK(traj.order_param[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(dev < 1e-8);
}

TEST_CASE("zero coupling gives free rotation") {
    const RingParams p{4, 1.3, 0.0, 2.0};
    const auto traj = integrate(p, DelayVector::homogeneous(4, 2.0),
                                HistoryFunction::linear_ramp(0.2, {0.0, 0.5, 1.0, 1.5}, 2.0), 20.0);
    for (std::size_t k = 0; k < traj.samples(); k += 37) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double x0 = -0.2 * 0.5 * static_cast<double>(j);
            CHECK(traj.phase(k, j) == doctest::Approx(x0 + 1.3 * traj.times[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("integrate refuses steps above a quarter of the smallest positive delay") {
    const RingParams p{2, 1.0, 1.0, 1.0};
    const auto h = HistoryFunction::linear_ramp(1.0, {0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(integrate(p, DelayVector::homogeneous(2, 1.0), h, 5.0, {0.3}), DomainError);
    CHECK_NOTHROW(integrate(p, DelayVector::homogeneous(2, 1.0), h, 5.0, {0.25}));
    CHECK_THROWS_AS(integrate(p, DelayVector::homogeneous(3, 1.0), h, 5.0), DomainError);
    CHECK_THROWS_AS(integrate(p, DelayVector{{1.0, -1.0}}, h, 5.0), DomainError);
}

TEST_CASE("zero delays use the instantaneous state") {
    // With tau = 0 and identical start phases the ring stays synchronous at omega.
    const RingParams p{3, 0.7, 1.0, 0.0};
    const auto traj = integrate(p, DelayVector{{0.0, 0.0, 0.0}}, HistoryFunction::linear_ramp(1.0, {0.0, 0.0, 0.0}, 0.0),
                                5.0, {0.01});
    CHECK(traj.phase(traj.samples() - 1, 0) == doctest::Approx(0.7 * traj.times.back()).epsilon(1e-12));
}

TEST_CASE("fourth-order convergence on the homogeneous ring") {
    const RingParams p{5, 1.0, 1.0, 3.0};
    const auto hist = HistoryFunction::linear_ramp(0.8, {0.0, 0.3, -0.2, 0.5, 0.1}, 3.0);
    const auto d = DelayVector::homogeneous(5, 3.0);
    const double h = 0.1;
    const auto a = integrate(p, d, hist, 30.0, {h});
    const auto b = integrate(p, d, hist, 30.0, {h / 2});
    const auto ref = integrate(p, d, hist, 30.0, {h / 8});
    const double ratio = oracle::max_difference(a, ref) / oracle::max_difference(b, ref);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("unwrapped phases are continuous and r stays in [0, 1]") {
    const RingParams p{6, 1.0, 1.0, 2.0};
    const auto traj = integrate(p, DelayVector::homogeneous(6, 2.0),
                                HistoryFunction::linear_ramp(1.0, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, 2.0), 40.0);
    for (std::size_t k = 1; k < traj.samples(); ++k) {
        for (std::size_t j = 0; j < 6; ++j) {
            CHECK(std::abs(traj.phase(k, j) - traj.phase(k - 1, j)) < std::numbers::pi);
        }
        CHECK(traj.order_param[k] >= 0.0);
        CHECK(traj.order_param[k] <= 1.0 + 1e-15);
    }
}

TEST_CASE("order parameter") {
    CHECK(order_parameter(std::vector<double>{0.3, 0.3, 0.3}) == doctest::Approx(1.0));
    std::vector<double> uniform;
    for (int j = 0; j < 7; ++j) {
        uniform.push_back(kTwoPi * j / 7.0);
    }
    CHECK(order_parameter(uniform) < 1e-12);
    CHECK(order_parameter(std::vector<double>{0.0, std::numbers::pi / 2.0}) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> x(5), y(5);
        const double shift = u(rng);
        for (std::size_t j = 0; j < 5; ++j) {
            x[j] = u(rng);
            y[j] = x[j] + shift;
        }
        CHECK(order_parameter(x) == doctest::Approx(order_parameter(y)).epsilon(1e-12));
    }
}

TEST_CASE("crossing times of linear phases") {
    const RingParams p{2, 1.0, 1.0, 3.0};
    const auto sol = closest_stable(find_sync_solutions(p));
    const double om = sol.omega_sync;
    const auto traj = integrate(p, DelayVector::homogeneous(2, 3.0), HistoryFunction::linear_ramp(om, {0.0, 0.0}, 3.0),
                                100.0);
    const auto c = crossing_times(traj, wrap_phase(0.0));
    REQUIRE(c[0].size() >= 3);
    for (std::size_t k = 0; k < c[0].size(); ++k) {
        CHECK(c[0][k] == doctest::Approx(kTwoPi * static_cast<double>(k + 1) / om).epsilon(1e-9));
    }
}

TEST_CASE("only upward crossings are counted") {
    Trajectory t;
    t.n = 1;
    t.spacing = 1.0;
    const std::vector<double> x{0.0, 7.0, 6.0, 5.0, 7.5, 13.0, 12.0, 13.5};
    for (std::size_t k = 0; k < x.size(); ++k) {
        t.times.push_back(static_cast<double>(k));
        t.phases.push_back(x[k]);
        t.rates.push_back(0.0);
        t.order_param.push_back(1.0);
    }
    const auto c = crossing_times(t, wrap_phase(0.0));
    // Brute force: an upward crossing of 2 pi m lies between samples a < b with a < 2 pi m <= b.
    std::size_t expected = 0;
    for (std::size_t k = 1; k < x.size(); ++k) {
        for (int m = 1; m <= 3; ++m) {
            expected += (x[k - 1] < kTwoPi * m && x[k] >= kTwoPi * m) ? 1 : 0;
        }
    }
    CHECK(c[0].size() == expected);
    for (std::size_t k = 1; k < c[0].size(); ++k) {
        CHECK(c[0][k] > c[0][k - 1]);
    }
}

TEST_CASE("phase_at interpolates recorded samples") {
    const RingParams p{2, 1.0, 0.5, 1.0};
    const auto traj = integrate(p, DelayVector::homogeneous(2, 1.0), HistoryFunction::linear_ramp(1.0, {0.0, 0.4}, 1.0),
                                10.0, {0.01});
    const auto fine = integrate(p, DelayVector::homogeneous(2, 1.0), HistoryFunction::linear_ramp(1.0, {0.0, 0.4}, 1.0),
                                10.0, {0.0025});
    for (double t = 0.5; t < 9.5; t += 0.377) {
        const auto k = static_cast<std::size_t>(std::llround(t / 0.0025));
        CHECK(traj.phase_at(1, fine.times[k]) == doctest::Approx(fine.phase(k, 1)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(traj.phase_at(0, 11.0), DomainError);
}
