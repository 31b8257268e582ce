#include <doctest.h>

#include <random>

#include "ringosc/core.hpp"

using namespace ringosc;

TEST_CASE("wrap_phase canonical representatives") {
    CHECK(wrap_phase(0.0).value() == 0.0);
    CHECK(wrap_phase(kTwoPi).value() == 0.0);
    CHECK(wrap_phase(7.0 * std::numbers::pi).value() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(wrap_phase(-0.5).value() == doctest::Approx(kTwoPi - 0.5).epsilon(1e-15));
    CHECK(wrap_phase(-kTwoPi).value() == 0.0);
    CHECK_THROWS_AS(wrap_phase(std::nan("")), DomainError);
    CHECK_THROWS_AS(wrap_phase(INFINITY), DomainError);
}

TEST_CASE("wrap_phase is 2 pi periodic and lands in [0, 2 pi)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(-50.0, 50.0);
    std::uniform_int_distribution<int> k(-20, 20);
    for (int i = 0; i < 2000; ++i) {
        const double a = x(rng);
        const int m = k(rng);
        const double w = wrap_phase(a).value();
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
        // a + 2 pi m is itself rounded; compare on the circle.
        const double d = std::abs(w - wrap_phase(a + kTwoPi * m).value());
        CHECK(std::min(d, kTwoPi - d) < 1e-12);
    }
}

TEST_CASE("sync_residual examples") {
    CHECK(sync_residual({2, 2.0, 1.0, 0.0}, 2.0) == 0.0);
    CHECK(sync_residual({2, 0.0, 3.0, 10.0}, 0.0) == 0.0);
    // sin(40) to 17 digits.
    CHECK(sync_residual({2, 2.0, 1.0, 20.0}, 2.0) == doctest::Approx(0.74511316047934883).epsilon(1e-14));
}

TEST_CASE("sync_residual is odd for omega = 0") {
    const RingParams p{3, 0.0, 1.7, 6.3};
    for (double w = -1.7; w <= 1.7; w += 0.01) {
        CHECK(sync_residual(p, -w) == doctest::Approx(-sync_residual(p, w)).epsilon(1e-14));
    }
}

TEST_CASE("RingParams validation") {
    CHECK_NOTHROW(RingParams{2, 1.0, 1.0, 0.0}.validate());
    CHECK_THROWS_AS(RingParams({1, 1.0, 1.0, 1.0}).validate(), DomainError);
    CHECK_THROWS_AS(RingParams({2, 1.0, 0.0, 1.0}).validate(), DomainError);
    CHECK_THROWS_AS(RingParams({2, 1.0, -1.0, 1.0}).validate(), DomainError);
    CHECK_THROWS_AS(RingParams({2, 1.0, 1.0, -0.1}).validate(), DomainError);
    CHECK_THROWS_AS(RingParams({2, std::nan(""), 1.0, 1.0}).validate(), DomainError);
}

TEST_CASE("RingParams JSON round trip") {
    const RingParams p{7, 1.25, 0.5, 3.0};
    const nlohmann::json j = p;
    CHECK(j.at("n") == 7);
    CHECK(j.get<RingParams>() == p);
}

TEST_CASE("make_sync_solution derives stiffness and stability") {
    const RingParams p{2, 2.0, 1.0, 20.0};
    const auto s = make_sync_solution(p, 1.9);
    CHECK(s.stiffness == doctest::Approx(std::cos(38.0)).epsilon(1e-15));
    CHECK(s.stable == (s.stiffness > 0.0));
    CHECK(s.residual == doctest::Approx(std::abs(sync_residual(p, 1.9))));
    const nlohmann::json j = s;
    CHECK(j.at("K").get<double>() == s.stiffness);
}
