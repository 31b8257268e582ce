#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ringosc/experiments.hpp"

using namespace ringosc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("ringosc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("experiment names") {
    for (auto n : {ExperimentName::PerturbationMap, ExperimentName::BasinMap, ExperimentName::SineDiscrimination,
                   ExperimentName::SpeechSurrogate}) {
        CHECK(experiment_from_string(to_string(n)) == n);
    }
    CHECK_THROWS_AS(experiment_from_string("Nope"), DomainError);
}

TEST_CASE("perturbation map is deterministic and writes a params header") {
    ExperimentSpec spec;
    spec.overrides = {{"n", 8}, {"t_end", 30.0}, {"eps", {0.5, 1.0}}, {"sites", {0, 3}}};
    spec.seed = 7;
    const auto a = scratch("pm_a"), b = scratch("pm_b");
    const auto ra = run_experiment(spec, a);
    spec.threads = 2;
    run_experiment(spec, b);
    REQUIRE(ra.files.size() == 1);
    const auto text = slurp(a / "perturbation_map.csv");
    CHECK(text == slurp(b / "perturbation_map.csv"));
    CHECK(text.rfind("# params: {", 0) == 0);
    std::istringstream lines(text);
    std::string line;
    int rows = -2;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 4);
    CHECK(ra.params["n"] == 8);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("perturbation scores decrease with a smaller horizon only mildly for small eps") {
    PerturbationMapConfig cfg;
    cfg.n = 6;
    cfg.t_end = 60.0;
    cfg.eps = {0.01, 2.5};
    cfg.sites = {2};
    const auto cells = perturbation_map(cfg);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].score > 0.999);
    CHECK(cells[0].score >= cells[1].score);
}

TEST_CASE("unknown override keys are rejected") {
    ExperimentSpec spec;
    spec.overrides = {{"bogus", 1}};
    CHECK_THROWS_AS(run_experiment(spec, scratch("bad")), DomainError);
    spec.name = ExperimentName::SineDiscrimination;
    spec.overrides = {{"ingest", {{"fft_sz", 2}}}};
    CHECK_THROWS_AS(run_experiment(spec, scratch("bad")), DomainError);
}

TEST_CASE("basin map on a small grid snaps onto stable solutions") {
    BasinMapConfig cfg;
    cfg.tau = 3.0;
    cfg.t_end = 400.0;
    cfg.grid = 3;
    cfg.step = 0.05;
    cfg.rate_window = 50.0;
    const auto res = basin_map(cfg);
    CHECK(res.cells.size() == 9);
    for (const auto& c : res.cells) {
        if (c.solution >= 0) {
            CHECK(res.solutions.solutions[static_cast<std::size_t>(c.solution)].stable);
            CHECK(c.spread < 1e-3);
        }
    }
}

TEST_CASE("Wilson interval") {
    const auto [lo, hi] = wilson_interval(8, 10);
    // Closed form for z = 1.959964.
    CHECK(lo == doctest::Approx(0.4901625).epsilon(1e-5));
    CHECK(hi == doctest::Approx(0.9433178).epsilon(1e-5));
    const auto [l0, h0] = wilson_interval(0, 5);
    CHECK(l0 == 0.0);
    CHECK(h0 > 0.0);
    CHECK(wilson_interval(0, 0) == std::pair<double, double>{0.0, 1.0});
}

TEST_CASE("default theta grid") {
    const auto g = default_theta_grid();
    REQUIRE(g.size() == 29);
    CHECK(g.front() == doctest::Approx(0.9));
    CHECK(g.back() == doctest::Approx(1.0 - 1e-8));
}
