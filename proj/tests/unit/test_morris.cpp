#include "worldsim/errors.hpp"
#include "worldsim/morris.hpp"

#include <doctest.h>

#include <cmath>
#include <span>

using namespace worldsim;

namespace {

const std::vector<ParameterRange> kUnitRanges = {
    {"x1", 0.0, 1.0},
    {"x2", 0.0, 1.0},
    {"x3", 0.0, 1.0},
};

} // namespace

TEST_CASE("linear objectives recover coefficient magnitudes exactly") {
    // f = 3 x1 + x2 + 0 x3: every elementary effect equals the coefficient,
    // so mu_star gives |coefficients| and sigma vanishes.
    const auto f = [](std::span<const double> x) { return 3.0 * x[0] + x[1]; };
    const MorrisResult res = morris_screen(f, kUnitRanges, 20, 4, 99);
    REQUIRE(res.parameters.size() == 3);
    CHECK(res.parameters[0].mu_star / res.parameters[1].mu_star == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(res.parameters[0].mu_star == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(res.parameters[2].mu_star == doctest::Approx(0.0));
    for (const auto& p : res.parameters) {
        CHECK(p.sigma == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK(res.ranking() == std::vector<int>{0, 1, 2});
}

TEST_CASE("ranges rescale elementary effects") {
    // f = x over [0, 10] changes by 10 per unit-hypercube step.
    const auto f = [](std::span<const double> x) { return x[0]; };
    const MorrisResult res = morris_screen(f, {{"x", 0.0, 10.0}}, 8, 4, 5);
    CHECK(res.parameters[0].mu_star == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("interaction terms show up in sigma") {
    const auto f = [](std::span<const double> x) { return x[0] * x[1]; };
    const MorrisResult res = morris_screen(f, kUnitRanges, 20, 4, 7);
    CHECK(res.parameters[0].mu_star > 0.0);
    CHECK(res.parameters[1].mu_star > 0.0);
    CHECK(res.parameters[0].sigma > 0.01);
    CHECK(res.parameters[1].sigma > 0.01);
    CHECK(res.parameters[2].mu_star == doctest::Approx(0.0));
}

TEST_CASE("constant objectives screen to zero") {
    const auto f = [](std::span<const double>) { return 4.2; };
    const MorrisResult res = morris_screen(f, kUnitRanges, 10, 4, 1);
    for (const auto& p : res.parameters) {
        CHECK(p.mu_star == doctest::Approx(0.0));
        CHECK(p.sigma == doctest::Approx(0.0));
    }
}

TEST_CASE("morris is deterministic in the seed") {
    const auto f = [](std::span<const double> x) { return std::sin(3.0 * x[0]) + x[1] * x[2]; };
    const MorrisResult a = morris_screen(f, kUnitRanges, 12, 4, 31);
    const MorrisResult b = morris_screen(f, kUnitRanges, 12, 4, 31);
    REQUIRE(a.parameters.size() == b.parameters.size());
    for (size_t i = 0; i < a.parameters.size(); ++i) {
        CHECK(a.parameters[i].mu_star == b.parameters[i].mu_star);
        CHECK(a.parameters[i].sigma == b.parameters[i].sigma);
    }
}

TEST_CASE("ranking breaks ties by parameter index") {
    const auto f = [](std::span<const double> x) { return x[0] + x[1]; };
    const MorrisResult res = morris_screen(f, kUnitRanges, 10, 4, 2);
    CHECK(res.ranking() == std::vector<int>{0, 1, 2});
}

TEST_CASE("morris input validation") {
    const auto f = [](std::span<const double> x) { return x[0]; };
    CHECK_THROWS_AS(morris_screen(f, kUnitRanges, 0, 4, 1), InputError);
    CHECK_THROWS_AS(morris_screen(f, kUnitRanges, 10, 1, 1), InputError);
    CHECK_THROWS_AS(morris_screen(f, kUnitRanges, 10, 5, 1), InputError);  // p must be even
    CHECK_THROWS_AS(morris_screen(f, {}, 10, 4, 1), InputError);
}
