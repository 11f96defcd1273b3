#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <doctest.h>

using namespace worldsim;

TEST_CASE("sdl parses blocks, comments and values") {
    const auto doc = sdl::parse_string(
        "# leading comment\n"
        "param alpha {\n"
        "  nominal = 0.3   # trailing comment\n"
        "  units = billion persons\n"
        "}\n"
        "\n"
        "meta {\n"
        "  id = BAU\n"
        "}\n",
        "test");
    REQUIRE(doc.blocks.size() == 2);
    CHECK(doc.blocks[0].kind == "param");
    CHECK(doc.blocks[0].name == "alpha");
    CHECK(doc.blocks[0].get_double("nominal") == doctest::Approx(0.3));
    CHECK(doc.blocks[0].get("units") == "billion persons");
    CHECK(doc.blocks[1].kind == "meta");
    CHECK(doc.blocks[1].name.empty());
    CHECK(doc.blocks[1].get("id") == "BAU");
}

TEST_CASE("sdl block accessors") {
    const auto doc = sdl::parse_string("b x {\n k = 1.5\n}\n", "test");
    const auto& b = doc.blocks[0];
    CHECK(b.has("k"));
    CHECK_FALSE(b.has("missing"));
    CHECK(b.get_or("missing", "fallback") == "fallback");
    CHECK(b.maybe_double("k").value() == doctest::Approx(1.5));
    CHECK_FALSE(b.maybe_double("missing").has_value());
    CHECK_THROWS_AS((void)b.get("missing"), ParseError);
}

TEST_CASE("sdl reports malformed input with location") {
    CHECK_THROWS_AS(sdl::parse_string("param x {\n no_equals_here\n}\n", "f"), ParseError);
    CHECK_THROWS_AS(sdl::parse_string("param x {\n k = 1\n", "f"), ParseError);
    CHECK_THROWS_AS(sdl::parse_string("stray line\n", "f"), ParseError);
    try {
        sdl::parse_string("param x {\n k = 1\n", "somefile");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("somefile") != std::string::npos);
    }
}

TEST_CASE("sdl knot and range parsing") {
    const auto knots = sdl::parse_knots("(2015, 1.0) (2050, 2.5) (2100, 4)");
    REQUIRE(knots.size() == 3);
    CHECK(knots[1].first == doctest::Approx(2050));
    CHECK(knots[1].second == doctest::Approx(2.5));

    const auto [lo, hi] = sdl::parse_range("[0.25, 0.35]");
    CHECK(lo == doctest::Approx(0.25));
    CHECK(hi == doctest::Approx(0.35));

    CHECK_THROWS_AS(sdl::parse_range("0.25, 0.35"), ParseError);
    CHECK_THROWS_AS(sdl::parse_knots("(1, 2) (3"), ParseError);
    CHECK_THROWS_AS(sdl::parse_double("not a number"), ParseError);
}
