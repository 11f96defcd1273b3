#include "worldsim/errors.hpp"
#include "worldsim/registry.hpp"
#include "worldsim/sectors.hpp"

#include <doctest.h>

#include <algorithm>

using namespace worldsim;

namespace {

const ParameterRegistry& shipped_registry() {
    static const ParameterRegistry reg =
        ParameterRegistry::load(std::string(WORLDSIM_SOURCE_DIR) + "/data/registry.cfg");
    return reg;
}

} // namespace

TEST_CASE("shipped registry covers every parameter the world model reads") {
    const auto& reg = shipped_registry();
    for (const auto& name : sectors::required_world_parameters()) {
        INFO("parameter ", name);
        CHECK(reg.has(name));
    }
    CHECK(reg.entries().size() == sectors::required_world_parameters().size());
}

TEST_CASE("shipped registry nominals sit inside their admissible ranges") {
    for (const auto& e : shipped_registry().entries()) {
        INFO("parameter ", e.name);
        CHECK(e.low < e.high);
        CHECK(e.nominal >= e.low);
        CHECK(e.nominal <= e.high);
    }
}

TEST_CASE("registry accessors") {
    const auto& reg = shipped_registry();
    const auto& e = reg.entry("climate.sensitivity");
    CHECK(e.nominal == doctest::Approx(3.0));
    CHECK(e.sector == "climate");
    const ParameterRange r = reg.admissible_range("climate.sensitivity");
    CHECK(r.name == "climate.sensitivity");
    CHECK(r.low == doctest::Approx(2.0));
    CHECK(r.high == doctest::Approx(4.5));
    CHECK_FALSE(reg.has("nosuch.param"));
    CHECK_THROWS_AS(reg.entry("nosuch.param"), UnknownParameterError);
    CHECK_THROWS_AS(reg.admissible_range("nosuch.param"), UnknownParameterError);

    const auto nom = reg.nominals();
    CHECK(nom.size() == reg.entries().size());
    CHECK(nom.at("climate.sensitivity") == doctest::Approx(3.0));
}

TEST_CASE("registry rejects malformed files") {
    // A nominal outside its own range is a data error, not a warning.
    ParameterRegistry reg;
    CHECK_THROWS_AS(reg.add({"bad", 5.0, "", 0.0, 1.0, "test"}), InputError);
    CHECK_THROWS_AS(reg.add({"bad", 0.5, "", 1.0, 0.0, "test"}), InputError);
    reg.add({"ok", 0.5, "", 0.0, 1.0, "test"});
    CHECK_THROWS_AS(reg.add({"ok", 0.5, "", 0.0, 1.0, "test"}), DuplicateNameError);
    CHECK_THROWS_AS(ParameterRegistry::load("/nonexistent/registry.cfg"), InputError);
}
