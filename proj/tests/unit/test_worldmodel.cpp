#include "worldsim/ensemble.hpp"
#include "worldsim/errors.hpp"
#include "worldsim/registry.hpp"
#include "worldsim/sectors.hpp"

#include <doctest.h>

#include <cmath>

using namespace worldsim;

namespace {

const ParameterRegistry& shipped_registry() {
    static const ParameterRegistry reg =
        ParameterRegistry::load(std::string(WORLDSIM_SOURCE_DIR) + "/data/registry.cfg");
    return reg;
}

const ExecutableModel& world_model() {
    static const ExecutableModel model = compile_model(
        sectors::assemble_world_model(shipped_registry().nominals(),
                                      sectors::default_nonco2_forcing()));
    return model;
}

const Trajectory& baseline() {
    static const Trajectory traj = world_model().run(TimeGrid{});
    return traj;
}

double final_value(const std::string& variable,
                   const std::unordered_map<std::string, double>& tweaks) {
    auto params = shipped_registry().nominals();
    for (const auto& [k, v] : tweaks) params.at(k) = v;
    const Trajectory traj = world_model().run(TimeGrid{}, world_model().make_overrides(params));
    return traj.series(variable).back();
}

} // namespace

TEST_CASE("the world model assembles and compiles from registry nominals") {
    const auto& model = world_model();
    CHECK(model.stock_count() > 50);
    for (const auto& name : model.definition().outputs) {
        INFO("output ", name);
        CHECK(model.recorded_index(name) >= 0);
    }
}

TEST_CASE("assembly rejects incomplete parameter maps") {
    auto params = shipped_registry().nominals();
    params.erase("climate.sensitivity");
    CHECK_THROWS_AS(sectors::assemble_world_model(params, sectors::default_nonco2_forcing()),
                    MissingParameterError);
}

TEST_CASE("land classes always sum to the global land area") {
    const auto& land = baseline().series("land_total");
    for (const double v : land) {
        CHECK(v == doctest::Approx(13.0).epsilon(1e-12));
    }
}

TEST_CASE("population change equals births minus deaths") {
    const auto& traj = baseline();
    const auto& pop = traj.series("population");
    const auto& births_f = traj.series("births_f");
    const auto& births_m = traj.series("births_m");
    const auto& deaths = traj.series("total_deaths");
    for (size_t t = 0; t + 1 < pop.size(); ++t) {
        const double expected = pop[t] + births_f[t] + births_m[t] - deaths[t];
        CHECK(pop[t + 1] == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("carbon stocks change by exactly the net emissions") {
    const auto& traj = baseline();
    const std::vector<std::string> pools = {
        "c_atmosphere", "c_biosphere",       "c_ocean_0_100",    "c_ocean_100_400",
        "c_ocean_400_700", "c_ocean_700_2000", "c_ocean_2000_2800"};
    const auto& emissions = traj.series("co2_emissions");
    const auto& ccs = traj.series("ccs_removal");
    const size_t T = emissions.size();
    for (size_t t = 0; t + 1 < T; ++t) {
        double before = 0.0, after = 0.0;
        for (const auto& p : pools) {
            before += traj.series(p)[t];
            after += traj.series(p)[t + 1];
        }
        CHECK(after - before == doctest::Approx(emissions[t] - ccs[t]).epsilon(1e-9));
    }
}

TEST_CASE("energy market shares stay a unit simplex") {
    const auto& traj = baseline();
    const std::vector<std::string> shares = {"share_coal", "share_oil",  "share_gas",
                                             "share_solar", "share_wind", "share_biomass"};
    for (size_t t = 0; t < traj.series("share_coal").size(); ++t) {
        double sum = 0.0;
        for (const auto& s : shares) {
            const double v = traj.series(s)[t];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("supply components add up to the production total") {
    const auto& traj = baseline();
    for (size_t t = 0; t < traj.series("energy_demand").size(); ++t) {
        const double total = traj.series("fossil_energy_production")[t] +
                             traj.series("renewable_energy_production")[t];
        CHECK(total == doctest::Approx(traj.series("energy_production_total")[t]).epsilon(1e-9));
        CHECK(traj.series("energy_production_total")[t] <=
              traj.series("energy_demand")[t] * (1 + 1e-12));
    }
}

TEST_CASE("food supply categories add up and never exceed demand") {
    const auto& traj = baseline();
    for (size_t t = 0; t < traj.series("total_food_supply").size(); ++t) {
        const double sum = traj.series("food_supply_plant")[t] +
                           traj.series("food_supply_crop_meat")[t] +
                           traj.series("food_supply_dairy_eggs")[t] +
                           traj.series("food_supply_pasture_meat")[t];
        CHECK(sum == doctest::Approx(traj.series("total_food_supply")[t]).epsilon(1e-12));
        CHECK(traj.series("food_supply_plant")[t] <= traj.series("plant_demand_pc")[t] * (1 + 1e-12));
    }
}

TEST_CASE("bounded variables stay in their ranges") {
    const auto& traj = baseline();
    for (size_t t = 0; t < traj.series("msa").size(); ++t) {
        CHECK(traj.series("msa")[t] >= 0.0);
        CHECK(traj.series("msa")[t] <= 1.0);
        CHECK(traj.series("diet_adopter_share")[t] >= 0.0);
        CHECK(traj.series("diet_adopter_share")[t] <= 1.0);
        CHECK(traj.series("renewable_share")[t] >= 0.0);
        CHECK(traj.series("renewable_share")[t] <= 1.0);
        CHECK(traj.series("education_access")[t] >= 0.0);
        CHECK(traj.series("education_access")[t] <= 1.0);
    }
}

TEST_CASE("higher fertility raises end-of-century population") {
    const double base = baseline().series("population").back();
    CHECK(final_value("population", {{"fertility.scale", 1.1}}) > base);
    CHECK(final_value("population", {{"fertility.scale", 0.9}}) < base);
}

TEST_CASE("faster renewable learning raises the renewable share") {
    const double base = baseline().series("renewable_share").back();
    CHECK(final_value("renewable_share", {{"energy.renewable_learning", 0.38}}) > base);
    CHECK(final_value("renewable_share", {{"energy.renewable_learning", 0.12}}) < base);
}

TEST_CASE("higher climate sensitivity warms the surface more") {
    const double base = baseline().series("temperature_anomaly").back();
    CHECK(final_value("temperature_anomaly", {{"climate.sensitivity", 4.5}}) > base);
    CHECK(final_value("temperature_anomaly", {{"climate.sensitivity", 2.0}}) < base);
}

TEST_CASE("larger animal-food demand needs more pasture") {
    const double base = baseline().series("pasture_area").back();
    CHECK(final_value("pasture_area", {{"food.animal_scale", 1.25}}) > base);
}

TEST_CASE("stronger ccs deployment cuts net emissions") {
    const double base = baseline().series("co2_emissions").back() -
                        baseline().series("ccs_removal").back();
    const auto params = [&](double s) {
        auto p = shipped_registry().nominals();
        p.at("energy.ccs_scale") = s;
        return p;
    };
    const Trajectory strong =
        world_model().run(TimeGrid{}, world_model().make_overrides(params(2.0)));
    CHECK(strong.series("co2_emissions").back() - strong.series("ccs_removal").back() < base);
}

TEST_CASE("pathway forcing series feed the climate") {
    // The high-forcing series must warm more than the low one, all else equal.
    const auto nominals = shipped_registry().nominals();
    const std::string base = std::string(WORLDSIM_SOURCE_DIR) + "/data/forcing/";
    const auto low = compile_model(sectors::assemble_world_model(
        nominals, sectors::load_forcing_csv(base + "rcp26.csv")));
    const auto high = compile_model(sectors::assemble_world_model(
        nominals, sectors::load_forcing_csv(base + "rcp85.csv")));
    CHECK(high.run(TimeGrid{}).series("temperature_anomaly").back() >
          low.run(TimeGrid{}).series("temperature_anomaly").back());
}
