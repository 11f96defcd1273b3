#pragma once

#include "worldsim/model.hpp"

#include <array>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace worldsim::sectors {

inline constexpr int kCohorts = 21;  // 5-year cohorts, ages 0 to 100+

// Persons per sex and 5-year age cohort.
struct CohortGrid {
    std::array<double, kCohorts> female{};
    std::array<double, kCohorts> male{};

    double total() const;
};

// One annual aging-chain step: cohort c loses c/5 to c+1 (none from the
// terminal cohort) plus mortality, and the first cohort gains the births.
// Throws NegativePopulationError when a cohort would go below zero.
CohortGrid population_step(const CohortGrid& cohorts, double births,
                           std::span<const double> mortality, double female_birth_fraction);

// A * K^alpha * L^(1-alpha); throws DomainError on non-positive inputs or
// alpha outside (0, 1).
double cobb_douglas_gwp(double productivity, double capital, double labor, double alpha);

// Logit cost competition: share_i = exp(-gamma c_i) / sum_j exp(-gamma c_j).
std::vector<double> energy_market_shares(std::span<const double> costs, double gamma);

struct CarbonReservoirs {
    double atmosphere = 0.0;
    double biosphere = 0.0;               // biosphere + pedosphere
    std::array<double, 5> ocean{};        // 0-100, 100-400, 400-700, 700-2000, 2000-2800 m

    double total() const;
};

// Donor-controlled exchange coefficients (1/yr) along the chain
// atmosphere <-> biosphere and atmosphere <-> mixed layer <-> deep layers.
struct CarbonFluxes {
    double atm_to_bio = 0.0;
    double bio_to_atm = 0.0;
    double atm_to_ocean = 0.0;
    double ocean_to_atm = 0.0;
    std::array<double, 4> down{};  // layer i -> i+1
    std::array<double, 4> up{};    // layer i+1 -> i

    // Nominal coefficients; preindustrial equilibrium built in.
    static CarbonFluxes nominal(double uptake_scale = 1.0);
};

// One annual step; atmosphere additionally gains (emissions - ccs).
// Total carbon changes by exactly (emissions - ccs) * dt.
CarbonReservoirs carbon_step(const CarbonReservoirs& res, const CarbonFluxes& k,
                             double emissions, double ccs);

// F2x * ln(C / C_pre) / ln 2; throws DomainError on non-positive concentration.
double radiative_forcing(double c_ppm, double c_pre_ppm, double f2x);

struct ClimateState {
    double surface = 0.0;          // surface / mixed-layer anomaly, degC
    std::array<double, 4> deep{};  // deep-ocean layer anomalies
};

struct ClimateParams {
    double lambda_out = 1.2333;                         // W/m2/K outbound-radiation feedback
    double surface_capacity = 13.0;                     // W yr/m2/K
    std::array<double, 4> deep_capacity{50.0, 80.0, 150.0, 120.0};
    std::array<double, 4> exchange{0.6, 0.5, 0.4, 0.3};  // W/m2/K between consecutive boxes

    double equilibrium(double forcing) const { return forcing / lambda_out; }
};

// One annual step of the surface + 4-layer diffusive chain under total
// forcing F (W/m2). With constant F the surface converges to F / lambda_out.
ClimateState temperature_step(const ClimateState& clim, const ClimateParams& p, double forcing);

// da/dt = contact * a * (1-a) + risk * (1-a), clamped to [0, 1].
double diet_shift_step(double adopter, double contact, double risk_signal);

// MSA relaxes toward capacity at rate r_regen (capacity above) or r_ext
// (capacity below); result clamped to [0, 1].
double msa_step(double msa, double capacity, double r_regen, double r_ext);

// ---------------------------------------------------------------------------
// World model assembly

using ParamMap = std::unordered_map<std::string, double>;

// Every parameter the assembled model reads; all must be present in the map
// handed to assemble_world_model (names match the shipped registry).
const std::vector<std::string>& required_world_parameters();

// Wires the ten sectors into one compilable ModelDefinition whose outputs
// cover the indicator catalog. The non-CO2 forcing series (year, W/m2) comes
// from the pathway. Throws MissingParameterError.
ModelDefinition assemble_world_model(const ParamMap& params,
                                     const std::vector<std::pair<double, double>>& nonco2_forcing);

// Default BAU-shaped non-CO2 forcing knots, used when no pathway series is given.
std::vector<std::pair<double, double>> default_nonco2_forcing();

// Loads a `year,forcing_wm2` CSV into forcing knots.
std::vector<std::pair<double, double>> load_forcing_csv(const std::string& path);

} // namespace worldsim::sectors
