#include "worldsim/sectors.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace worldsim::sectors {

// ---------------------------------------------------------------------------
// Pure sector operations

double CohortGrid::total() const {
    return std::accumulate(female.begin(), female.end(), 0.0) +
           std::accumulate(male.begin(), male.end(), 0.0);
}

CohortGrid population_step(const CohortGrid& cohorts, double births,
                           std::span<const double> mortality, double female_birth_fraction) {
    if (births < 0.0) throw DomainError("population_step: births must be >= 0");
    if (mortality.size() != kCohorts) {
        throw DomainError("population_step: need one mortality rate per cohort");
    }
    CohortGrid next = cohorts;
    auto advance = [&](std::array<double, kCohorts>& cur, const std::array<double, kCohorts>& prev,
                       double inflow0, const char* sex) {
        for (int c = 0; c < kCohorts; ++c) {
            if (mortality[c] < 0.0) throw DomainError("population_step: negative mortality rate");
            const double maturation = c + 1 < kCohorts ? prev[c] / 5.0 : 0.0;
            const double deaths = prev[c] * mortality[c];
            const double inflow = c == 0 ? inflow0 : prev[c - 1] / 5.0;
            cur[c] = prev[c] + inflow - maturation - deaths;
            if (cur[c] < 0.0) {
                throw NegativePopulationError("population_step: " + std::string(sex) + " cohort " +
                                              std::to_string(c) + " would go negative");
            }
        }
    };
    advance(next.female, cohorts.female, births * female_birth_fraction, "female");
    advance(next.male, cohorts.male, births * (1.0 - female_birth_fraction), "male");
    return next;
}

double cobb_douglas_gwp(double productivity, double capital, double labor, double alpha) {
    if (!(productivity > 0.0) || !(capital > 0.0) || !(labor > 0.0)) {
        throw DomainError("cobb_douglas_gwp: A, K, L must be > 0");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw DomainError("cobb_douglas_gwp: alpha must be in (0, 1)");
    }
    return productivity * std::pow(capital, alpha) * std::pow(labor, 1.0 - alpha);
}

std::vector<double> energy_market_shares(std::span<const double> costs, double gamma) {
    if (gamma < 0.0) throw DomainError("energy_market_shares: gamma must be >= 0");
    std::vector<double> shares(costs.size());
    double denom = 0.0;
    for (size_t i = 0; i < costs.size(); ++i) {
        if (!(costs[i] > 0.0)) throw DomainError("energy_market_shares: costs must be > 0");
        shares[i] = std::exp(-gamma * costs[i]);
        denom += shares[i];
    }
    for (double& s : shares) s /= denom;
    return shares;
}

double CarbonReservoirs::total() const {
    return atmosphere + biosphere + std::accumulate(ocean.begin(), ocean.end(), 0.0);
}

CarbonFluxes CarbonFluxes::nominal(double uptake_scale) {
    // Preindustrial equilibrium pools: atmosphere 600, biosphere 2300, ocean
    // layers 900/1600/1500/5000/2200 GtC; coefficients keep those in balance.
    CarbonFluxes k;
    k.atm_to_bio = 0.006;
    k.bio_to_atm = 0.006 * 600.0 / 2300.0;
    k.atm_to_ocean = 0.006;
    k.ocean_to_atm = 0.006 * 600.0 / 900.0;
    k.down = {0.010, 0.004, 0.002, 0.001};
    k.up = {0.010 * 900.0 / 1600.0, 0.004 * 1600.0 / 1500.0, 0.002 * 1500.0 / 5000.0,
            0.001 * 5000.0 / 2200.0};
    const double s = uptake_scale;
    k.atm_to_bio *= s;
    k.bio_to_atm *= s;
    k.atm_to_ocean *= s;
    k.ocean_to_atm *= s;
    for (auto& v : k.down) v *= s;
    for (auto& v : k.up) v *= s;
    return k;
}

CarbonReservoirs carbon_step(const CarbonReservoirs& res, const CarbonFluxes& k,
                             double emissions, double ccs) {
    if (emissions < 0.0 || ccs < 0.0) throw DomainError("carbon_step: emissions and ccs must be >= 0");
    CarbonReservoirs next = res;
    const double ab = k.atm_to_bio * res.atmosphere;
    const double ba = k.bio_to_atm * res.biosphere;
    const double ao = k.atm_to_ocean * res.atmosphere;
    const double oa = k.ocean_to_atm * res.ocean[0];
    next.atmosphere += emissions - ccs - ab + ba - ao + oa;
    next.biosphere += ab - ba;
    next.ocean[0] += ao - oa;
    for (int i = 0; i < 4; ++i) {
        const double down = k.down[i] * res.ocean[i];
        const double up = k.up[i] * res.ocean[i + 1];
        next.ocean[i] += up - down;
        next.ocean[i + 1] += down - up;
    }
    const auto check = [](double v, const char* name) {
        if (v < 0.0) throw NegativeReservoirError(std::string("carbon_step: reservoir '") + name +
                                                  "' would go negative");
    };
    check(next.atmosphere, "atmosphere");
    check(next.biosphere, "biosphere");
    for (int i = 0; i < 5; ++i) check(next.ocean[i], "ocean");
    return next;
}

double radiative_forcing(double c_ppm, double c_pre_ppm, double f2x) {
    if (!(c_ppm > 0.0) || !(c_pre_ppm > 0.0)) {
        throw DomainError("radiative_forcing: concentrations must be > 0");
    }
    return f2x * std::log(c_ppm / c_pre_ppm) / std::log(2.0);
}

ClimateState temperature_step(const ClimateState& clim, const ClimateParams& p, double forcing) {
    if (!std::isfinite(forcing)) throw DomainError("temperature_step: non-finite forcing");
    ClimateState next = clim;
    const double to_deep = p.exchange[0] * (clim.surface - clim.deep[0]);
    next.surface += (forcing - p.lambda_out * clim.surface - to_deep) / p.surface_capacity;
    for (int i = 0; i < 4; ++i) {
        const double in = p.exchange[i] * ((i == 0 ? clim.surface : clim.deep[i - 1]) - clim.deep[i]);
        const double out = i < 3 ? p.exchange[i + 1] * (clim.deep[i] - clim.deep[i + 1]) : 0.0;
        next.deep[i] += (in - out) / p.deep_capacity[i];
    }
    return next;
}

double diet_shift_step(double adopter, double contact, double risk_signal) {
    if (adopter < 0.0 || adopter > 1.0) throw DomainError("diet_shift_step: adopter share outside [0,1]");
    if (contact < 0.0 || risk_signal < 0.0) {
        throw DomainError("diet_shift_step: contact and risk must be >= 0");
    }
    const double da = contact * adopter * (1.0 - adopter) + risk_signal * (1.0 - adopter);
    return std::min(1.0, std::max(0.0, adopter + da));
}

double msa_step(double msa, double capacity, double r_regen, double r_ext) {
    if (capacity < 0.0 || capacity > 1.0) throw DomainError("msa_step: capacity outside [0,1]");
    const double rate = capacity >= msa ? r_regen : r_ext;
    const double next = msa + rate * (capacity - msa);
    return std::min(1.0, std::max(0.0, next));
}

// ---------------------------------------------------------------------------
// World model assembly

namespace {

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// 2015 world age structure, fraction of total population per 5-year cohort.
constexpr std::array<double, kCohorts> kAgeFraction = {
    0.0916, 0.0873, 0.0835, 0.0820, 0.0837, 0.0819, 0.0756,
    0.0690, 0.0659, 0.0608, 0.0569, 0.0482, 0.0406, 0.0318,
    0.0231, 0.0168, 0.0109, 0.0057, 0.0022, 0.0006, 0.0001,
};

// Annual mortality per cohort (sex-neutral base; male runs higher).
constexpr std::array<double, kCohorts> kBaseMortality = {
    0.0080, 0.0006, 0.0006, 0.0010, 0.0013, 0.0015, 0.0017,
    0.0020, 0.0025, 0.0035, 0.0050, 0.0080, 0.0120, 0.0180,
    0.0300, 0.0500, 0.0850, 0.1400, 0.2200, 0.3200, 0.4500,
};

constexpr double kFemaleShare = 0.496;
constexpr double kFemaleMortalityMult = 0.85;
constexpr double kMaleMortalityMult = 1.15;

// Land classes, billion ha; global total fixed.
constexpr double kArable0 = 1.42;
constexpr double kPermanent0 = 0.17;
constexpr double kPasture0 = 3.27;
constexpr double kForest0 = 4.00;
constexpr double kUrban0 = 0.30;
constexpr double kLandTotal = 13.0;

// Energy resource bases (EJ) and carbon intensities (GtC/EJ).
constexpr double kCoalRes0 = 45000.0, kOilRes0 = 19000.0, kGasRes0 = 17000.0;
constexpr double kSolarCum0 = 60.0, kWindCum0 = 100.0, kBiomassCum0 = 600.0;
constexpr double kCoalCI = 0.0250, kOilCI = 0.0190, kGasCI = 0.0137;

constexpr double kCropEnergy = 2.4;     // Pkcal per Bha per unit yield (t/ha)
constexpr double kPastureYield0 = 0.179;  // Pkcal/Bha/yr

const std::vector<std::string> kRequiredParams = {
    "population.initial_total", "fertility.scale", "mortality.scale",
    "mortality.improvement_scale", "population.female_birth_fraction",
    "education.enrollment_scale", "labor.participation", "labor.education_boost",
    "economy.alpha", "economy.savings_rate", "economy.depreciation",
    "economy.energy_capital_share", "tfp.initial", "tfp.growth_scale", "damage.scale",
    "energy.intensity_scale", "energy.logit_gamma", "energy.capacity0",
    "energy.coal_cost", "energy.oil_cost", "energy.gas_cost",
    "energy.solar_cost0", "energy.wind_cost0", "energy.biomass_cost0",
    "energy.renewable_learning", "energy.cost_floor", "energy.fossil_discovery_scale",
    "energy.ccs_scale", "energy.share_adjust",
    "water.agri_intensity", "water.industrial_intensity", "water.domestic_per_capita",
    "water.supply", "water.efficiency_scale",
    "yield.base", "yield.tech_scale", "yield.climate_sensitivity",
    "fertilizer.intensity_scale", "land.conversion_rate", "land.reforestation_rate",
    "land.urban_per_capita", "land.carbon_density", "land.agri_emission_intensity",
    "food.plant_kcal", "food.crop_meat_kcal", "food.pasture_meat_kcal", "food.dairy_kcal",
    "food.animal_scale", "food.income_effect_scale", "food.waste_fraction",
    "food.feed_multiplier", "food.pasture_yield",
    "diet.adopter0", "diet.contact_rate", "diet.risk_scale", "diet.meat_reduction",
    "carbon.atm0", "carbon.bio0", "carbon.uptake_scale",
    "climate.sensitivity", "climate.f2x", "climate.surface_capacity",
    "climate.mixing_scale", "climate.t0", "forcing.nonco2_scale",
    "bio.msa0", "bio.regen_rate", "bio.extinction_rate", "bio.climate_sensitivity",
};

struct Builder {
    ModelDefinition def;

    void param(const std::string& name, double value, const std::string& units = "") {
        def.parameters.push_back({name, value, units});
    }
    void stock(const std::string& name, const std::string& initial, const std::string& units = "") {
        def.stocks.push_back({name, initial, units});
    }
    void aux(const std::string& name, const std::string& expr, const std::string& units = "") {
        def.auxiliaries.push_back({name, expr, units});
    }
    void flow(const std::string& name, const std::string& from, const std::string& to,
              const std::string& expr) {
        def.flows.push_back({name, from, to, expr});
    }
    void table(const std::string& name, std::vector<std::pair<double, double>> knots) {
        def.tables.push_back({name, std::move(knots)});
    }
};

} // namespace

const std::vector<std::string>& required_world_parameters() { return kRequiredParams; }

std::vector<std::pair<double, double>> default_nonco2_forcing() {
    return {{2015.0, 0.30}, {2050.0, 0.65}, {2100.0, 1.00}};
}

std::vector<std::pair<double, double>> load_forcing_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open forcing series: " + path);
    std::string line;
    if (!std::getline(in, line) || sdl::trim(line) != "year,forcing_wm2") {
        throw ParseError(path + ": expected header 'year,forcing_wm2'");
    }
    std::vector<std::pair<double, double>> knots;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (sdl::trim(line).empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'year,value'");
        }
        knots.emplace_back(sdl::parse_double(line.substr(0, comma)),
                           sdl::parse_double(line.substr(comma + 1)));
    }
    if (knots.size() < 2) throw ParseError(path + ": forcing series needs at least 2 rows");
    return knots;
}

ModelDefinition assemble_world_model(const ParamMap& params,
                                     const std::vector<std::pair<double, double>>& nonco2_forcing) {
    for (const auto& name : kRequiredParams) {
        if (!params.count(name)) {
            throw MissingParameterError("assemble_world_model: missing parameter '" + name + "'");
        }
    }

    Builder b;
    for (const auto& name : kRequiredParams) b.param(name, params.at(name));

    // --- tables ----------------------------------------------------------
    b.table("tfr_time", {{2015, 2.45}, {2030, 2.25}, {2050, 2.05}, {2070, 1.90}, {2100, 1.75}});
    b.table("mort_improve_time", {{2015, 1.0}, {2050, 0.85}, {2100, 0.70}});
    b.table("le_time", {{2015, 71.5}, {2050, 74.5}, {2100, 77.0}});
    b.table("le_income", {{2, -8}, {8, -3}, {14, 0}, {30, 3}, {60, 6}, {150, 9}});
    b.table("enroll_income", {{2, 0.40}, {8, 0.62}, {14, 0.72}, {30, 0.85}, {60, 0.92}, {150, 0.97}});
    b.table("tfp_growth_time", {{2015, 0.016}, {2050, 0.012}, {2100, 0.008}});
    b.table("damage_frac", {{0, 0.0}, {1, 0.015}, {2, 0.045}, {3, 0.090}, {4, 0.160}, {6, 0.300}});
    b.table("energy_intensity_time", {{2015, 5.43}, {2030, 4.30}, {2050, 3.00}, {2100, 1.70}});
    b.table("fossil_cost_curve", {{0.05, 3.5}, {0.3, 1.8}, {0.6, 1.2}, {1.0, 1.0}, {1.6, 0.9}});
    b.table("discovery_time", {{2015, 1.0}, {2050, 1.25}, {2100, 1.5}});
    b.table("ccs_time", {{2015, 0.0}, {2030, 0.03}, {2050, 0.08}, {2100, 0.15}});
    b.table("income_diet", {{2, 0.80}, {8, 0.95}, {14, 1.0}, {30, 1.10}, {60, 1.18}, {150, 1.25}});
    b.table("fert_response", {{0, 0.60}, {40, 0.85}, {80, 1.0}, {120, 1.08}, {200, 1.15}});
    b.table("fert_intensity_time", {{2015, 82}, {2050, 95}, {2100, 100}});
    b.table("yield_tech_time", {{2015, 1.0}, {2050, 1.25}, {2100, 1.5}});
    b.table("climate_yield", {{0, 1.02}, {1, 1.0}, {2, 0.95}, {3, 0.88}, {4, 0.80}, {6, 0.65}});
    b.table("water_yield", {{0, 1.0}, {0.4, 0.98}, {0.7, 0.93}, {1.0, 0.85}, {1.5, 0.75}});
    b.table("water_efficiency_time", {{2015, 1.0}, {2050, 0.85}, {2100, 0.70}});
    b.table("risk_temp", {{0, 0.0}, {1, 0.002}, {2, 0.006}, {3, 0.012}, {4, 0.020}});
    b.table("cap_forest", {{2.0, 0.45}, {3.0, 0.62}, {4.0, 0.75}, {4.5, 0.82}, {5.5, 0.90}});
    b.table("cap_climate", {{0, 1.0}, {1, 0.97}, {2, 0.92}, {3, 0.85}, {4, 0.76}, {6, 0.60}});
    b.table("nonco2_forcing", nonco2_forcing);

    // --- population and education ---------------------------------------
    double frac_sum = 0.0;
    for (double f : kAgeFraction) frac_sum += f;

    std::string sum_pop, sum_deaths, sum_women, sum_adult, sum_working;
    for (const char* sex : {"f", "m"}) {
        const bool female = sex[0] == 'f';
        const double sex_share = female ? kFemaleShare : 1.0 - kFemaleShare;
        const double mort_mult = female ? kFemaleMortalityMult : kMaleMortalityMult;
        for (int c = 0; c < kCohorts; ++c) {
            const std::string name = std::string("pop_") + sex + "_" + std::to_string(c);
            b.stock(name,
                    "population.initial_total * " + num(kAgeFraction[c] / frac_sum * sex_share),
                    "billion persons");
            if (c + 1 < kCohorts) {
                b.flow("mat_" + name, name, std::string("pop_") + sex + "_" + std::to_string(c + 1),
                       name + " / 5");
            }
            b.flow("deaths_" + name, name, "",
                   name + " * " + num(kBaseMortality[c] * mort_mult) +
                       " * mortality.scale * mortality_factor");
            sum_pop += (sum_pop.empty() ? "" : " + ") + name;
            sum_deaths += (sum_deaths.empty() ? "" : " + ") + ("deaths_" + name);
            if (female && c >= 3 && c <= 9) sum_women += (sum_women.empty() ? "" : " + ") + name;
            if (c >= 4) sum_adult += (sum_adult.empty() ? "" : " + ") + name;
            if (c >= 4 && c <= 12) sum_working += (sum_working.empty() ? "" : " + ") + name;
        }
    }
    b.aux("mortality_factor",
          "1 - mortality.improvement_scale * (1 - mort_improve_time(time))");
    b.aux("population", sum_pop, "billion persons");
    b.aux("total_deaths", sum_deaths, "billion persons/yr");
    b.aux("women_childbearing", sum_women, "billion persons");
    b.aux("adult_population", sum_adult, "billion persons");
    b.aux("working_age_population", sum_working, "billion persons");
    b.aux("births_total", "tfr_time(time) * fertility.scale * women_childbearing / 35",
          "billion persons/yr");
    b.flow("births_f", "", "pop_f_0", "births_total * population.female_birth_fraction");
    b.flow("births_m", "", "pop_m_0", "births_total * (1 - population.female_birth_fraction)");
    b.aux("crude_death_rate", "total_deaths / population", "1/yr");

    // Graduates stocks per level and sex; tallies alongside the cohort grid.
    const double adult_frac = [] {
        double s = 0.0;
        for (int c = 4; c < kCohorts; ++c) s += kAgeFraction[c];
        return s;
    }() / frac_sum;
    struct Level { const char* name; double attainment0; };
    for (const Level lvl : {Level{"primary", 0.83}, Level{"secondary", 0.62}, Level{"tertiary", 0.15}}) {
        for (const char* sex : {"f", "m"}) {
            const double share = sex[0] == 'f' ? kFemaleShare : 1.0 - kFemaleShare;
            const std::string name = std::string("edu_") + lvl.name + "_" + sex;
            b.stock(name,
                    "population.initial_total * " + num(adult_frac * share * lvl.attainment0),
                    "billion persons");
            const std::string entering = std::string("pop_") + sex + "_" +
                                         (lvl.name == std::string("primary") ? "2"
                                          : lvl.name == std::string("secondary") ? "3" : "4");
            b.flow("grads_" + name, "", name,
                   "(" + entering + " / 5) * enroll_" + lvl.name);
            b.flow("attrition_" + name, name, "", name + " * crude_death_rate");
        }
    }
    b.aux("enroll_secondary",
          "min(0.98, enroll_income(gwp_per_capita) * education.enrollment_scale)");
    b.aux("enroll_primary", "min(0.99, enroll_secondary + 0.2)");
    b.aux("enroll_tertiary", "min(0.85, enroll_secondary * 0.45)");
    b.aux("education_access", "(edu_secondary_f + edu_secondary_m) / adult_population", "fraction");
    b.aux("no_education_ratio",
          "max(0, 1 - (edu_primary_f + edu_primary_m) / adult_population)", "fraction");
    b.aux("life_expectancy",
          "(le_time(time) + le_income(gwp_per_capita)) * (1.1 - 0.1 * mortality.scale)", "years");
    b.aux("labor_force",
          "working_age_population * labor.participation"
          " * (1 + labor.education_boost * (education_access - 0.6))",
          "billion persons");

    // --- economy ---------------------------------------------------------
    b.stock("tfp", "tfp.initial");
    b.flow("tfp_growth", "", "tfp", "tfp * tfp_growth_time(time) * tfp.growth_scale");
    b.stock("k_other", "300", "trillion USD");
    b.stock("k_energy", "20", "trillion USD");
    b.aux("climate_damage", "1 - damage.scale * damage_frac(temperature_anomaly)");
    b.aux("gwp",
          "tfp * climate_damage * (k_other ^ economy.alpha)"
          " * (labor_force ^ (1 - economy.alpha))",
          "trillion USD/yr");
    b.aux("gwp_per_capita", "gwp / population", "thousand USD/person/yr");
    b.aux("investment", "economy.savings_rate * gwp");
    b.flow("inv_other", "", "k_other", "investment * (1 - economy.energy_capital_share)");
    b.flow("dep_other", "k_other", "", "k_other * economy.depreciation");
    b.flow("inv_energy", "", "k_energy", "investment * economy.energy_capital_share");
    b.flow("dep_energy", "k_energy", "", "k_energy * economy.depreciation");

    // --- energy ----------------------------------------------------------
    b.aux("energy_intensity", "energy_intensity_time(time) * energy.intensity_scale", "EJ/trillion USD");
    b.aux("energy_demand", "energy_intensity * gwp", "EJ/yr");
    b.aux("energy_supply_capacity", "energy.capacity0 * sqrt(k_energy / 20)", "EJ/yr");
    b.aux("energy_production_total", "min(energy_demand, energy_supply_capacity)", "EJ/yr");

    b.stock("res_coal", num(kCoalRes0), "EJ");
    b.stock("res_oil", num(kOilRes0), "EJ");
    b.stock("res_gas", num(kGasRes0), "EJ");
    b.stock("cum_solar", num(kSolarCum0), "EJ");
    b.stock("cum_wind", num(kWindCum0), "EJ");
    b.stock("cum_biomass", num(kBiomassCum0), "EJ");

    auto fossil_cost = [&](const std::string& src, const std::string& cost_param, double res0) {
        b.aux("cost_" + src,
              cost_param + " * fossil_cost_curve((res_" + src + " / " + num(res0) +
                  ") * discovery_time(time) * energy.fossil_discovery_scale)");
    };
    fossil_cost("coal", "energy.coal_cost", kCoalRes0);
    fossil_cost("oil", "energy.oil_cost", kOilRes0);
    fossil_cost("gas", "energy.gas_cost", kGasRes0);
    auto renewable_cost = [&](const std::string& src, const std::string& cost_param, double cum0) {
        b.aux("cost_" + src,
              "max(energy.cost_floor, " + cost_param + " * (cum_" + src + " / " + num(cum0) +
                  ") ^ (0 - energy.renewable_learning))");
    };
    renewable_cost("solar", "energy.solar_cost0", kSolarCum0);
    renewable_cost("wind", "energy.wind_cost0", kWindCum0);
    renewable_cost("biomass", "energy.biomass_cost0", kBiomassCum0);

    const std::vector<std::string> sources = {"coal", "oil", "gas", "solar", "wind", "biomass"};
    std::string denom;
    for (const auto& s : sources) {
        b.aux("weight_" + s, "exp(0 - energy.logit_gamma * cost_" + s + ")");
        denom += (denom.empty() ? "" : " + ") + ("weight_" + s);
    }
    b.aux("share_denom", denom);
    // Actual market shares track the cost-optimal logit shares with fleet
    // turnover inertia; the share stocks sum to one by construction.
    const std::vector<std::string> cost_params = {"energy.coal_cost",    "energy.oil_cost",
                                                  "energy.gas_cost",     "energy.solar_cost0",
                                                  "energy.wind_cost0",   "energy.biomass_cost0"};
    std::string init_denom;
    for (const auto& cp : cost_params) {
        init_denom += (init_denom.empty() ? "" : " + ") +
                      ("exp(0 - energy.logit_gamma * " + cp + ")");
    }
    for (size_t i = 0; i < sources.size(); ++i) {
        const std::string& s = sources[i];
        b.aux("target_share_" + s, "weight_" + s + " / share_denom", "fraction");
        b.stock("share_" + s,
                "exp(0 - energy.logit_gamma * " + cost_params[i] + ") / (" + init_denom + ")",
                "fraction");
        b.flow("share_adj_" + s, "", "share_" + s,
               "(target_share_" + s + " - share_" + s + ") * energy.share_adjust");
        b.aux("energy_production_" + s, "share_" + s + " * energy_production_total", "EJ/yr");
    }
    for (const auto& s : {"coal", "oil", "gas"}) {
        b.flow(std::string("depletion_") + s, std::string("res_") + s, "",
               std::string("min(energy_production_") + s + ", res_" + s + " * 0.2)");
    }
    for (const auto& s : {"solar", "wind", "biomass"}) {
        b.flow(std::string("learning_") + s, "", std::string("cum_") + s,
               std::string("energy_production_") + s);
    }
    b.aux("fossil_energy_production",
          "energy_production_coal + energy_production_oil + energy_production_gas", "EJ/yr");
    b.aux("renewable_energy_production",
          "energy_production_solar + energy_production_wind + energy_production_biomass", "EJ/yr");
    b.aux("renewable_share", "renewable_energy_production / max(energy_production_total, 1)",
          "fraction");
    b.aux("ccs_fraction", "min(0.9, ccs_time(time) * energy.ccs_scale)", "fraction");
    b.aux("gross_energy_emissions",
          "energy_production_coal * " + num(kCoalCI) + " + energy_production_oil * " + num(kOilCI) +
              " + energy_production_gas * " + num(kGasCI),
          "GtC/yr");
    b.aux("ccs_removal", "gross_energy_emissions * ccs_fraction", "GtC/yr");
    b.aux("energy_emissions", "gross_energy_emissions - ccs_removal", "GtC/yr");

    // --- land ------------------------------------------------------------
    b.stock("arable_land", num(kArable0), "billion ha");
    b.stock("permanent_crops", num(kPermanent0), "billion ha");
    b.stock("pasture_land", num(kPasture0), "billion ha");
    b.stock("forest_land", num(kForest0), "billion ha");
    b.stock("urban_land", num(kUrban0), "billion ha");
    b.stock("other_land", num(kLandTotal - kArable0 - kPermanent0 - kPasture0 - kForest0 - kUrban0),
            "billion ha");

    b.aux("yield_tech_factor", "1 + (yield_tech_time(time) - 1) * yield.tech_scale");
    b.aux("fertilizer_per_area", "fert_intensity_time(time) * fertilizer.intensity_scale", "Mt/Bha");
    b.aux("fertilizer_use", "fertilizer_per_area * arable_land", "Mt/yr");
    b.aux("crop_yield",
          "3.4 * yield.base * yield_tech_factor * fert_response(fertilizer_per_area)"
          " * (1 - yield.climate_sensitivity * (1 - climate_yield(temperature_anomaly)))"
          " * water_yield(water_scarcity)",
          "t/ha/yr");
    b.aux("needed_arable",
          "food_crop_demand_total / ((1 - food.waste_fraction) * crop_yield * " + num(kCropEnergy) + ")",
          "billion ha");
    b.aux("needed_pasture",
          "population * pasture_meat_demand_pc * 365 / 1000000"
          " / ((1 - food.waste_fraction) * " + num(kPastureYield0) + " * food.pasture_yield)",
          "billion ha");
    b.flow("forest_to_arable", "forest_land", "arable_land",
           "max(0, needed_arable - arable_land) * land.conversion_rate * 0.7");
    b.flow("other_to_arable", "other_land", "arable_land",
           "max(0, needed_arable - arable_land) * land.conversion_rate * 0.3");
    b.flow("arable_abandonment", "arable_land", "other_land",
           "max(0, arable_land - needed_arable) * land.conversion_rate");
    b.flow("forest_to_pasture", "forest_land", "pasture_land",
           "max(0, needed_pasture - pasture_land) * land.conversion_rate * 0.5");
    b.flow("other_to_pasture", "other_land", "pasture_land",
           "max(0, needed_pasture - pasture_land) * land.conversion_rate * 0.5");
    b.flow("pasture_abandonment", "pasture_land", "other_land",
           "max(0, pasture_land - needed_pasture) * land.conversion_rate");
    b.flow("urbanization", "other_land", "urban_land",
           "max(0, land.urban_per_capita * population - urban_land) * 0.1");
    b.flow("reforestation", "other_land", "forest_land",
           "min(land.reforestation_rate, other_land * 0.01)");
    b.aux("cropland_area", "arable_land + permanent_crops", "billion ha");
    b.aux("agricultural_land_area", "cropland_area + pasture_land", "billion ha");
    b.aux("land_total",
          "arable_land + permanent_crops + pasture_land + forest_land + urban_land + other_land",
          "billion ha");
    b.aux("deforestation", "forest_to_arable + forest_to_pasture", "billion ha/yr");
    b.aux("land_emissions",
          "(deforestation - reforestation) * land.carbon_density"
          " + arable_land * land.agri_emission_intensity",
          "GtC/yr");

    // --- food and diet ---------------------------------------------------
    b.stock("diet_adopter_share", "diet.adopter0", "fraction");
    b.flow("diet_adoption", "", "diet_adopter_share",
           "diet.contact_rate * diet_adopter_share * (1 - diet_adopter_share)"
           " + risk_temp(temperature_anomaly) * diet.risk_scale * (1 - diet_adopter_share)");
    b.aux("income_factor", "1 + (income_diet(gwp_per_capita) - 1) * food.income_effect_scale");
    b.aux("meat_factor", "1 - diet_adopter_share * diet.meat_reduction");
    b.aux("crop_meat_demand_pc",
          "food.crop_meat_kcal * income_factor * food.animal_scale * meat_factor", "kcal/p/day");
    b.aux("pasture_meat_demand_pc",
          "food.pasture_meat_kcal * income_factor * food.animal_scale * meat_factor", "kcal/p/day");
    b.aux("dairy_demand_pc",
          "food.dairy_kcal * income_factor * food.animal_scale * meat_factor", "kcal/p/day");
    b.aux("plant_demand_pc",
          "food.plant_kcal * (1 + 0.15 * (income_factor - 1))"
          " + 0.8 * diet_adopter_share * diet.meat_reduction * food.animal_scale * income_factor"
          " * (food.crop_meat_kcal + food.pasture_meat_kcal + food.dairy_kcal)",
          "kcal/p/day");
    b.aux("food_crop_demand_total",
          "population * (plant_demand_pc + food.feed_multiplier * crop_meat_demand_pc"
          " + 1.6 * dairy_demand_pc) * 365 / 1000000",
          "Pkcal/yr");
    b.aux("crop_adequacy", "min(1, arable_land / max(needed_arable, 0.001))");
    b.aux("pasture_adequacy", "min(1, pasture_land / max(needed_pasture, 0.001))");
    b.aux("food_supply_plant", "plant_demand_pc * crop_adequacy", "kcal/p/day");
    b.aux("food_supply_crop_meat", "crop_meat_demand_pc * crop_adequacy", "kcal/p/day");
    b.aux("food_supply_dairy_eggs", "dairy_demand_pc * crop_adequacy", "kcal/p/day");
    b.aux("food_supply_pasture_meat", "pasture_meat_demand_pc * pasture_adequacy", "kcal/p/day");
    b.aux("total_food_supply",
          "food_supply_plant + food_supply_crop_meat + food_supply_dairy_eggs"
          " + food_supply_pasture_meat",
          "kcal/p/day");
    b.aux("animal_caloric_intake",
          "food_supply_crop_meat + food_supply_dairy_eggs + food_supply_pasture_meat",
          "kcal/p/day");

    // --- water -----------------------------------------------------------
    b.aux("water_efficiency", "1 - water.efficiency_scale * (1 - water_efficiency_time(time))");
    b.aux("withdrawal_agriculture", "arable_land * water.agri_intensity * water_efficiency", "km3/yr");
    b.aux("withdrawal_industry", "gwp * water.industrial_intensity * water_efficiency", "km3/yr");
    b.aux("withdrawal_domestic", "population * water.domestic_per_capita", "km3/yr");
    b.aux("water_withdrawal_total",
          "withdrawal_agriculture + withdrawal_industry + withdrawal_domestic", "km3/yr");
    b.aux("water_scarcity", "water_withdrawal_total / water.supply", "fraction");

    // --- carbon cycle ----------------------------------------------------
    b.stock("c_atmosphere", "carbon.atm0", "GtC");
    b.stock("c_biosphere", "carbon.bio0", "GtC");
    b.stock("c_ocean_0_100", "960", "GtC");
    b.stock("c_ocean_100_400", "1640", "GtC");
    b.stock("c_ocean_400_700", "1520", "GtC");
    b.stock("c_ocean_700_2000", "5020", "GtC");
    b.stock("c_ocean_2000_2800", "2205", "GtC");
    const CarbonFluxes kf = CarbonFluxes::nominal();
    b.flow("flux_atm_bio", "c_atmosphere", "c_biosphere",
           "c_atmosphere * " + num(kf.atm_to_bio) + " * carbon.uptake_scale");
    b.flow("flux_bio_atm", "c_biosphere", "c_atmosphere",
           "c_biosphere * " + num(kf.bio_to_atm) + " * carbon.uptake_scale");
    b.flow("flux_atm_ocean", "c_atmosphere", "c_ocean_0_100",
           "c_atmosphere * " + num(kf.atm_to_ocean) + " * carbon.uptake_scale");
    b.flow("flux_ocean_atm", "c_ocean_0_100", "c_atmosphere",
           "c_ocean_0_100 * " + num(kf.ocean_to_atm) + " * carbon.uptake_scale");
    const std::vector<std::string> layers = {"c_ocean_0_100", "c_ocean_100_400", "c_ocean_400_700",
                                             "c_ocean_700_2000", "c_ocean_2000_2800"};
    for (int i = 0; i < 4; ++i) {
        b.flow("flux_down_" + std::to_string(i), layers[i], layers[i + 1],
               layers[i] + " * " + num(kf.down[i]) + " * carbon.uptake_scale");
        b.flow("flux_up_" + std::to_string(i), layers[i + 1], layers[i],
               layers[i + 1] + " * " + num(kf.up[i]) + " * carbon.uptake_scale");
    }
    b.aux("co2_emissions", "gross_energy_emissions + land_emissions", "GtC/yr");
    b.flow("emissions_to_atm", "", "c_atmosphere", "co2_emissions - ccs_removal");
    b.aux("atm_co2_ppm", "c_atmosphere / 2.13", "ppm");

    // --- climate ---------------------------------------------------------
    b.aux("radiative_forcing",
          "climate.f2x * ln(atm_co2_ppm / 280) / 0.6931471805599453"
          " + nonco2_forcing(time) * forcing.nonco2_scale",
          "W/m2");
    b.stock("t_surface", "climate.t0", "degC");
    b.stock("t_deep_1", "climate.t0 * 0.55", "degC");
    b.stock("t_deep_2", "climate.t0 * 0.30", "degC");
    b.stock("t_deep_3", "climate.t0 * 0.15", "degC");
    b.stock("t_deep_4", "climate.t0 * 0.05", "degC");
    b.flow("t_surface_change", "", "t_surface",
           "(radiative_forcing - (climate.f2x / climate.sensitivity) * t_surface"
           " - 0.6 * climate.mixing_scale * (t_surface - t_deep_1)) / climate.surface_capacity");
    b.flow("t_deep_1_change", "", "t_deep_1",
           "(0.6 * climate.mixing_scale * (t_surface - t_deep_1)"
           " - 0.5 * climate.mixing_scale * (t_deep_1 - t_deep_2)) / 50");
    b.flow("t_deep_2_change", "", "t_deep_2",
           "(0.5 * climate.mixing_scale * (t_deep_1 - t_deep_2)"
           " - 0.4 * climate.mixing_scale * (t_deep_2 - t_deep_3)) / 80");
    b.flow("t_deep_3_change", "", "t_deep_3",
           "(0.4 * climate.mixing_scale * (t_deep_2 - t_deep_3)"
           " - 0.3 * climate.mixing_scale * (t_deep_3 - t_deep_4)) / 150");
    b.flow("t_deep_4_change", "", "t_deep_4",
           "0.3 * climate.mixing_scale * (t_deep_3 - t_deep_4) / 120");
    b.aux("temperature_anomaly", "t_surface", "degC");

    // --- biodiversity ----------------------------------------------------
    b.aux("species_capacity",
          "max(0, min(1, cap_forest(forest_land)"
          " * (1 - bio.climate_sensitivity * (1 - cap_climate(temperature_anomaly)))))",
          "fraction");
    b.stock("msa", "bio.msa0", "fraction");
    b.flow("msa_change", "", "msa",
           "if(species_capacity >= msa, bio.regen_rate * (species_capacity - msa),"
           " bio.extinction_rate * (species_capacity - msa))");

    b.def.outputs = {
        "population", "life_expectancy", "education_access", "no_education_ratio",
        "gwp", "gwp_per_capita",
        "energy_demand", "energy_production_coal", "energy_production_oil",
        "energy_production_gas", "energy_production_solar", "energy_production_wind",
        "energy_production_biomass", "fossil_energy_production", "renewable_share",
        "energy_intensity",
        "food_supply_plant", "food_supply_crop_meat", "food_supply_pasture_meat",
        "food_supply_dairy_eggs", "total_food_supply", "animal_caloric_intake",
        "cropland_area", "pasture_area", "forest_area", "agricultural_land_area",
        "fertilizer_use", "crop_yield", "land_total",
        "co2_emissions", "atm_co2_ppm", "radiative_forcing", "temperature_anomaly",
        "msa", "water_scarcity", "diet_adopter_share",
    };
    b.aux("pasture_area", "pasture_land", "billion ha");
    b.aux("forest_area", "forest_land", "billion ha");

    return b.def;
}

} // namespace worldsim::sectors
