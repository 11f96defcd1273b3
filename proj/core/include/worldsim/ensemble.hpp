#pragma once

#include "worldsim/model.hpp"
#include "worldsim/morris.hpp"
#include "worldsim/pathway.hpp"
#include "worldsim/registry.hpp"
#include "worldsim/sampling.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace worldsim {

// Outcome of one pathway ensemble: per-variable, per-year envelopes plus the
// full per-realization values the scoring layer draws from.
struct EnsembleResult {
    std::string pathway_id;
    TimeGrid grid;
    std::vector<std::string> variables;
    std::vector<ParameterRange> sampled;
    std::uint64_t seed = 0;
    int realizations = 0;
    // Realization-major: values[(r * V + v) * T + t]. Each realization writes
    // its own slice, so worker count never changes the stored bytes.
    std::vector<double> values;
    std::vector<double> mean;     // [variable][grid point]
    std::vector<double> std_dev;  // sample std, N-1 denominator

    int var_index(const std::string& name) const;  // throws MissingVariableError
    double value(int realization, int var, int point) const;
    double mean_at(const std::string& name, double year) const;
    double std_at(const std::string& name, double year) const;
};

// Runs N realizations of the compiled model. `parameters` carries the full
// nominal-plus-pathway parameter set; realization i additionally applies row i
// of the LHS sample over `uncertainty`. Identical results for any worker
// count. Throws RealizationFailure on the first non-finite realization,
// naming its index and sampled values.
EnsembleResult run_ensemble(const ExecutableModel& model, const std::string& pathway_id,
                            const std::unordered_map<std::string, double>& parameters,
                            const std::vector<ParameterRange>& uncertainty, const TimeGrid& grid,
                            int n, std::uint64_t seed, int workers);

// Morris screening of the candidate ranges (the pathway's uncertainty set, or
// every registry range when the pathway declares none) against the year-2100
// value of `objective_variable`; keeps the k largest mu-star parameters.
std::vector<ParameterRange> screen_then_range(const ExecutableModel& model,
                                              const ParameterRegistry& registry,
                                              const PathwaySpec& spec,
                                              const std::string& objective_variable, int k, int r,
                                              int p, std::uint64_t seed);

// Envelope CSV: `pathway,variable,year,mean,std`, one row per variable x year.
void write_envelope_csv(const EnsembleResult& result, std::ostream& out);

// Indicator-values CSV: `pathway,realization,variable,year,value`, restricted
// to the given variables at the given years (2015 is kept alongside the
// milestones so scoring can resolve each realization's base value).
void write_indicator_csv(const EnsembleResult& result, const std::vector<std::string>& variables,
                         const std::vector<double>& years, std::ostream& out);

// Per-realization indicator values reloaded from the indicator CSV.
struct IndicatorSamples {
    std::string pathway_id;
    int realizations = 0;
    std::map<std::pair<std::string, double>, std::vector<double>> series;

    // Throws MissingVariableError / MissingMilestoneError.
    const std::vector<double>& at(const std::string& variable, double year) const;
    bool has(const std::string& variable, double year) const;
};

IndicatorSamples load_indicator_csv(const std::string& path);
IndicatorSamples extract_indicator_samples(const EnsembleResult& result,
                                           const std::vector<std::string>& variables,
                                           const std::vector<double>& years);

// Mean/std envelopes reloaded from the envelope CSV.
struct EnvelopeTable {
    std::string pathway_id;
    std::map<std::pair<std::string, double>, std::pair<double, double>> stats;

    double mean_at(const std::string& variable, double year) const;
    double std_at(const std::string& variable, double year) const;
};

EnvelopeTable load_envelope_csv(const std::string& path);
EnvelopeTable extract_envelope(const EnsembleResult& result);

} // namespace worldsim
