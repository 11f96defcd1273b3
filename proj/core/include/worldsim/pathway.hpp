#pragma once

#include "worldsim/registry.hpp"
#include "worldsim/sampling.hpp"

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace worldsim {

// One SSP-RCP benchmark pathway: nominal parameter overrides plus the
// uncertainty ranges explored around them.
struct PathwaySpec {
    std::string id;     // BAU | GreenRecovery | FragmentedWorld | Inequality | FossilFueled
    std::string label;  // fixed mapping, e.g. BAU -> SSP2-4.5
    std::string forcing_series;  // path to the exogenous non-CO2 forcing CSV
    std::vector<std::pair<std::string, double>> overrides;
    std::vector<ParameterRange> uncertainty;
};

// The five recognized pathway ids and their fixed SSP-RCP labels.
const std::vector<std::pair<std::string, std::string>>& pathway_labels();

// Loads and fully validates a pathway file against the registry. Throws
// ParseError, UnknownParameterError, OutOfRangeError, BadLabelError.
PathwaySpec load_pathway(const std::string& path, const ParameterRegistry& registry);

// Round-trip serialization in the same structured text format.
std::string serialize_pathway(const PathwaySpec& spec);
PathwaySpec parse_pathway_string(const std::string& text, const std::string& origin,
                                 const ParameterRegistry& registry);

// Overridden names take the spec's values; all others pass through. Idempotent.
std::unordered_map<std::string, double> apply_pathway(
    std::unordered_map<std::string, double> base, const PathwaySpec& spec);

} // namespace worldsim
