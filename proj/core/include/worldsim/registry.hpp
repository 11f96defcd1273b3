#pragma once

#include "worldsim/sampling.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace worldsim {

struct RegistryEntry {
    std::string name;
    double nominal = 0.0;
    std::string units;
    double low = 0.0;   // admissible range
    double high = 0.0;
    std::string sector;
};

// The calibrated parameter set of the world model: one entry per tunable,
// with nominal value and the admissible range that bounds every pathway
// override and uncertainty draw.
class ParameterRegistry {
public:
    static ParameterRegistry load(const std::string& path);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    const RegistryEntry& entry(const std::string& name) const;
    const std::vector<RegistryEntry>& entries() const { return entries_; }

    std::unordered_map<std::string, double> nominals() const;
    ParameterRange admissible_range(const std::string& name) const;

    void add(RegistryEntry e);  // used by tests building toy registries

private:
    std::vector<RegistryEntry> entries_;
    std::unordered_map<std::string, size_t> index_;
};

} // namespace worldsim
