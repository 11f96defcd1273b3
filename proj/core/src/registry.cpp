#include "worldsim/registry.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

namespace worldsim {

ParameterRegistry ParameterRegistry::load(const std::string& path) {
    const sdl::Document doc = sdl::parse_file(path);
    ParameterRegistry reg;
    for (const auto& b : doc.blocks) {
        if (b.kind != "param") {
            throw ParseError(path + ": registry accepts only 'param' blocks, got '" + b.kind +
                             "' at line " + std::to_string(b.line));
        }
        RegistryEntry e;
        e.name = b.name;
        e.nominal = b.get_double("nominal");
        e.units = b.get_or("units", "");
        auto [lo, hi] = sdl::parse_range(b.get("range"));
        e.low = lo;
        e.high = hi;
        e.sector = b.get_or("sector", "");
        try {
            reg.add(std::move(e));
        } catch (const InputError& err) {
            throw ParseError(path + ": " + err.what());
        }
    }
    return reg;
}

void ParameterRegistry::add(RegistryEntry e) {
    if (index_.count(e.name)) {
        throw DuplicateNameError("registry: duplicate parameter '" + e.name + "'");
    }
    if (!(e.low < e.high)) {
        throw InputError("registry: parameter '" + e.name + "': range low must be < high");
    }
    if (e.nominal < e.low || e.nominal > e.high) {
        throw InputError("registry: parameter '" + e.name + "': nominal outside admissible range");
    }
    index_[e.name] = entries_.size();
    entries_.push_back(std::move(e));
}

const RegistryEntry& ParameterRegistry::entry(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw UnknownParameterError("registry has no parameter '" + name + "'");
    }
    return entries_[it->second];
}

std::unordered_map<std::string, double> ParameterRegistry::nominals() const {
    std::unordered_map<std::string, double> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out[e.name] = e.nominal;
    return out;
}

ParameterRange ParameterRegistry::admissible_range(const std::string& name) const {
    const RegistryEntry& e = entry(name);
    return {e.name, e.low, e.high};
}

} // namespace worldsim
