#include "worldsim/pathway.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace worldsim {

const std::vector<std::pair<std::string, std::string>>& pathway_labels() {
    static const std::vector<std::pair<std::string, std::string>> labels = {
        {"BAU", "SSP2-4.5"},
        {"GreenRecovery", "SSP1-2.6"},
        {"FragmentedWorld", "SSP3-7.0"},
        {"Inequality", "SSP4-6.0"},
        {"FossilFueled", "SSP5-8.5"},
    };
    return labels;
}

namespace {

void validate_label(const std::string& id, const std::string& label, const std::string& origin) {
    for (const auto& [i, l] : pathway_labels()) {
        if (i == id) {
            if (l != label) {
                throw BadLabelError(origin + ": pathway '" + id + "' must carry label '" + l +
                                    "', got '" + label + "'");
            }
            return;
        }
    }
    throw BadLabelError(origin + ": unknown pathway id '" + id + "'");
}

} // namespace

PathwaySpec parse_pathway_string(const std::string& text, const std::string& origin,
                                 const ParameterRegistry& registry) {
    const sdl::Document doc = sdl::parse_string(text, origin);
    PathwaySpec spec;
    bool saw_meta = false;
    for (const auto& b : doc.blocks) {
        if (b.kind == "meta") {
            saw_meta = true;
            spec.id = b.get("id");
            spec.label = b.get("label");
            spec.forcing_series = b.get_or("forcing", "");
        } else if (b.kind == "overrides") {
            for (const auto& [name, value] : b.entries) {
                spec.overrides.emplace_back(name, sdl::parse_double(value));
            }
        } else if (b.kind == "uncertainty") {
            for (const auto& [name, value] : b.entries) {
                auto [lo, hi] = sdl::parse_range(value);
                spec.uncertainty.push_back({name, lo, hi});
            }
        } else {
            throw ParseError(origin + ": unknown section '" + b.kind + "' at line " +
                             std::to_string(b.line));
        }
    }
    if (!saw_meta) throw ParseError(origin + ": missing 'meta' section");
    validate_label(spec.id, spec.label, origin);

    for (const auto& [name, value] : spec.overrides) {
        if (!registry.has(name)) {
            throw UnknownParameterError(origin + ": override of undeclared parameter '" + name + "'");
        }
        const RegistryEntry& e = registry.entry(name);
        if (value < e.low || value > e.high) {
            throw OutOfRangeError(origin + ": override '" + name + "' = " + std::to_string(value) +
                                  " outside admissible range [" + std::to_string(e.low) + ", " +
                                  std::to_string(e.high) + "]");
        }
    }
    for (const auto& r : spec.uncertainty) {
        if (!registry.has(r.name)) {
            throw UnknownParameterError(origin + ": uncertainty range for undeclared parameter '" +
                                        r.name + "'");
        }
        const RegistryEntry& e = registry.entry(r.name);
        if (r.low > r.high || r.low < e.low || r.high > e.high) {
            throw OutOfRangeError(origin + ": uncertainty range for '" + r.name +
                                  "' invalid or outside admissible range");
        }
    }
    return spec;
}

PathwaySpec load_pathway(const std::string& path, const ParameterRegistry& registry) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open pathway file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    PathwaySpec spec = parse_pathway_string(buf.str(), path, registry);
    if (!spec.forcing_series.empty()) {
        const std::filesystem::path p(spec.forcing_series);
        if (p.is_relative()) {
            spec.forcing_series = (std::filesystem::path(path).parent_path() / p).string();
        }
    }
    return spec;
}

std::string serialize_pathway(const PathwaySpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "meta {\n  id = " << spec.id << "\n  label = " << spec.label << "\n";
    if (!spec.forcing_series.empty()) os << "  forcing = " << spec.forcing_series << "\n";
    os << "}\noverrides {\n";
    for (const auto& [name, value] : spec.overrides) {
        os << "  " << name << " = " << value << "\n";
    }
    os << "}\nuncertainty {\n";
    for (const auto& r : spec.uncertainty) {
        os << "  " << r.name << " = [" << r.low << ", " << r.high << "]\n";
    }
    os << "}\n";
    return os.str();
}

std::unordered_map<std::string, double> apply_pathway(
    std::unordered_map<std::string, double> base, const PathwaySpec& spec) {
    for (const auto& [name, value] : spec.overrides) base[name] = value;
    return base;
}

} // namespace worldsim
