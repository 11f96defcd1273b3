#pragma once

#include "worldsim/sampling.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace worldsim {

struct MorrisResult {
    struct Entry {
        std::string name;
        double mu_star = 0.0;  // mean absolute elementary effect
        double sigma = 0.0;    // sample std of elementary effects
    };
    std::vector<Entry> parameters;
    int trajectories = 0;
    int levels = 0;

    // Parameter indices sorted by descending mu_star (ties by index).
    std::vector<int> ranking() const;
};

using MorrisObjective = std::function<double(std::span<const double>)>;

// Morris one-at-a-time screening with r trajectories on a p-level grid,
// step delta = p / (2(p-1)) in unit-hypercube coordinates. The objective
// receives parameter vectors scaled into the given ranges.
MorrisResult morris_screen(const MorrisObjective& objective,
                           const std::vector<ParameterRange>& ranges, int r, int p,
                           std::uint64_t seed);

} // namespace worldsim
