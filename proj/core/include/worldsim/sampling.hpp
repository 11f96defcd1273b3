#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace worldsim {

// Uniform sampling range for one parameter.
struct ParameterRange {
    std::string name;
    double low = 0.0;
    double high = 0.0;
};

// N x P sample matrix, row-major; row i is realization i's parameter vector.
struct SampleMatrix {
    std::vector<ParameterRange> columns;
    std::uint64_t seed = 0;
    int rows = 0;
    std::vector<double> data;

    double at(int row, int col) const { return data[static_cast<size_t>(row) * columns.size() + col]; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * columns.size(); }
};

// Latin hypercube sample: per column, exactly one draw in each of the N
// equal-probability strata. Deterministic for fixed (ranges, N, seed); the
// stratum permutations depend on the seed alone, and the jitter inside
// realization i's strata depends only on (seed, i).
SampleMatrix lhs_sample(const std::vector<ParameterRange>& ranges, int n, std::uint64_t seed);

} // namespace worldsim
