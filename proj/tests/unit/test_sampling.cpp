#include "worldsim/errors.hpp"
#include "worldsim/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace worldsim;

namespace {

const std::vector<ParameterRange> kRanges = {
    {"a", 0.0, 1.0},
    {"b", -2.0, 2.0},
    {"c", 100.0, 300.0},
};

// Counts how many draws of one column fall in each of n equal strata.
std::vector<int> stratum_counts(const SampleMatrix& m, int col, int n) {
    const auto& r = m.columns[col];
    std::vector<int> counts(n, 0);
    for (int i = 0; i < m.rows; ++i) {
        const double u = (m.at(i, col) - r.low) / (r.high - r.low);
        int s = static_cast<int>(u * n);
        s = std::clamp(s, 0, n - 1);
        ++counts[s];
    }
    return counts;
}

} // namespace

TEST_CASE("lhs fills every stratum of every column exactly once") {
    for (const int n : {4, 100}) {
        const SampleMatrix m = lhs_sample(kRanges, n, 7);
        CHECK(m.rows == n);
        CHECK(m.data.size() == static_cast<size_t>(n) * kRanges.size());
        for (size_t col = 0; col < kRanges.size(); ++col) {
            const auto counts = stratum_counts(m, static_cast<int>(col), n);
            for (const int c : counts) CHECK(c == 1);
        }
    }
}

TEST_CASE("lhs draws respect the parameter bounds") {
    const SampleMatrix m = lhs_sample(kRanges, 50, 11);
    for (int i = 0; i < m.rows; ++i) {
        for (size_t col = 0; col < kRanges.size(); ++col) {
            CHECK(m.at(i, static_cast<int>(col)) >= kRanges[col].low);
            CHECK(m.at(i, static_cast<int>(col)) < kRanges[col].high);
        }
    }
}

TEST_CASE("lhs is deterministic in the seed") {
    const SampleMatrix a = lhs_sample(kRanges, 64, 42);
    const SampleMatrix b = lhs_sample(kRanges, 64, 42);
    CHECK(a.data == b.data);
    const SampleMatrix c = lhs_sample(kRanges, 64, 43);
    CHECK(a.data != c.data);
}

TEST_CASE("lhs columns use independent permutations") {
    // With one shared permutation all columns would be comonotone; verify at
    // least one rank disagreement between columns.
    const SampleMatrix m = lhs_sample(kRanges, 32, 5);
    bool differs = false;
    for (int i = 0; i < m.rows && !differs; ++i) {
        for (int j = 0; j < m.rows; ++j) {
            if ((m.at(i, 0) < m.at(j, 0)) != (m.at(i, 1) < m.at(j, 1))) {
                differs = true;
                break;
            }
        }
    }
    CHECK(differs);
}

TEST_CASE("lhs sample mean converges to the range midpoint") {
    const SampleMatrix m = lhs_sample(kRanges, 1000, 3);
    for (size_t col = 0; col < kRanges.size(); ++col) {
        double sum = 0.0;
        for (int i = 0; i < m.rows; ++i) sum += m.at(i, static_cast<int>(col));
        const double mid = 0.5 * (kRanges[col].low + kRanges[col].high);
        const double width = kRanges[col].high - kRanges[col].low;
        // Stratification pins the mean to the midpoint up to the jitter term.
        CHECK(std::abs(sum / m.rows - mid) < 0.02 * width);
    }
}

TEST_CASE("lhs input validation") {
    CHECK_THROWS_AS(lhs_sample(kRanges, 0, 1), InputError);
    CHECK_THROWS_AS(lhs_sample({{"bad", 1.0, 0.0}}, 10, 1), InputError);
    // A degenerate range (low == high) carries no uncertainty and is rejected.
    CHECK_THROWS_AS(lhs_sample({{"flat", 2.0, 2.0}}, 10, 1), InputError);
    // Zero parameters is a valid edge case: an N x 0 matrix.
    const SampleMatrix empty = lhs_sample({}, 5, 1);
    CHECK(empty.rows == 5);
    CHECK(empty.data.empty());
}
