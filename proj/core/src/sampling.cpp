#include "worldsim/sampling.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/rng.hpp"

#include <numeric>

namespace worldsim {

namespace {
// Key tags keep the permutation and jitter stream families disjoint.
constexpr std::uint64_t kPermTag = 0x5068;
constexpr std::uint64_t kJitterTag = 0x4a69;
} // namespace

SampleMatrix lhs_sample(const std::vector<ParameterRange>& ranges, int n, std::uint64_t seed) {
    if (n < 1) throw InputError("lhs_sample: N must be >= 1");
    for (const auto& r : ranges) {
        if (!(r.low < r.high)) {
            throw InputError("lhs_sample: range for '" + r.name + "' must have low < high");
        }
    }
    SampleMatrix m;
    m.columns = ranges;
    m.seed = seed;
    m.rows = n;
    const size_t p = ranges.size();
    m.data.assign(static_cast<size_t>(n) * p, 0.0);

    std::vector<int> perm(n);
    for (size_t j = 0; j < p; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        RngStream ps = make_stream(seed, kPermTag, j);
        for (int i = n - 1; i > 0; --i) {
            const int k = static_cast<int>(ps.next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[i], perm[k]);
        }
        const double width = (ranges[j].high - ranges[j].low) / n;
        for (int i = 0; i < n; ++i) {
            const double u = make_stream(seed, kJitterTag, static_cast<std::uint64_t>(i), j).next_double();
            m.data[static_cast<size_t>(i) * p + j] = ranges[j].low + (perm[i] + u) * width;
        }
    }
    return m;
}

} // namespace worldsim
