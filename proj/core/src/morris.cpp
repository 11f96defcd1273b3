#include "worldsim/morris.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace worldsim {

std::vector<int> MorrisResult::ranking() const {
    std::vector<int> idx(parameters.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return parameters[a].mu_star > parameters[b].mu_star;
    });
    return idx;
}

namespace {

std::string describe_point(const std::vector<ParameterRange>& ranges,
                           const std::vector<double>& point) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < ranges.size(); ++i) {
        if (i) os << ", ";
        os << ranges[i].name << "=" << point[i];
    }
    os << "}";
    return os.str();
}

} // namespace

MorrisResult morris_screen(const MorrisObjective& objective,
                           const std::vector<ParameterRange>& ranges, int r, int p,
                           std::uint64_t seed) {
    if (r < 2) throw InputError("morris_screen: need r >= 2 trajectories");
    if (p < 4 || p % 2 != 0) throw InputError("morris_screen: levels p must be even and >= 4");
    const size_t np = ranges.size();
    if (np == 0) throw InputError("morris_screen: no parameters");

    const double delta = static_cast<double>(p) / (2.0 * (p - 1));
    // Base levels are restricted so that +delta stays inside [0, 1].
    const int base_levels = p / 2;

    std::vector<std::vector<double>> effects(np);
    std::vector<double> unit(np);
    std::vector<double> scaled(np);
    std::vector<int> order(np);

    auto scale = [&](const std::vector<double>& u) {
        for (size_t i = 0; i < np; ++i) {
            scaled[i] = ranges[i].low + u[i] * (ranges[i].high - ranges[i].low);
        }
    };
    auto evaluate = [&](const std::vector<double>& u) {
        scale(u);
        try {
            return objective(std::span<const double>(scaled));
        } catch (const std::exception& e) {
            throw ObjectiveFailure(std::string("objective failed at ") +
                                   describe_point(ranges, scaled) + ": " + e.what());
        }
    };

    for (int t = 0; t < r; ++t) {
        RngStream rs = make_stream(seed, 0x4d6f, static_cast<std::uint64_t>(t));
        for (size_t i = 0; i < np; ++i) {
            unit[i] = static_cast<double>(rs.next_below(base_levels)) / (p - 1);
        }
        std::iota(order.begin(), order.end(), 0);
        for (size_t i = np; i > 1; --i) {
            std::swap(order[i - 1], order[rs.next_below(i)]);
        }
        double prev = evaluate(unit);
        for (size_t k = 0; k < np; ++k) {
            const int i = order[k];
            unit[i] += delta;
            const double cur = evaluate(unit);
            effects[i].push_back((cur - prev) / delta);
            prev = cur;
        }
    }

    MorrisResult res;
    res.trajectories = r;
    res.levels = p;
    for (size_t i = 0; i < np; ++i) {
        MorrisResult::Entry e;
        e.name = ranges[i].name;
        double abs_sum = 0.0;
        double sum = 0.0;
        for (double ee : effects[i]) {
            abs_sum += std::fabs(ee);
            sum += ee;
        }
        const double n = static_cast<double>(effects[i].size());
        e.mu_star = abs_sum / n;
        const double mean = sum / n;
        double ss = 0.0;
        for (double ee : effects[i]) ss += (ee - mean) * (ee - mean);
        e.sigma = std::sqrt(ss / (n - 1.0));
        res.parameters.push_back(std::move(e));
    }
    return res;
}

} // namespace worldsim
