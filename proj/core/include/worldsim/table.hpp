#pragma once

#include "worldsim/errors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace worldsim {

// Piecewise-linear table function. Outside the knot range the end values are
// held constant, so the function is total on the reals.
class LookupTable {
public:
    LookupTable() = default;
    LookupTable(std::string name, std::vector<std::pair<double, double>> knots)
        : name_(std::move(name)) {
        if (knots.size() < 2) {
            throw InputError("table '" + name_ + "': needs at least 2 knots");
        }
        xs_.reserve(knots.size());
        ys_.reserve(knots.size());
        for (const auto& [x, y] : knots) {
            if (!xs_.empty() && x <= xs_.back()) {
                throw InputError("table '" + name_ + "': knot x values must be strictly increasing");
            }
            xs_.push_back(x);
            ys_.push_back(y);
        }
    }

    double operator()(double x) const {
        if (x <= xs_.front()) return ys_.front();
        if (x >= xs_.back()) return ys_.back();
        // Knot counts are small (< 20); linear scan beats binary search here.
        size_t i = 1;
        while (xs_[i] < x) ++i;
        const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
    }

    const std::string& name() const { return name_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::string name_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

} // namespace worldsim
