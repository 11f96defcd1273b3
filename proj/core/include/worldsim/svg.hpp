#pragma once

#include <string>
#include <vector>

namespace worldsim::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static line chart; one polyline per series with a small legend.
std::string line_chart(const std::string& title, const std::vector<Series>& series,
                       int width = 800, int height = 480);

// Mean line with a +-1 sigma shaded band.
std::string envelope_chart(const std::string& title, const std::vector<double>& x,
                           const std::vector<double>& mean, const std::vector<double>& std_dev,
                           int width = 800, int height = 480);

} // namespace worldsim::svg
