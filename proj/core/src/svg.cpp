#include "worldsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace worldsim::svg {

namespace {

constexpr int kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 45;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f"};

struct Frame {
    double x_lo, x_hi, y_lo, y_hi;
    int width, height;

    double px(double x) const {
        return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * (width - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return height - kMarginBottom -
               (y - y_lo) / (y_hi - y_lo) * (height - kMarginTop - kMarginBottom);
    }
};

void expand(double& lo, double& hi) {
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        const double pad = (hi - lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
}

std::string round3(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void open_svg(std::ostringstream& os, const std::string& title, const Frame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
       << f.height << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // axes with 5 ticks per side
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = f.x_lo + (f.x_hi - f.x_lo) * i / 5.0;
        const double yv = f.y_lo + (f.y_hi - f.y_lo) * i / 5.0;
        os << "<line x1=\"" << round3(f.px(xv)) << "\" y1=\"" << f.height - kMarginBottom
           << "\" x2=\"" << round3(f.px(xv)) << "\" y2=\"" << f.height - kMarginBottom + 4
           << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << round3(f.px(xv)) << "\" y=\"" << f.height - kMarginBottom + 18
           << "\" text-anchor=\"middle\">" << round3(xv) << "</text>\n"
           << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << round3(f.py(yv)) << "\" x2=\""
           << kMarginLeft << "\" y2=\"" << round3(f.py(yv)) << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << round3(f.py(yv) + 4)
           << "\" text-anchor=\"end\">" << round3(yv) << "</text>\n";
    }
    os << "</g>\n"
       << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
       << f.width - kMarginLeft - kMarginRight << "\" height=\""
       << f.height - kMarginTop - kMarginBottom << "\" fill=\"none\" stroke=\"#333\"/>\n";
}

std::string polyline(const Frame& f, const std::vector<double>& x, const std::vector<double>& y,
                     const char* color) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) os << ' ';
        os << round3(f.px(x[i])) << ',' << round3(f.py(y[i]));
    }
    os << "\"/>\n";
    return os.str();
}

} // namespace

std::string line_chart(const std::string& title, const std::vector<Series>& series, int width,
                       int height) {
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            width, height};
    for (const auto& s : series) {
        for (double v : s.x) {
            f.x_lo = std::min(f.x_lo, v);
            f.x_hi = std::max(f.x_hi, v);
        }
        for (double v : s.y) {
            f.y_lo = std::min(f.y_lo, v);
            f.y_hi = std::max(f.y_hi, v);
        }
    }
    if (!std::isfinite(f.x_lo)) f = {0, 1, 0, 1, width, height};
    expand(f.x_lo, f.x_hi);
    expand(f.y_lo, f.y_hi);

    std::ostringstream os;
    open_svg(os, title, f);
    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << polyline(f, series[i].x, series[i].y, color);
        os << "<text x=\"" << width - kMarginRight - 6 << "\" y=\"" << kMarginTop + 16 + 14 * i
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
           << "\">" << series[i].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string envelope_chart(const std::string& title, const std::vector<double>& x,
                           const std::vector<double>& mean, const std::vector<double>& std_dev,
                           int width, int height) {
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            width, height};
    for (double v : x) {
        f.x_lo = std::min(f.x_lo, v);
        f.x_hi = std::max(f.x_hi, v);
    }
    for (size_t i = 0; i < mean.size(); ++i) {
        f.y_lo = std::min(f.y_lo, mean[i] - std_dev[i]);
        f.y_hi = std::max(f.y_hi, mean[i] + std_dev[i]);
    }
    if (!std::isfinite(f.x_lo)) f = {0, 1, 0, 1, width, height};
    expand(f.x_lo, f.x_hi);
    expand(f.y_lo, f.y_hi);

    std::ostringstream os;
    open_svg(os, title, f);
    os << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) os << ' ';
        os << round3(f.px(x[i])) << ',' << round3(f.py(mean[i] + std_dev[i]));
    }
    for (size_t i = x.size(); i-- > 0;) {
        os << ' ' << round3(f.px(x[i])) << ',' << round3(f.py(mean[i] - std_dev[i]));
    }
    os << "\"/>\n";
    os << polyline(f, x, mean, kPalette[0]);
    os << "</svg>\n";
    return os.str();
}

} // namespace worldsim::svg
