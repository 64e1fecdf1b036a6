#pragma once

#include <string>
#include <vector>

namespace crawlsim {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotStyle {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    int width = 880;
    int height = 520;
    /// Long series are strided down to at most this many points.
    int max_points = 2000;
};

/// Standalone deterministic SVG line chart (axes, ticks, legend). Throws
/// std::invalid_argument when no series or an empty series is given.
std::string line_chart_svg(const std::vector<Series>& series, const PlotStyle& style);

}  // namespace crawlsim
