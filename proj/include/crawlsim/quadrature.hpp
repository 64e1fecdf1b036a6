#pragma once

#include <span>
#include <vector>

namespace crawlsim {

/// Composite Simpson integral of uniformly spaced samples (spacing h). An odd
/// interval count is closed with the parabola through the last three points.
double simpson(std::span<const double> y, double h);

/// Running integral on a uniform grid: each sub-interval is integrated with
/// the parabola through its enclosing three-point stencil, so even-index
/// partial sums coincide with composite Simpson.
std::vector<double> cumulative_simpson(std::span<const double> y, double h);

}  // namespace crawlsim
