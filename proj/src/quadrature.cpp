#include "crawlsim/quadrature.hpp"

#include <stdexcept>

namespace crawlsim {

double simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("simpson: need at least two samples");
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    double s = 0.0;
    const std::size_t pairs = (n - 1) / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t i = 2 * p;
        s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    }
    if ((n - 1) % 2 != 0)  // trailing interval via the last parabola
        s += h / 12.0 * (-y[n - 3] + 8.0 * y[n - 2] + 5.0 * y[n - 1]);
    return s;
}

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("cumulative_simpson: need at least two samples");
    std::vector<double> out(n, 0.0);
    if (n == 2) {
        out[1] = 0.5 * h * (y[0] + y[1]);
        return out;
    }
    // Both halves of a Simpson pair use the same parabola, so even-index
    // partial sums reproduce the composite rule and cubic errors cancel.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double inc;
        if (i % 2 == 0 && i + 2 < n)
            inc = h / 12.0 * (5.0 * y[i] + 8.0 * y[i + 1] - y[i + 2]);
        else
            inc = h / 12.0 * (-y[i - 1] + 8.0 * y[i] + 5.0 * y[i + 1]);
        out[i + 1] = out[i] + inc;
    }
    return out;
}

}  // namespace crawlsim
