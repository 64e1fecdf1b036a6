#include "crawlsim/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace crawlsim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Golden-section minimization of f on [a, b].
template <typename F>
double golden_min(F&& f, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 90 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    return std::min(f(0.5 * (a + b)), std::min(fc, fd));
}

}  // namespace

TrigPoly::TrigPoly(double period, double constant, std::vector<Harmonic> harmonics)
    : period_(period), constant_(constant), harmonics_(std::move(harmonics)) {
    if (!(period_ > 0.0) || !std::isfinite(period_))
        throw std::invalid_argument("TrigPoly: period must be positive");
    if (!std::isfinite(constant_))
        throw std::invalid_argument("TrigPoly: non-finite constant");
    for (const auto& h : harmonics_) {
        if (h.multiple < 1)
            throw std::invalid_argument("TrigPoly: harmonic multiple must be >= 1");
        if (!std::isfinite(h.amplitude) || !std::isfinite(h.phase))
            throw std::invalid_argument("TrigPoly: non-finite harmonic");
    }
}

double TrigPoly::value(double t) const {
    double s = constant_;
    for (const auto& h : harmonics_)
        s += h.amplitude * std::cos(two_pi * h.multiple * t / period_ + h.phase);
    return s;
}

double TrigPoly::derivative(double t) const {
    double s = 0.0;
    for (const auto& h : harmonics_) {
        const double w = two_pi * h.multiple / period_;
        s -= h.amplitude * w * std::sin(w * t + h.phase);
    }
    return s;
}

double TrigPoly::min_value() const {
    if (harmonics_.empty()) return constant_;
    if (harmonics_.size() == 1) return constant_ - std::abs(harmonics_[0].amplitude);

    // Scan one period finely enough to bracket every local minimum, then refine.
    const int n = 512 * static_cast<int>(harmonics_.size());
    auto f = [this](double t) { return value(t); };
    double best = f(0.0);
    double prev = f(-period_ / n);
    double cur = best;
    for (int i = 0; i < n; ++i) {
        const double next = f((i + 1) * period_ / n);
        if (cur <= prev && cur <= next) {
            const double refined = golden_min(f, (i - 1) * period_ / n, (i + 1) * period_ / n);
            best = std::min(best, refined);
        }
        best = std::min(best, next);
        prev = cur;
        cur = next;
    }
    return best;
}

double TrigPoly::max_value() const {
    TrigPoly neg(period_, -constant_, harmonics_);
    for (auto& h : neg.harmonics_) h.amplitude = -h.amplitude;
    return -neg.min_value();
}

double TrigPoly::abs_bound() const {
    double s = std::abs(constant_);
    for (const auto& h : harmonics_) s += std::abs(h.amplitude);
    return s;
}

}  // namespace crawlsim
