#pragma once

#include <vector>

namespace crawlsim {

/// One cosine term A*cos(2*pi*m*t/T + phi). Storing the integer multiple m
/// instead of the raw angular frequency makes every signal T-periodic by
/// construction.
struct Harmonic {
    int multiple = 1;
    double amplitude = 0.0;
    double phase = 0.0;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Finite trigonometric polynomial c0 + sum_j A_j cos(2*pi*m_j*t/T + phi_j)
/// with fundamental period T. Used for gait rest lengths and time-dependent
/// viscous coefficients.
class TrigPoly {
public:
    TrigPoly() = default;
    TrigPoly(double period, double constant, std::vector<Harmonic> harmonics = {});

    double period() const { return period_; }
    double constant() const { return constant_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    bool is_constant() const { return harmonics_.empty(); }

    double value(double t) const;
    double derivative(double t) const;

    /// Exact minimum/maximum over one period for constant and single-harmonic
    /// signals; dense scan plus golden-section refinement otherwise.
    double min_value() const;
    double max_value() const;

    /// |c0| + sum |A_j|, an exact upper bound for sup_t |value(t)|.
    double abs_bound() const;

    friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

private:
    double period_ = 1.0;
    double constant_ = 0.0;
    std::vector<Harmonic> harmonics_;
};

}  // namespace crawlsim
