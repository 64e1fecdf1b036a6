#include "crawlsim/friction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crawlsim {

namespace {

struct ForceEval {
    double t, v;
    double operator()(const ViscousTerm& f) const { return f.mu.value(t) * v; }
    double operator()(const LinearTerm& f) const { return f.mu * v; }
    double operator()(const SmoothDryTerm& f) const { return f.scale * std::atan(f.slope * v); }
    double operator()(const ResonanceTerm&) const {
        const double a = std::atan(v);
        return 0.25 * a * (5.0 - a);
    }
};

struct SlopeEval {
    double t, v;
    double operator()(const ViscousTerm& f) const { return f.mu.value(t); }
    double operator()(const LinearTerm& f) const { return f.mu; }
    double operator()(const SmoothDryTerm& f) const {
        const double s = f.slope * v;
        return f.scale * f.slope / (1.0 + s * s);
    }
    double operator()(const ResonanceTerm&) const {
        return (5.0 - 2.0 * std::atan(v)) / (4.0 * (1.0 + v * v));
    }
};

struct MonotonicityBound {
    double operator()(const ViscousTerm& f) const { return f.mu.min_value(); }
    double operator()(const LinearTerm& f) const { return f.mu; }
    double operator()(const SmoothDryTerm&) const { return 0.0; }
    double operator()(const ResonanceTerm&) const { return 0.0; }
};

struct LipschitzBound {
    double operator()(const ViscousTerm& f) const {
        return std::max(std::abs(f.mu.min_value()), std::abs(f.mu.max_value()));
    }
    double operator()(const LinearTerm& f) const { return std::abs(f.mu); }
    double operator()(const SmoothDryTerm& f) const { return std::abs(f.scale * f.slope); }
    double operator()(const ResonanceTerm&) const { return resonance_lipschitz_constant(); }
};

struct A4Star {
    bool operator()(const ViscousTerm& f) const { return f.mu.min_value() >= 0.0; }
    bool operator()(const LinearTerm& f) const { return f.mu >= 0.0; }
    bool operator()(const SmoothDryTerm& f) const { return f.scale * f.slope >= 0.0; }
    bool operator()(const ResonanceTerm&) const { return true; }  // 5 > pi
};

}  // namespace

double resonance_lipschitz_constant() {
    // The derivative (5 - 2 atan v) / (4 (1 + v^2)) peaks where
    // 1 + v (5 - 2 atan v) = 0; Newton from the scan-located root.
    double v = -0.2;
    for (int i = 0; i < 50; ++i) {
        const double g = 1.0 + v * (5.0 - 2.0 * std::atan(v));
        const double dg = (5.0 - 2.0 * std::atan(v)) - 2.0 * v / (1.0 + v * v);
        v -= g / dg;
    }
    return (5.0 - 2.0 * std::atan(v)) / (4.0 * (1.0 + v * v));
}

ScalarFriction::ScalarFriction(std::vector<FrictionTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("ScalarFriction: no terms");
}

double ScalarFriction::force(double t, double v) const {
    double s = 0.0;
    for (const auto& term : terms_) s += std::visit(ForceEval{t, v}, term);
    return s;
}

double ScalarFriction::dforce_dv(double t, double v) const {
    double s = 0.0;
    for (const auto& term : terms_) s += std::visit(SlopeEval{t, v}, term);
    return s;
}

double ScalarFriction::monotonicity_bound() const {
    double s = 0.0;
    for (const auto& term : terms_) s += std::visit(MonotonicityBound{}, term);
    return s;
}

double ScalarFriction::lipschitz_constant() const {
    double s = 0.0;
    for (const auto& term : terms_) s += std::visit(LipschitzBound{}, term);
    return s;
}

bool ScalarFriction::a4_star() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const FrictionTerm& term) { return std::visit(A4Star{}, term); });
}

bool ScalarFriction::is_viscous() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const FrictionTerm& term) {
        return std::holds_alternative<ViscousTerm>(term) || std::holds_alternative<LinearTerm>(term);
    });
}

bool ScalarFriction::time_independent() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const FrictionTerm& term) {
        const auto* v = std::get_if<ViscousTerm>(&term);
        return v == nullptr || v->mu.is_constant();
    });
}

double ScalarFriction::viscous_mu(double t) const {
    if (!is_viscous()) throw PreconditionError("viscous_mu: friction law is not viscous");
    double s = 0.0;
    for (const auto& term : terms_) s += std::visit(SlopeEval{t, 0.0}, term);
    return s;
}

FrictionLaw::FrictionLaw(std::vector<ScalarFriction> per_block) : per_block_(std::move(per_block)) {}

FrictionLaw::FrictionLaw(int n, ScalarFriction law) {
    if (n < 1) throw std::invalid_argument("FrictionLaw: block count must be positive");
    per_block_.assign(n, std::move(law));
}

Vector FrictionLaw::force(double t, const Vector& v) const {
    Vector out(block_count());
    for (int i = 0; i < block_count(); ++i) out[i] = per_block_[i].force(t, v[i]);
    return out;
}

double FrictionLaw::power(double t, const Vector& v) const {
    double s = 0.0;
    for (int i = 0; i < block_count(); ++i) s += per_block_[i].force(t, v[i]) * v[i];
    return s;
}

double FrictionLaw::monotonicity_bound() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& law : per_block_) m = std::min(m, law.monotonicity_bound());
    return m;
}

double FrictionLaw::lipschitz_constant() const {
    double m = 0.0;
    for (const auto& law : per_block_) m = std::max(m, law.lipschitz_constant());
    return m;
}

bool FrictionLaw::a4_star() const {
    return std::all_of(per_block_.begin(), per_block_.end(),
                       [](const ScalarFriction& f) { return f.a4_star(); });
}

bool FrictionLaw::is_viscous() const {
    return std::all_of(per_block_.begin(), per_block_.end(),
                       [](const ScalarFriction& f) { return f.is_viscous(); });
}

bool FrictionLaw::time_independent() const {
    return std::all_of(per_block_.begin(), per_block_.end(),
                       [](const ScalarFriction& f) { return f.time_independent(); });
}

bool FrictionLaw::identical_laws() const {
    return std::all_of(per_block_.begin(), per_block_.end(),
                       [this](const ScalarFriction& f) { return f == per_block_.front(); });
}

Vector FrictionLaw::viscous_mu(double t) const {
    Vector out(block_count());
    for (int i = 0; i < block_count(); ++i) out[i] = per_block_[i].viscous_mu(t);
    return out;
}

}  // namespace crawlsim
