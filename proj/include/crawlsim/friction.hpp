#pragma once

#include <variant>
#include <vector>

#include "crawlsim/trig_poly.hpp"
#include "crawlsim/types.hpp"

namespace crawlsim {

// Friction laws are restricted to a closed parametric family so that the
// monotonicity and Lipschitz constants used by the certificates have exact
// (or conservatively bounded) values instead of sampled estimates.

/// f(t, v) = mu(t) * v with mu a trigonometric polynomial.
struct ViscousTerm {
    TrigPoly mu;
    friend bool operator==(const ViscousTerm&, const ViscousTerm&) = default;
};

/// f(v) = mu * v.
struct LinearTerm {
    double mu = 0.0;
    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// f(v) = scale * atan(slope * v), a smooth approximation of dry friction.
struct SmoothDryTerm {
    double scale = 1.0;
    double slope = 1.0;
    friend bool operator==(const SmoothDryTerm&, const SmoothDryTerm&) = default;
};

/// f(v) = (1/4) * atan(v) * (5 - atan(v)). Bounded, strictly but not strongly
/// monotone.
struct ResonanceTerm {
    friend bool operator==(const ResonanceTerm&, const ResonanceTerm&) = default;
};

using FrictionTerm = std::variant<ViscousTerm, LinearTerm, SmoothDryTerm, ResonanceTerm>;

/// Scalar law acting on one block: a sum of family terms.
class ScalarFriction {
public:
    ScalarFriction() : terms_{LinearTerm{0.0}} {}
    explicit ScalarFriction(FrictionTerm term) : terms_{std::move(term)} {}
    explicit ScalarFriction(std::vector<FrictionTerm> terms);

    const std::vector<FrictionTerm>& terms() const { return terms_; }

    double force(double t, double v) const;
    double dforce_dv(double t, double v) const;

    /// Global lower bound for inf_{t,v!=w} (f(t,v)-f(t,w))/(v-w).
    /// Exact for viscous/linear terms, 0 for the arctan families (their
    /// derivative vanishes at infinity).
    double monotonicity_bound() const;

    /// Global Lipschitz constant in v, uniform in t.
    double lipschitz_constant() const;

    /// Structural check of <f(t,v), v> >= 0 for all t, v.
    bool a4_star() const;

    bool is_viscous() const;        // every term viscous or linear
    bool time_independent() const;  // f(t, v) does not depend on t
    double viscous_mu(double t) const;  // requires is_viscous()

    friend bool operator==(const ScalarFriction&, const ScalarFriction&) = default;

private:
    std::vector<FrictionTerm> terms_;
};

/// Per-block friction F(t,v) = (f_1(t,v_1), ..., f_n(t,v_n)).
class FrictionLaw {
public:
    FrictionLaw() = default;
    explicit FrictionLaw(std::vector<ScalarFriction> per_block);
    /// Same scalar law on every block.
    FrictionLaw(int n, ScalarFriction law);

    int block_count() const { return static_cast<int>(per_block_.size()); }
    const ScalarFriction& block(int i) const { return per_block_.at(i); }
    const std::vector<ScalarFriction>& per_block() const { return per_block_; }

    Vector force(double t, const Vector& v) const;
    double power(double t, const Vector& v) const;  // <F(t,v), v>

    double monotonicity_bound() const;  // min over blocks
    double lipschitz_constant() const;  // max over blocks
    bool a4_star() const;
    bool is_viscous() const;
    bool time_independent() const;
    bool identical_laws() const;
    Vector viscous_mu(double t) const;

    friend bool operator==(const FrictionLaw&, const FrictionLaw&) = default;

private:
    std::vector<ScalarFriction> per_block_;
};

/// Lipschitz constant of the resonance-family law (sup of its derivative).
double resonance_lipschitz_constant();

}  // namespace crawlsim
