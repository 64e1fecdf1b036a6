#pragma once

#include <vector>

#include "crawlsim/friction.hpp"
#include "crawlsim/trig_poly.hpp"
#include "crawlsim/types.hpp"

namespace crawlsim {

/// T-periodic rest lengths L(t) of the n-1 elastic links.
struct GaitSignal {
    std::vector<TrigPoly> rest_lengths;

    int link_count() const { return static_cast<int>(rest_lengths.size()); }
    Vector value(double t) const;
    Vector derivative(double t) const;
    /// Exact upper bound for sup_t ||L(t)||_2.
    double norm_bound() const;

    friend bool operator==(const GaitSignal&, const GaitSignal&) = default;
};

/// Shape projection z = P x with rows (..., -1, +1, ...). Throws
/// std::invalid_argument for n < 2.
Matrix build_projection(int n);

/// Chain of n blocks with masses m_i, shape stiffness K acting on z = P x,
/// per-block friction and a T-periodic gait. Immutable after construction;
/// all derived matrices are precomputed here, so instances are safe to share
/// across threads.
class CrawlerModel {
public:
    CrawlerModel(Vector masses, Matrix shape_stiffness, FrictionLaw friction, GaitSignal gait,
                 double period);

    int block_count() const { return n_; }
    const Vector& masses() const { return masses_; }
    double total_mass() const { return total_mass_; }
    const Matrix& shape_stiffness() const { return stiffness_; }
    const FrictionLaw& friction() const { return friction_; }
    const GaitSignal& gait() const { return gait_; }
    double period() const { return period_; }

    const Matrix& projection() const { return projection_; }
    /// A = P^T K P (rank n-1, kernel spanned by the all-ones vector).
    const Matrix& configuration_stiffness() const { return config_stiffness_; }
    /// Numerically computed minimum eigenvalue of K.
    double min_stiffness_eigenvalue() const { return k_min_; }

    bool equal_masses(double rel_tol = 1e-12) const;
    double mean_mass() const { return masses_.mean(); }

    /// ell(t) = P^T K L(t); components sum to zero.
    Vector actuation_load(double t) const;

    friend bool operator==(const CrawlerModel& a, const CrawlerModel& b) {
        return exact_equal(a.masses_, b.masses_) && exact_equal(a.stiffness_, b.stiffness_) &&
               a.friction_ == b.friction_ && a.gait_ == b.gait_ && a.period_ == b.period_;
    }

private:
    int n_;
    Vector masses_;
    double total_mass_;
    Matrix stiffness_;
    FrictionLaw friction_;
    GaitSignal gait_;
    double period_;

    Matrix projection_;        // P, (n-1) x n
    Matrix config_stiffness_;  // P^T K P
    Matrix proj_stiffness_;    // P^T K
    double k_min_;
};

Matrix assemble_configuration_stiffness(const CrawlerModel& model);
Vector actuation_load(const CrawlerModel& model, double t);

/// E(t, x) = 0.5 <K (Px - L(t)), Px - L(t)> >= 0.
double elastic_energy(const CrawlerModel& model, double t, const Vector& x);

/// Rectangular grid over [0, T] x [v_min, v_max] used for the divided-
/// difference part of the monotonicity estimate.
struct SamplingGrid {
    int time_samples = 65;
    double v_min = -100.0;
    double v_max = 100.0;
    int velocity_samples = 129;
};

struct AssumptionReport {
    bool a3_holds = false;
    /// Conservative estimate of the strong-monotonicity constant; 0 means the
    /// strong form fails and only the weak dissipativity <F(t,v),v> >= 0 may hold.
    double monotonicity_constant = 0.0;
    bool a4_star_holds = false;
    double lipschitz_constant = 0.0;

    bool stiff_body_holds = false;
    bool equal_masses = false;
    bool identical_friction = false;
    double min_stiffness_eigenvalue = 0.0;
    /// 4 k (1 - cos(pi/(n-1))) with the numerically computed k.
    double stiff_body_bound = 0.0;

    std::vector<Witness> witnesses;
};

/// Checks A3, A4/A4*, the Lipschitz constant and the stiff-body condition.
/// Closed forms are used where the family admits them; the grid only sharpens
/// the divided-difference estimate and locates witnesses. Throws
/// std::invalid_argument on an empty grid.
AssumptionReport validate_assumptions(const CrawlerModel& model, const SamplingGrid& grid);

}  // namespace crawlsim
