#pragma once

#include <utility>

#include "crawlsim/model.hpp"
#include "crawlsim/solver.hpp"
#include "crawlsim/state.hpp"

namespace crawlsim {

/// Full dynamics: xdot = v, M vdot = -F(t,v) - A x + ell(t).
std::pair<Vector, Vector> full_rhs(const CrawlerModel& model, double t, const FullState& s);

/// Reduced dynamics: zdot = P v, M vdot = -F(t,v) - P^T K z + ell(t).
std::pair<Vector, Vector> reduced_rhs(const CrawlerModel& model, double t, const ReducedState& s);

/// Second-order shape dynamics under equal masses:
/// zddot = Psi(t, v) - B (z - L(t)) with B = P P^T K / mbar and
/// Psi_i = (f_i(t, v_i) - f_{i+1}(t, v_{i+1})) / mbar. The zdot argument is
/// part of the second-order signature; the field does not depend on it.
/// Throws PreconditionError when the masses differ.
Vector shape_rhs(const CrawlerModel& model, double t, const Vector& z, const Vector& zdot,
                 const Vector& v);

/// B = P P^T K / mbar of the shape dynamics (equal masses required).
Matrix shape_operator(const CrawlerModel& model);

/// Rebuilds a full trajectory from a reduced one: x_1 integrates v_1 from
/// x1_0 (grid quadrature), x_{i+1} = x_i + z_i. project() of the result
/// reproduces the reduced samples exactly.
Trajectory reconstruct(const CrawlerModel& model, const Trajectory& reduced, double x1_0);

struct CenterOfMass {
    std::vector<double> xbar;  // (1/M) sum_i m_i x_i per sample
    std::vector<double> u;     // (1/M) sum_i m_i v_i per sample
    Matrix Q;                  // alpha = x - xbar*1 = Q z
};

/// Barycenter series of a full trajectory plus the constant matrix Q mapping
/// shape to barycentric offsets.
CenterOfMass center_of_mass(const CrawlerModel& model, const Trajectory& traj);

/// Q with alpha_i = (1/M) sum_j m_j (x_i - x_j) = (Q z)_i.
Matrix barycentric_offset_matrix(const CrawlerModel& model);

/// Energy balance along a full trajectory:
///   kinetic + elastic + friction_work - input_work = C0  (exactly, for exact
/// solutions). The residual series measures the defect of the numerical
/// trajectory plus quadrature.
struct EnergyLedger {
    std::vector<double> kinetic;        // 0.5 ||v||_M^2
    std::vector<double> elastic;        // 0.5 <A x, x>
    std::vector<double> friction_work;  // int <F(s,v), v> ds
    std::vector<double> input_work;     // int <ell(s), v> ds
    std::vector<double> residual;
    double initial_energy = 0.0;   // C0
    double gronwall_bound = 0.0;   // C^ = ||ell||_Linf / sqrt(min mass)
    double max_abs_residual = 0.0;
};

EnergyLedger energy_ledger(const CrawlerModel& model, const Trajectory& traj);

}  // namespace crawlsim
