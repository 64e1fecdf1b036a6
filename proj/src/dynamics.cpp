#include "crawlsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "crawlsim/quadrature.hpp"

namespace crawlsim {

namespace {

double uniform_spacing(const Trajectory& traj) {
    if (traj.size() < 2) throw std::invalid_argument("trajectory has fewer than two samples");
    const double h = (traj.times.back() - traj.times.front()) / (traj.size() - 1);
    for (std::size_t j = 1; j < traj.size(); ++j) {
        const double expected = traj.times.front() + h * j;
        if (std::abs(traj.times[j] - expected) > 1e-9 * (1.0 + std::abs(expected)))
            throw std::invalid_argument("trajectory grid is not uniform");
    }
    return h;
}

}  // namespace

std::pair<Vector, Vector> full_rhs(const CrawlerModel& model, double t, const FullState& s) {
    Vector vdot = (model.actuation_load(t) - model.friction().force(t, s.v) -
                   model.configuration_stiffness() * s.x)
                      .cwiseQuotient(model.masses());
    return {s.v, std::move(vdot)};
}

std::pair<Vector, Vector> reduced_rhs(const CrawlerModel& model, double t, const ReducedState& s) {
    Vector vdot = (model.actuation_load(t) - model.friction().force(t, s.v) -
                   model.projection().transpose() * (model.shape_stiffness() * s.z))
                      .cwiseQuotient(model.masses());
    return {model.projection() * s.v, std::move(vdot)};
}

Matrix shape_operator(const CrawlerModel& model) {
    if (!model.equal_masses())
        throw PreconditionError("shape_operator: the shape reduction requires equal masses");
    return model.projection() * model.projection().transpose() * model.shape_stiffness() /
           model.mean_mass();
}

Vector shape_rhs(const CrawlerModel& model, double t, const Vector& z, const Vector& zdot,
                 const Vector& v) {
    (void)zdot;
    if (!model.equal_masses())
        throw PreconditionError("shape_rhs: the shape reduction requires equal masses");
    const int n = model.block_count();
    if (z.size() != n - 1 || v.size() != n)
        throw std::invalid_argument("shape_rhs: dimension mismatch");
    const double mbar = model.mean_mass();
    Vector psi(n - 1);
    for (int i = 0; i < n - 1; ++i)
        psi[i] = (model.friction().block(i).force(t, v[i]) -
                  model.friction().block(i + 1).force(t, v[i + 1])) /
                 mbar;
    return psi - shape_operator(model) * (z - model.gait().value(t));
}

Trajectory reconstruct(const CrawlerModel& model, const Trajectory& reduced, double x1_0) {
    if (reduced.kind != SystemKind::reduced)
        throw std::invalid_argument("reconstruct: expected a reduced trajectory");
    if (reduced.size() == 0) throw std::invalid_argument("reconstruct: empty trajectory");
    const int n = model.block_count();
    const double h = uniform_spacing(reduced);

    std::vector<double> v1(reduced.size());
    for (std::size_t j = 0; j < reduced.size(); ++j) v1[j] = reduced.states[j][n - 1];
    const std::vector<double> x1 = cumulative_simpson(v1, h);

    Trajectory full;
    full.kind = SystemKind::full;
    full.block_count = n;
    full.times = reduced.times;
    full.info = reduced.info;
    full.states.reserve(reduced.size());
    for (std::size_t j = 0; j < reduced.size(); ++j) {
        Vector y(2 * n);
        y[0] = x1_0 + x1[j];
        for (int i = 1; i < n; ++i) y[i] = y[i - 1] + reduced.states[j][i - 1];
        y.tail(n) = reduced.states[j].tail(n);
        full.states.push_back(std::move(y));
    }
    return full;
}

Matrix barycentric_offset_matrix(const CrawlerModel& model) {
    const int n = model.block_count();
    const double total = model.total_mass();
    Vector cum(n);  // cum[h] = m_1 + ... + m_{h+1}
    double s = 0.0;
    for (int h = 0; h < n; ++h) {
        s += model.masses()[h];
        cum[h] = s;
    }
    Matrix q(n, n - 1);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < n - 1; ++h) q(i, h) = cum[h] / total - (h >= i ? 1.0 : 0.0);
    return q;
}

CenterOfMass center_of_mass(const CrawlerModel& model, const Trajectory& traj) {
    if (traj.kind != SystemKind::full)
        throw std::invalid_argument("center_of_mass: expected a full trajectory");
    const int n = model.block_count();
    CenterOfMass out;
    out.Q = barycentric_offset_matrix(model);
    out.xbar.resize(traj.size());
    out.u.resize(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) {
        out.xbar[j] = model.masses().dot(traj.states[j].head(n)) / model.total_mass();
        out.u[j] = model.masses().dot(traj.states[j].tail(n)) / model.total_mass();
    }
    return out;
}

EnergyLedger energy_ledger(const CrawlerModel& model, const Trajectory& traj) {
    if (traj.kind != SystemKind::full)
        throw std::invalid_argument("energy_ledger: expected a full trajectory");
    const int n = model.block_count();
    const double h = uniform_spacing(traj);

    EnergyLedger ledger;
    const std::size_t m = traj.size();
    ledger.kinetic.resize(m);
    ledger.elastic.resize(m);
    ledger.residual.resize(m);
    std::vector<double> friction_power(m), input_power(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = traj.times[j];
        const auto x = traj.states[j].head(n);
        const auto v = traj.states[j].tail(n);
        ledger.kinetic[j] = 0.5 * v.dot(model.masses().cwiseProduct(v));
        ledger.elastic[j] = 0.5 * x.dot(model.configuration_stiffness() * x);
        friction_power[j] = model.friction().power(t, v);
        input_power[j] = model.actuation_load(t).dot(v);
    }
    ledger.friction_work = cumulative_simpson(friction_power, h);
    ledger.input_work = cumulative_simpson(input_power, h);
    ledger.initial_energy = ledger.kinetic[0] + ledger.elastic[0];
    for (std::size_t j = 0; j < m; ++j) {
        ledger.residual[j] = ledger.kinetic[j] + ledger.elastic[j] + ledger.friction_work[j] -
                             ledger.input_work[j] - ledger.initial_energy;
        ledger.max_abs_residual = std::max(ledger.max_abs_residual, std::abs(ledger.residual[j]));
    }

    double ell_sup = 0.0;
    for (int i = 0; i <= 2048; ++i)
        ell_sup = std::max(ell_sup, model.actuation_load(model.period() * i / 2048.0).norm());
    ledger.gronwall_bound = ell_sup / std::sqrt(model.masses().minCoeff());
    return ledger;
}

}  // namespace crawlsim
