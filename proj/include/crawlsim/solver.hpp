#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crawlsim/model.hpp"
#include "crawlsim/state.hpp"
#include "crawlsim/types.hpp"

namespace crawlsim {

enum class SystemKind { full, reduced };
enum class SolverMethod { rk4_fixed, dp54_adaptive };

struct SolverSpec {
    SolverMethod method = SolverMethod::dp54_adaptive;
    /// rk4_fixed: the step is used exactly (except for a possible short final
    /// step when it does not divide the horizon).
    double step = 1e-3;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    /// Spacing of the dense-output grid; 0 picks period/256.
    double dense_dt = 0.0;

    friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct SolverInfo {
    std::string method;
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    /// Largest tolerance-weighted local error estimate among accepted steps
    /// (<= 1 means every step met the tolerance).
    double max_error_estimate = 0.0;
};

/// Time-stamped solution samples on a uniform grid. Full states pack as
/// (x_1..x_n, v_1..v_n), reduced states as (z_1..z_{n-1}, v_1..v_n).
struct Trajectory {
    SystemKind kind = SystemKind::full;
    int block_count = 0;
    std::vector<double> times;
    std::vector<Vector> states;
    SolverInfo info;

    int dim() const { return kind == SystemKind::full ? 2 * block_count : 2 * block_count - 1; }
    std::size_t size() const { return times.size(); }
    /// Velocity block of sample j.
    Eigen::VectorBlock<const Vector> velocity(std::size_t j) const {
        return states[j].tail(block_count);
    }
    /// Shape vector of sample j (computed for full trajectories).
    Vector shape(std::size_t j) const;
};

using OdeRhs = std::function<void(double t, const Vector& y, Vector& dy)>;

struct OdeSolution {
    std::vector<double> times;
    std::vector<Vector> states;
    SolverInfo info;
};

/// Non-finite state encountered by the generic core.
struct OdeDivergence : std::runtime_error {
    OdeDivergence(double t, std::vector<double> ts, std::vector<Vector> ys);
    double t_fail;
    std::vector<double> times;
    std::vector<Vector> states;
};

/// Same, carrying the partial crawler trajectory (tagged diverging candidate;
/// classification is up to the analysis layer).
struct DivergenceError : std::runtime_error {
    DivergenceError(double t, Trajectory partial_trajectory);
    double t_fail;
    Trajectory partial;
};

struct StepUnderflowError : std::runtime_error {
    explicit StepUnderflowError(double t);
    double t_fail;
};

/// Integrates dy/dt = rhs(t, y) over [t0, t1] and samples the solution on the
/// uniform grid with n_out intervals (n_out+1 points, endpoints exact).
/// Dense output: 4th-order continuous extension for dp54, cubic Hermite for rk4.
OdeSolution solve_ode(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                      const SolverSpec& spec, int n_out);

/// Endpoint-only fast path.
Vector solve_ode_endpoint(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                          const SolverSpec& spec);

/// Number of dense-output intervals for a horizon, honoring spec.dense_dt.
int resolve_output_intervals(const CrawlerModel& model, const SolverSpec& spec, double t0,
                             double t1);

Trajectory integrate(const CrawlerModel& model, const FullState& y0, double t0, double t1,
                     const SolverSpec& spec);
Trajectory integrate(const CrawlerModel& model, const ReducedState& y0, double t0, double t1,
                     const SolverSpec& spec);

OdeRhs make_full_rhs(const CrawlerModel& model);
OdeRhs make_reduced_rhs(const CrawlerModel& model);

}  // namespace crawlsim
