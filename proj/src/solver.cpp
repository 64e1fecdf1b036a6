#include "crawlsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crawlsim/dynamics.hpp"

namespace crawlsim {

OdeDivergence::OdeDivergence(double t, std::vector<double> ts, std::vector<Vector> ys)
    : std::runtime_error("non-finite state at t=" + std::to_string(t)),
      t_fail(t),
      times(std::move(ts)),
      states(std::move(ys)) {}

DivergenceError::DivergenceError(double t, Trajectory partial_trajectory)
    : std::runtime_error("integration diverged at t=" + std::to_string(t)),
      t_fail(t),
      partial(std::move(partial_trajectory)) {}

StepUnderflowError::StepUnderflowError(double t)
    : std::runtime_error("step size underflow at t=" + std::to_string(t)), t_fail(t) {}

Vector Trajectory::shape(std::size_t j) const {
    if (kind == SystemKind::reduced) return states[j].head(block_count - 1);
    Vector z(block_count - 1);
    for (int i = 0; i < block_count - 1; ++i) z[i] = states[j][i + 1] - states[j][i];
    return z;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// 4th-order dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct GridEmitter {
    double t0, t1;
    int n_out;
    int next = 0;
    std::vector<double> times;
    std::vector<Vector> states;

    GridEmitter(double t0_, double t1_, int n) : t0(t0_), t1(t1_), n_out(n) {
        times.reserve(n + 1);
        states.reserve(n + 1);
    }
    double next_time() const { return next == n_out ? t1 : t0 + (t1 - t0) * next / n_out; }
    bool done() const { return next > n_out; }
    void push(double t, Vector y) {
        times.push_back(t);
        states.push_back(std::move(y));
        ++next;
    }
};

double hinit(const OdeRhs& rhs, const Vector& y0, const Vector& f0, double t0, double hmax,
             double atol, double rtol, long& nfev) {
    const int dim = static_cast<int>(y0.size());
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        dnf += (f0[i] / sc) * (f0[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);

    Vector y1 = y0 + h * f0;
    Vector f1(dim);
    rhs(t0 + h, y1, f1);
    ++nfev;
    double der2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double sc = atol + rtol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

OdeSolution solve_dp54(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                       const SolverSpec& spec, int n_out) {
    const int dim = static_cast<int>(y0.size());
    const double atol = spec.abs_tol, rtol = spec.rel_tol;
    constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    constexpr double fac_lo = 0.2, fac_hi = 10.0;

    GridEmitter out(t0, t1, n_out);
    out.push(t0, y0);

    SolverInfo info;
    info.method = "dp54_adaptive";

    Vector y = y0, ynew(dim), ytmp(dim), yerr(dim);
    Vector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    double t = t0;
    rhs(t, y, k1);
    info.rhs_evaluations = 1;
    double h = hinit(rhs, y, k1, t0, t1 - t0, atol, rtol, info.rhs_evaluations);
    double facold = 1e-4;

    const long max_steps = 200'000'000;
    for (long step = 0; step < max_steps && t < t1; ++step) {
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw StepUnderflowError(t);
        bool last = false;
        if (t + 1.000001 * h >= t1) {
            h = t1 - t;
            last = true;
        }

        ytmp = y + h * (a21 * k1);
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);
        info.rhs_evaluations += 6;

        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (yerr[i] / sc) * (yerr[i] / sc);
        }
        err = std::sqrt(err / dim);

        if (!std::isfinite(err)) {
            if (y.cwiseAbs().maxCoeff() > 1e15)
                throw OdeDivergence(t, std::move(out.times), std::move(out.states));
            ++info.rejected;
            h *= 0.2;
            continue;
        }

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            // accepted: emit everything the dense formula now covers
            if (!ynew.allFinite())
                throw OdeDivergence(t + h, std::move(out.times), std::move(out.states));
            const Vector ydiff = ynew - y;
            const Vector bspl = h * k1 - ydiff;
            const Vector cont4 = ydiff - h * k7 - bspl;
            const Vector cont5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            const double t_new = last ? t1 : t + h;
            while (!out.done() &&
                   out.next_time() <= t_new + 1e-12 * (1.0 + std::abs(t_new))) {
                const double theta = std::clamp((out.next_time() - t) / h, 0.0, 1.0);
                const double th1 = 1.0 - theta;
                out.push(out.next_time(),
                         y + theta * (ydiff + th1 * (bspl + theta * (cont4 + th1 * cont5))));
            }
            ++info.accepted;
            info.max_error_estimate = std::max(info.max_error_estimate, err);
            const double fac =
                std::clamp(fac11 / std::pow(facold, beta) / safe, 1.0 / fac_hi, 1.0 / fac_lo);
            facold = std::max(err, 1e-4);
            t = t_new;
            y.swap(ynew);
            k1.swap(k7);
            if (!last) h = h / fac;
        } else {
            ++info.rejected;
            h = h / std::min(1.0 / fac_lo, fac11 / safe);
        }
    }
    if (t < t1) throw std::runtime_error("solve_ode: step budget exhausted");
    // roundoff may leave the final grid point pending
    while (!out.done()) out.push(out.next_time(), y);
    OdeSolution sol{std::move(out.times), std::move(out.states), std::move(info)};
    return sol;
}

OdeSolution solve_rk4(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                      const SolverSpec& spec, int n_out) {
    if (!(spec.step > 0.0)) throw std::invalid_argument("solve_ode: rk4 step must be positive");
    const int dim = static_cast<int>(y0.size());
    const double h_req = spec.step;
    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil((t1 - t0) / h_req - 1e-9)));

    GridEmitter out(t0, t1, n_out);
    out.push(t0, y0);

    SolverInfo info;
    info.method = "rk4_fixed";

    Vector y = y0, ynew(dim), ytmp(dim);
    Vector k1(dim), k2(dim), k3(dim), k4(dim), f1(dim);
    rhs(t0, y, k1);
    info.rhs_evaluations = 1;

    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + s * h_req;
        const double t_new = (s + 1 == n_steps) ? t1 : t0 + (s + 1) * h_req;
        const double h = t_new - t;

        ytmp = y + (0.5 * h) * k1;
        rhs(t + 0.5 * h, ytmp, k2);
        ytmp = y + (0.5 * h) * k2;
        rhs(t + 0.5 * h, ytmp, k3);
        ytmp = y + h * k3;
        rhs(t + h, ytmp, k4);
        ynew = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rhs(t_new, ynew, f1);
        info.rhs_evaluations += 4;

        if (!ynew.allFinite())
            throw OdeDivergence(t_new, std::move(out.times), std::move(out.states));

        while (!out.done() && out.next_time() <= t_new + 1e-12 * (1.0 + std::abs(t_new))) {
            const double theta = std::clamp((out.next_time() - t) / h, 0.0, 1.0);
            const double th2 = theta * theta, th3 = th2 * theta;
            const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + theta;
            const double h01 = -2 * th3 + 3 * th2, h11 = th3 - th2;
            out.push(out.next_time(), h00 * y + (h10 * h) * k1 + h01 * ynew + (h11 * h) * f1);
        }
        ++info.accepted;
        y.swap(ynew);
        k1.swap(f1);
    }
    while (!out.done()) out.push(out.next_time(), y);
    return {std::move(out.times), std::move(out.states), std::move(info)};
}

}  // namespace

OdeSolution solve_ode(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                      const SolverSpec& spec, int n_out) {
    if (!(t1 > t0)) throw std::invalid_argument("solve_ode: need t1 > t0");
    if (n_out < 1) throw std::invalid_argument("solve_ode: need at least one output interval");
    if (!y0.allFinite()) throw std::invalid_argument("solve_ode: non-finite initial state");
    if (spec.method == SolverMethod::rk4_fixed) return solve_rk4(rhs, y0, t0, t1, spec, n_out);
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
        throw std::invalid_argument("solve_ode: tolerances must be positive");
    return solve_dp54(rhs, y0, t0, t1, spec, n_out);
}

Vector solve_ode_endpoint(const OdeRhs& rhs, const Vector& y0, double t0, double t1,
                          const SolverSpec& spec) {
    return solve_ode(rhs, y0, t0, t1, spec, 1).states.back();
}

int resolve_output_intervals(const CrawlerModel& model, const SolverSpec& spec, double t0,
                             double t1) {
    const double dt = spec.dense_dt > 0.0 ? spec.dense_dt : model.period() / 1024.0;
    return std::max(1, static_cast<int>(std::lround((t1 - t0) / dt)));
}

OdeRhs make_full_rhs(const CrawlerModel& model) {
    return [model](double t, const Vector& y, Vector& dy) {
        const int n = model.block_count();
        dy.resize(2 * n);
        const auto x = y.head(n);
        const auto v = y.tail(n);
        dy.head(n) = v;
        dy.tail(n) = (model.actuation_load(t) - model.friction().force(t, v) -
                      model.configuration_stiffness() * x)
                         .cwiseQuotient(model.masses());
    };
}

OdeRhs make_reduced_rhs(const CrawlerModel& model) {
    const Matrix proj_stiffness =
        model.projection().transpose() * model.shape_stiffness();
    return [model, proj_stiffness](double t, const Vector& y, Vector& dy) {
        const int n = model.block_count();
        dy.resize(2 * n - 1);
        const auto z = y.head(n - 1);
        const auto v = y.tail(n);
        dy.head(n - 1) = model.projection() * v;
        dy.tail(n) =
            (model.actuation_load(t) - model.friction().force(t, v) - proj_stiffness * z)
                .cwiseQuotient(model.masses());
    };
}

namespace {

Trajectory pack_trajectory(SystemKind kind, int n, OdeSolution sol) {
    Trajectory traj;
    traj.kind = kind;
    traj.block_count = n;
    traj.times = std::move(sol.times);
    traj.states = std::move(sol.states);
    traj.info = std::move(sol.info);
    return traj;
}

}  // namespace

Trajectory integrate(const CrawlerModel& model, const FullState& y0, double t0, double t1,
                     const SolverSpec& spec) {
    if (y0.block_count() != model.block_count() || y0.v.size() != model.block_count())
        throw std::invalid_argument("integrate: initial state dimension mismatch");
    const int n_out = resolve_output_intervals(model, spec, t0, t1);
    try {
        return pack_trajectory(SystemKind::full, model.block_count(),
                               solve_ode(make_full_rhs(model), y0.packed(), t0, t1, spec, n_out));
    } catch (OdeDivergence& d) {
        Trajectory partial = pack_trajectory(SystemKind::full, model.block_count(),
                                             {std::move(d.times), std::move(d.states), {}});
        throw DivergenceError(d.t_fail, std::move(partial));
    }
}

Trajectory integrate(const CrawlerModel& model, const ReducedState& y0, double t0, double t1,
                     const SolverSpec& spec) {
    if (y0.z.size() != model.block_count() - 1 || y0.v.size() != model.block_count())
        throw std::invalid_argument("integrate: initial state dimension mismatch");
    const int n_out = resolve_output_intervals(model, spec, t0, t1);
    try {
        return pack_trajectory(
            SystemKind::reduced, model.block_count(),
            solve_ode(make_reduced_rhs(model), y0.packed(), t0, t1, spec, n_out));
    } catch (OdeDivergence& d) {
        Trajectory partial = pack_trajectory(SystemKind::reduced, model.block_count(),
                                             {std::move(d.times), std::move(d.states), {}});
        throw DivergenceError(d.t_fail, std::move(partial));
    }
}

}  // namespace crawlsim
