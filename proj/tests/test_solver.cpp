#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "crawlsim/quadrature.hpp"
#include "crawlsim/solver.hpp"
#include "test_helpers.hpp"

using namespace crawlsim;
using namespace crawlsim::testing;

namespace {

SolverSpec tight_dp54() {
    SolverSpec spec;
    spec.abs_tol = spec.rel_tol = 1e-12;
    return spec;
}

}  // namespace

TEST_CASE("quadrature rules") {
    // Simpson is exact on cubics
    const int n = 17;
    const double h = 0.25;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        y[i] = 2.0 - t + 3.0 * t * t - 0.5 * t * t * t;
    }
    const double b = (n - 1) * h;
    const double exact = 2.0 * b - b * b / 2 + b * b * b - b * b * b * b / 8;
    CHECK(simpson(y, h) == doctest::Approx(exact).epsilon(1e-14));
    const auto cum = cumulative_simpson(y, h);
    CHECK(cum.back() == doctest::Approx(exact).epsilon(1e-13));
    CHECK(cum.front() == 0.0);

    // odd interval count: the trailing parabola keeps quadratics exact
    std::vector<double> q(8);
    for (int i = 0; i < 8; ++i) {
        const double t = i * h;
        q[i] = 1.0 + 2.0 * t - t * t;
    }
    const double bq = 7 * h;
    CHECK(simpson(q, h) ==
          doctest::Approx(bq + bq * bq - bq * bq * bq / 3).epsilon(1e-14));
    CHECK(cumulative_simpson(q, h).back() ==
          doctest::Approx(bq + bq * bq - bq * bq * bq / 3).epsilon(1e-13));

    CHECK_THROWS_AS(simpson(std::vector<double>{1.0}, h), std::invalid_argument);
}

TEST_CASE("free oscillation matches the closed form") {
    // no friction, no gait: z'' = -2k z; u = (v1+v2)/2 constant
    const double k = 2.0;
    CrawlerModel model = damped_two_block(0.0, k);
    const double omega = std::sqrt(2.0 * k);
    const ReducedState s0 = make_reduced({1.0}, {-0.5, 0.5});  // z=1, zdot=1, u=0

    SolverSpec spec;  // defaults: dp54, 1e-9
    spec.dense_dt = 0.01;
    Trajectory traj = integrate(model, s0, 0.0, 10.0, spec);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == doctest::Approx(10.0));
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double t = traj.times[j];
        const double z = std::cos(omega * t) + std::sin(omega * t) / omega;
        const double zdot = -omega * std::sin(omega * t) + std::cos(omega * t);
        CHECK(std::abs(traj.states[j][0] - z) < 1e-6);
        CHECK(std::abs(traj.states[j][1] - (-0.5 * zdot)) < 1e-6);
        CHECK(std::abs(traj.states[j][2] - (0.5 * zdot)) < 1e-6);
    }
}

TEST_CASE("constant viscous decay matches the modal solution") {
    // eigen-decomposition oracle for the constant-coefficient reduced system
    const double mu = 2.0, k = 1.0;
    CrawlerModel model = damped_two_block(mu, k);
    Matrix a(3, 3);
    a << 0, -1, 1, 1, -mu, 0, -1, 0, -mu;
    Eigen::EigenSolver<Matrix> es(a);
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::VectorXcd lambda = es.eigenvalues();

    const ReducedState s0 = make_reduced({0.8}, {0.3, -0.6});
    const Eigen::VectorXcd c = v.partialPivLu().solve(s0.packed().cast<std::complex<double>>());

    SolverSpec spec = tight_dp54();
    spec.dense_dt = 0.5;
    Trajectory traj = integrate(model, s0, 0.0, 5.0, spec);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double t = traj.times[j];
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(3);
        for (int m = 0; m < 3; ++m) y += c[m] * std::exp(lambda[m] * t) * v.col(m);
        CHECK((traj.states[j] - y.real()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("rk4 uses the requested step and converges at order 4") {
    CrawlerModel model = inching_model();
    const ReducedState s0 = make_reduced({-1.0 / 3}, {-7.0, 2.0});

    SolverSpec rk;
    rk.method = SolverMethod::rk4_fixed;
    rk.step = 0.125;
    rk.dense_dt = 0.125;
    Trajectory traj = integrate(model, s0, 0.0, 1.0, rk);
    CHECK(traj.info.accepted == 8);
    REQUIRE(traj.size() == 9);
    for (std::size_t j = 0; j < traj.size(); ++j)
        CHECK(traj.times[j] == doctest::Approx(0.125 * j).epsilon(1e-15));

    const Vector reference =
        solve_ode_endpoint(make_reduced_rhs(model), s0.packed(), 0.0, 5.0, tight_dp54());
    auto rk_error = [&](double h) {
        SolverSpec spec;
        spec.method = SolverMethod::rk4_fixed;
        spec.step = h;
        spec.dense_dt = 5.0;
        Trajectory t = integrate(model, s0, 0.0, 5.0, spec);
        return (t.states.back() - reference).norm();
    };
    const double e1 = rk_error(0.01);
    const double e2 = rk_error(0.005);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("dense output grid is uniform and endpoint-exact") {
    CrawlerModel model = inching_model();
    SolverSpec spec;
    spec.dense_dt = 0.034;  // does not divide the horizon
    Trajectory traj = integrate(model, make_reduced({0.1}, {0.0, 0.0}), 0.0, 1.0, spec);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1.0);
    const double h = traj.times[1] - traj.times[0];
    for (std::size_t j = 1; j < traj.size(); ++j)
        CHECK(traj.times[j] - traj.times[j - 1] == doctest::Approx(h).epsilon(1e-12));

    // dense samples obey the tolerance against a pointwise re-integration
    Trajectory fine = integrate(model, make_reduced({0.1}, {0.0, 0.0}), 0.0, 1.0, tight_dp54());
    CHECK((traj.states.back() - fine.states.back()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("determinism: identical runs produce identical trajectories") {
    CrawlerModel model = stiff_chain_model();
    const ReducedState s0 = make_reduced({0.3, -0.2, 0.1}, {1.0, 0.0, -1.0, 0.5});
    SolverSpec spec;
    Trajectory a = integrate(model, s0, 0.0, 7.0, spec);
    Trajectory b = integrate(model, s0, 0.0, 7.0, spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a.times[j] == b.times[j]);
        CHECK((a.states[j] - b.states[j]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("divergence raises an error carrying the partial trajectory") {
    // negative viscous coefficient: energy is pumped in, the state blows up
    CrawlerModel model = damped_two_block(-2.0, 1.0);
    const ReducedState s0 = make_reduced({1.0}, {1.0, 1.0});
    SolverSpec spec;
    spec.dense_dt = 0.5;
    bool thrown = false;
    try {
        integrate(model, s0, 0.0, 500.0, spec);
    } catch (const DivergenceError& e) {
        thrown = true;
        CHECK(e.t_fail > 0.0);
        CHECK(e.partial.kind == SystemKind::reduced);
        CHECK(e.partial.block_count == 2);
        CHECK(!e.partial.times.empty());
        CHECK(e.partial.states.back().allFinite());
    }
    CHECK(thrown);
}

TEST_CASE("solver argument guards") {
    CrawlerModel model = damped_two_block(1.0, 1.0);
    const ReducedState s0 = make_reduced({0.0}, {0.0, 0.0});
    SolverSpec spec;
    CHECK_THROWS_AS(integrate(model, s0, 1.0, 1.0, spec), std::invalid_argument);
    spec.method = SolverMethod::rk4_fixed;
    spec.step = 0.0;
    CHECK_THROWS_AS(integrate(model, s0, 0.0, 1.0, spec), std::invalid_argument);
    SolverSpec bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate(model, s0, 0.0, 1.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(integrate(model, make_reduced({0.0, 0.1}, {0.0, 0.0, 0.0}), 0.0, 1.0,
                              SolverSpec{}),
                    std::invalid_argument);
}
