#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "crawlsim/model.hpp"
#include "test_helpers.hpp"

using namespace crawlsim;
using namespace crawlsim::testing;

TEST_CASE("trig poly evaluation and extrema") {
    TrigPoly p(1.0, 2.0, {{1, 1.0, -std::numbers::pi / 2}});  // 2 + sin(2 pi t)
    CHECK(p.value(0.0) == doctest::Approx(2.0));
    CHECK(p.value(0.25) == doctest::Approx(3.0));
    CHECK(p.min_value() == doctest::Approx(1.0));
    CHECK(p.max_value() == doctest::Approx(3.0));
    CHECK(p.abs_bound() == doctest::Approx(3.0));
    CHECK(p.derivative(0.0) == doctest::Approx(2.0 * std::numbers::pi));

    TrigPoly q(2.0, 0.5, {{1, 1.0, 0.3}, {3, 0.4, 1.1}});
    double brute = 1e300;
    for (int i = 0; i <= 200000; ++i) brute = std::min(brute, q.value(2.0 * i / 200000.0));
    CHECK(q.min_value() == doctest::Approx(brute).epsilon(1e-10));

    CHECK_THROWS_AS(TrigPoly(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TrigPoly(1.0, 0.0, {{0, 1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("friction family constants") {
    ScalarFriction viscous{ViscousTerm{cosine(1.0, 2.0, 1.0, -std::numbers::pi / 2)}};
    CHECK(viscous.force(0.25, 3.0) == doctest::Approx(9.0));  // mu(1/4) = 3
    CHECK(viscous.monotonicity_bound() == doctest::Approx(1.0));
    CHECK(viscous.lipschitz_constant() == doctest::Approx(3.0));
    CHECK(viscous.a4_star());
    CHECK(viscous.is_viscous());
    CHECK(!viscous.time_independent());

    ScalarFriction dry{SmoothDryTerm{1.5, 4.0}};
    CHECK(dry.force(0.0, 0.0) == 0.0);
    CHECK(dry.lipschitz_constant() == doctest::Approx(6.0));
    CHECK(dry.monotonicity_bound() == 0.0);
    CHECK(dry.a4_star());
    CHECK(!dry.is_viscous());

    ScalarFriction res{ResonanceTerm{}};
    CHECK(res.force(0.0, 0.0) == 0.0);
    CHECK(res.a4_star());
    // sup of the derivative, located by the stationarity condition
    CHECK(res.lipschitz_constant() == doctest::Approx(1.2970757251263771).epsilon(1e-12));
    CHECK(res.dforce_dv(0.0, 0.0) == doctest::Approx(1.25));

    ScalarFriction sum{std::vector<FrictionTerm>{LinearTerm{0.5}, SmoothDryTerm{1.0, 2.0}}};
    CHECK(sum.monotonicity_bound() == doctest::Approx(0.5));
    CHECK(sum.lipschitz_constant() == doctest::Approx(2.5));
    CHECK(sum.force(0.0, 1.0) == doctest::Approx(0.5 + std::atan(2.0)));
}

TEST_CASE("projection matrix") {
    CHECK_THROWS_AS(build_projection(1), std::invalid_argument);

    const Matrix p2 = build_projection(2);
    REQUIRE(p2.rows() == 1);
    CHECK(p2(0, 0) == -1.0);
    CHECK(p2(0, 1) == 1.0);

    Matrix p4_expected(3, 4);
    p4_expected << -1, 1, 0, 0, 0, -1, 1, 0, 0, 0, -1, 1;
    CHECK((build_projection(4) - p4_expected).cwiseAbs().maxCoeff() == 0.0);

    for (int n = 2; n <= 12; ++n) {
        const Matrix p = build_projection(n);
        CHECK(Eigen::FullPivLU<Matrix>(p).rank() == n - 1);
        CHECK((p * Vector::Ones(n)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("configuration stiffness assembly") {
    const double k = 3.25;
    CrawlerModel model = damped_two_block(1.0, k);
    Matrix expected(2, 2);
    expected << k, -k, -k, k;
    CHECK((assemble_configuration_stiffness(model) - expected).cwiseAbs().maxCoeff() == 0.0);

    // explicit triple-product oracle, n = 3 with distinct link stiffnesses
    Matrix stiffness = Matrix::Zero(2, 2);
    stiffness(0, 0) = 1.5;
    stiffness(1, 1) = 2.5;
    std::vector<ScalarFriction> laws(3, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait{{TrigPoly(1.0, 0.0), TrigPoly(1.0, 0.0)}};
    CrawlerModel m3(Vector::Constant(3, 1.0), stiffness, FrictionLaw(std::move(laws)),
                    std::move(gait), 1.0);
    const Matrix p = build_projection(3);
    Matrix oracle = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) oracle(i, j) += p(a, i) * stiffness(a, b) * p(b, j);
    CHECK((assemble_configuration_stiffness(m3) - oracle).cwiseAbs().maxCoeff() < 1e-15);

    // spectrum: one zero eigenvalue with kernel spanned by the ones vector
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int n : {2, 3, 5}) {
        Matrix root(n - 1, n - 1);
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n - 1; ++j) root(i, j) = normal(rng);
        Matrix spd = root.transpose() * root + 0.5 * Matrix::Identity(n - 1, n - 1);
        Vector masses = Vector::Constant(n, 1.0);
        std::vector<ScalarFriction> fl(n, ScalarFriction(LinearTerm{1.0}));
        GaitSignal g{std::vector<TrigPoly>(n - 1, TrigPoly(1.0, 0.0))};
        CrawlerModel m(masses, spd, FrictionLaw(std::move(fl)), std::move(g), 1.0);
        const Matrix a = assemble_configuration_stiffness(m);
        CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-14 * a.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        const double scale = a.cwiseAbs().maxCoeff();
        CHECK(es.eigenvalues()(0) > -1e-10 * scale);
        int near_zero = 0;
        for (int i = 0; i < n; ++i)
            if (std::abs(es.eigenvalues()(i)) < 1e-10 * scale) ++near_zero;
        CHECK(near_zero == 1);
        CHECK((a * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("actuation load") {
    // single link, L1 = A cos(sqrt(2k) t): load is (-k L1, +k L1)
    CrawlerModel model = resonance_model(2.0, 3.0);
    for (double t : {0.0, 0.3, 1.1}) {
        const Vector load = actuation_load(model, t);
        CHECK(load[0] == doctest::Approx(-6.0 * std::cos(2.0 * t)).epsilon(1e-14));
        CHECK(load[1] == doctest::Approx(6.0 * std::cos(2.0 * t)).epsilon(1e-14));
    }

    // zero gait
    CrawlerModel quiet = damped_two_block(1.0, 2.0);
    CHECK(actuation_load(quiet, 0.37).cwiseAbs().maxCoeff() == 0.0);

    // n = 3, L = (sin t, cos t), K = diag(1, 2): dense-algebra oracle
    const double period = 2.0 * std::numbers::pi;
    Matrix stiffness = Matrix::Zero(2, 2);
    stiffness(0, 0) = 1.0;
    stiffness(1, 1) = 2.0;
    std::vector<ScalarFriction> laws(3, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait{{cosine(period, 0.0, 1.0, -std::numbers::pi / 2),
                     cosine(period, 0.0, 1.0, 0.0)}};
    CrawlerModel m3(Vector::Constant(3, 1.0), stiffness, FrictionLaw(std::move(laws)),
                    std::move(gait), period);
    for (double t : {0.0, 0.7, 2.9}) {
        const Vector load = actuation_load(m3, t);
        CHECK(load[0] == doctest::Approx(-std::sin(t)).epsilon(1e-13));
        CHECK(load[1] == doctest::Approx(std::sin(t) - 2.0 * std::cos(t)).epsilon(1e-13));
        CHECK(load[2] == doctest::Approx(2.0 * std::cos(t)).epsilon(1e-13));
        CHECK(std::abs(load.sum()) < 1e-12);
    }
}

TEST_CASE("elastic energy") {
    // k = 2, constant rest length 3, x = (0, 5): E = 0.5 * 2 * (5-3)^2 = 4
    std::vector<ScalarFriction> laws(2, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait{{TrigPoly(1.0, 3.0)}};
    CrawlerModel model(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 2.0),
                       FrictionLaw(std::move(laws)), std::move(gait), 1.0);
    Vector x(2);
    x << 0.0, 5.0;
    CHECK(elastic_energy(model, 0.0, x) == doctest::Approx(4.0));

    // zero at the rest shape
    Vector rest(2);
    rest << 1.0, 4.0;
    CHECK(elastic_energy(model, 0.0, rest) == doctest::Approx(0.0));

    // translation invariance
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    CrawlerModel chain = stiff_chain_model();
    for (int rep = 0; rep < 20; ++rep) {
        Vector y(4);
        for (int i = 0; i < 4; ++i) y[i] = uni(rng);
        const double t = uni(rng);
        const double g = uni(rng);
        const double base = elastic_energy(chain, t, y);
        CHECK(elastic_energy(chain, t, Vector(y.array() + g)) ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("assumption validation") {
    SamplingGrid grid;

    AssumptionReport inching = validate_assumptions(inching_model(), grid);
    CHECK(inching.a3_holds);
    CHECK(inching.a4_star_holds);
    CHECK(inching.monotonicity_constant == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(inching.lipschitz_constant == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(!inching.stiff_body_holds);  // friction laws differ between blocks

    AssumptionReport res = validate_assumptions(resonance_model(), grid);
    CHECK(res.a3_holds);
    CHECK(res.a4_star_holds);
    CHECK(res.monotonicity_constant == 0.0);  // bounded law, A4 fails

    AssumptionReport lin = validate_assumptions(damped_two_block(0.7, 1.0), grid);
    CHECK(lin.monotonicity_constant == doctest::Approx(0.7).epsilon(1e-12));

    AssumptionReport stiff = validate_assumptions(stiff_chain_model(), grid);
    CHECK(stiff.equal_masses);
    CHECK(stiff.identical_friction);
    CHECK(stiff.min_stiffness_eigenvalue == doctest::Approx(1.0));
    CHECK(stiff.stiff_body_bound == doctest::Approx(2.0));  // 4k(1 - cos(pi/3))
    CHECK(stiff.stiff_body_holds);

    // Lipschitz constant above the bound
    std::vector<ScalarFriction> strong(4, ScalarFriction(LinearTerm{2.5}));
    GaitSignal gait{{TrigPoly(1.0, 0.0), TrigPoly(1.0, 0.0), TrigPoly(1.0, 0.0)}};
    CrawlerModel too_soft(Vector::Constant(4, 1.0), Matrix::Identity(3, 3),
                          FrictionLaw(std::move(strong)), std::move(gait), 1.0);
    CHECK(!validate_assumptions(too_soft, grid).stiff_body_holds);

    CHECK_THROWS_AS(validate_assumptions(inching_model(), SamplingGrid{0, -1.0, 1.0, 11}),
                    std::invalid_argument);
}

TEST_CASE("model construction guards") {
    std::vector<ScalarFriction> laws(2, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait{{TrigPoly(1.0, 0.0)}};

    Vector bad_mass(2);
    bad_mass << 1.0, -1.0;
    CHECK_THROWS_AS(CrawlerModel(bad_mass, Matrix::Constant(1, 1, 1.0), FrictionLaw(2, laws[0]),
                                 gait, 1.0),
                    std::invalid_argument);

    Matrix asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    std::vector<ScalarFriction> laws3(3, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait3{{TrigPoly(1.0, 0.0), TrigPoly(1.0, 0.0)}};
    CHECK_THROWS_AS(CrawlerModel(Vector::Constant(3, 1.0), asym, FrictionLaw(std::move(laws3)),
                                 gait3, 1.0),
                    std::invalid_argument);

    CHECK_THROWS_AS(CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, -2.0),
                                 FrictionLaw(2, laws[0]), gait, 1.0),
                    std::invalid_argument);

    CHECK_THROWS_AS(CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                                 FrictionLaw(2, laws[0]), gait, -1.0),
                    std::invalid_argument);

    // signal period inconsistent with the model period
    GaitSignal wrong{{cosine(2.0, 0.0, 1.0, 0.0)}};
    CHECK_THROWS_AS(CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                                 FrictionLaw(2, laws[0]), wrong, 1.0),
                    std::invalid_argument);
}
