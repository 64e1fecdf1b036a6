// Acceptance suite: end-to-end checks of the documented guarantees, one
// pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "crawlsim/analysis.hpp"
#include "crawlsim/dynamics.hpp"
#include "crawlsim/quadrature.hpp"
#include "crawlsim/scenario.hpp"

using namespace crawlsim;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int index, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %s (%s)\n", ok ? "PASS" : "FAIL", index, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

// ---------------------------------------------------------------- criteria

void criterion_1_shared_limit() {
    Timer timer;
    const Scenario scenario = built_in_scenario("viscous-inching");
    SolverSpec spec = scenario.solver;
    spec.dense_dt = 1.0 / 128;

    std::vector<Trajectory> runs;
    for (const auto& ic : scenario.full_ics)
        runs.push_back(integrate(scenario.model, ic, 0.0, 30.0, spec));

    double max_pair_diff = 0.0;
    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b)
            for (std::size_t j = 0; j < runs[a].size(); ++j) {
                if (runs[a].times[j] < 20.0) continue;
                const double dz =
                    (runs[a].shape(j) - runs[b].shape(j)).cwiseAbs().maxCoeff();
                const double dv =
                    (runs[a].velocity(j) - runs[b].velocity(j)).cwiseAbs().maxCoeff();
                max_pair_diff = std::max({max_pair_diff, dz, dv});
            }

    std::vector<Vector> finals;
    for (const auto& ic : scenario.full_ics) {
        Vector s = project(ic).packed();
        for (int p = 0; p < 30; ++p)
            s = period_map(scenario.model, reduced_state_from_packed(s), 0.0, scenario.solver)
                    .packed();
        finals.push_back(s);
    }
    double strobe_diff = 0.0;
    for (std::size_t a = 0; a < finals.size(); ++a)
        for (std::size_t b = a + 1; b < finals.size(); ++b)
            strobe_diff = std::max(strobe_diff, (finals[a] - finals[b]).cwiseAbs().maxCoeff());

    const double elapsed = timer.seconds();
    report(1, "three starts share one limit in shape and velocity",
           max_pair_diff < 1e-5 && strobe_diff < 1e-7 && elapsed < 5.0,
           fmt("pair diff %.2e < 1e-5, stroboscopic %.2e < 1e-7, %.2f s < 5 s", max_pair_diff,
               strobe_diff, elapsed));
}

void criterion_2_positive_phase() {
    const Scenario scenario = built_in_scenario("viscous-inching");
    CycleSearch search = find_limit_cycle(scenario.model, scenario.all_reduced_ics()[0], 1e-10,
                                          300, CycleAccel::none, scenario.solver);
    if (!search.success) {
        report(2, "positive displacement per period under modulated viscosity", false,
               "cycle search failed");
        return;
    }
    const double phase = search.cycle->geometric_phase;

    // independent long-run oracle: 200 stroboscopic periods, then one dense period
    Vector s = scenario.all_reduced_ics()[0].packed();
    for (int p = 0; p < 200; ++p)
        s = period_map(scenario.model, reduced_state_from_packed(s), 0.0, scenario.solver)
                .packed();
    SolverSpec dense = scenario.solver;
    dense.dense_dt = scenario.model.period() / 512;
    Trajectory one = integrate(scenario.model, reduced_state_from_packed(s), 0.0,
                               scenario.model.period(), dense);
    std::vector<double> v1(one.size());
    for (std::size_t j = 0; j < one.size(); ++j) v1[j] = one.states[j][1];
    const double phase_longrun = simpson(v1, one.times[1] - one.times[0]);

    report(2, "positive displacement per period under modulated viscosity",
           phase > 0.0 && std::abs(phase - phase_longrun) < 1e-6,
           fmt("g* = %.12f > 0, |shooting - long-run| = %.2e < 1e-6", phase,
               std::abs(phase - phase_longrun)));
}

void criterion_3_incompetence() {
    // same chain with the viscosity frozen at its mean value
    std::vector<ScalarFriction> laws(2, ScalarFriction(LinearTerm{2.0}));
    GaitSignal gait{{TrigPoly(1.0, 0.0, {{1, 5.0, 0.0}})}};
    CrawlerModel model(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                       FrictionLaw(std::move(laws)), std::move(gait), 1.0);
    Certificate cert = incompetence_check(model, SolverSpec{});
    const double mean_u = std::abs(cert.measured.at("mean_barycenter_velocity"));
    const double drift = cert.measured.at("drift_rate");
    report(3, "constant viscosity yields zero net motion",
           cert.verdict == Verdict::pass && mean_u < 1e-7 && drift < 1e-5,
           fmt("|mean u*| = %.2e < 1e-7, 50-period drift rate %.2e < 1e-5", mean_u, drift));
}

void criterion_4_resonant_divergence() {
    Timer timer;
    const Scenario scenario = built_in_scenario("resonance");
    const double window = 5.0 * std::numbers::pi;
    AsymptoticsVerdict verdict = classify_asymptotics(
        scenario.model, scenario.all_reduced_ics()[0], 200.0, window, scenario.solver);
    const double alpha_hat = 5.0 * std::numbers::pi / 4.0 + std::numbers::pi * std::numbers::pi / 8.0;
    const double lo = (6.0 - alpha_hat) / 2.0, hi = (6.0 + alpha_hat) / 2.0;
    bool ok = verdict.cls == AsymptoticsClass::diverging && verdict.growth.has_value();
    std::string detail = "classifier did not report divergence";
    const double elapsed = timer.seconds();
    if (ok) {
        const GrowthEvidence& g = *verdict.growth;
        ok = g.increasing_fraction >= 0.9 && g.slope >= lo && g.slope <= hi && elapsed < 10.0;
        detail = fmt("windows increasing %.0f%% >= 90%%, slope %.3f in [%.3f, %.3f], %.2f s < 10 s",
                     100.0 * g.increasing_fraction, g.slope, lo, hi, elapsed);
    }
    report(4, "resonant actuation drives the shape envelope apart", ok, detail);
}

void criterion_5_contraction() {
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int passed = 0;
    double worst_defect = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rep % 3;
        Vector masses(n);
        for (int i = 0; i < n; ++i) masses[i] = 0.6 + 1.2 * uni(rng);
        Matrix root(n - 1, n - 1);
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n - 1; ++j) root(i, j) = 2.0 * uni(rng) - 1.0;
        Matrix stiffness =
            root.transpose() * root + (0.4 + uni(rng)) * Matrix::Identity(n - 1, n - 1);
        std::vector<ScalarFriction> laws;
        for (int i = 0; i < n; ++i) {
            const double amp = 0.2 + 0.8 * uni(rng);
            const double floor_mu = amp + 0.3 + uni(rng);
            laws.emplace_back(ViscousTerm{
                TrigPoly(1.0, floor_mu, {{1, amp, 2.0 * std::numbers::pi * uni(rng)}})});
        }
        GaitSignal gait;
        for (int i = 0; i < n - 1; ++i)
            gait.rest_lengths.push_back(
                TrigPoly(1.0, 0.0, {{1, 0.2 + 0.8 * uni(rng), 2.0 * std::numbers::pi * uni(rng)}}));
        CrawlerModel model(masses, stiffness, FrictionLaw(std::move(laws)), std::move(gait),
                           1.0);

        auto draw_state = [&] {
            Vector y(2 * n - 1);
            for (int i = 0; i < 2 * n - 1; ++i) y[i] = 4.0 * uni(rng) - 2.0;
            return reduced_state_from_packed(y);
        };
        Certificate cert =
            contraction_diagnostics(model, draw_state(), draw_state(), 3.0, SolverSpec{});
        const double slack = cert.measured.at("dissipation_slack");
        const bool ok = cert.verdict == Verdict::pass &&
                        cert.measured.at("max_dissipation_defect") <= slack &&
                        cert.measured.at("separation_final") <
                            cert.measured.at("separation_initial");
        worst_defect = std::max(worst_defect, cert.measured.at("max_dissipation_defect") / slack);
        if (ok) ++passed;
    }
    report(5, "pairwise energy contracts for strongly monotone friction", passed == 20,
           fmt("%d/20 random chains pass, worst defect %.2f x slack", passed, worst_defect));
}

void criterion_6_floquet() {
    const Scenario scenario = built_in_scenario("viscous-inching");
    Certificate cert = floquet_certificate(scenario.model, scenario.solver);
    const double rho = cert.measured.at("spectral_radius");

    SolverSpec tight = scenario.solver;
    tight.abs_tol = tight.rel_tol = 1e-12;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    Vector a(3), b(3);
    for (int i = 0; i < 3; ++i) {
        a[i] = uni(rng);
        b[i] = uni(rng);
    }
    const double d0 = (a - b).norm();
    for (int p = 0; p < 20; ++p) {
        a = period_map(scenario.model, reduced_state_from_packed(a), 0.0, tight).packed();
        b = period_map(scenario.model, reduced_state_from_packed(b), 0.0, tight).packed();
    }
    const double factor = std::pow((a - b).norm() / d0, 1.0 / 20.0);
    report(6, "multipliers inside the unit circle match the measured decay",
           rho < 1.0 && factor > rho / 3.0 && factor < rho * 3.0,
           fmt("spectral radius %.6f < 1, per-period decay %.6f within 3x", rho, factor));
}

void criterion_7_dissipativity() {
    Timer timer;
    const Scenario scenario = built_in_scenario("stiff-chain");
    const auto probes = random_probe_states(4, 10, 1e3, 2026);
    Certificate cert = dissipativity_certificate(scenario.model, probes, scenario.solver);
    const double elapsed = timer.seconds();
    const bool ok = cert.verdict == Verdict::pass && cert.measured.at("delta") > 0.0 &&
                    cert.measured.at("coeff_zdot_sq") < 0.0 &&
                    cert.measured.at("coeff_z_sq") < 0.0 && elapsed < 30.0;
    report(7, "skewed energy confines every probe to a compact set", ok,
           fmt("delta %.4f > 0, coeffs (%.3f, %.4f) < 0, entry by t = %.1f, %.1f s < 30 s",
               cert.measured.at("delta"), cert.measured.at("coeff_zdot_sq"),
               cert.measured.at("coeff_z_sq"), cert.measured.at("max_entry_time"), elapsed));
}

void criterion_8_energy_balance() {
    double worst = 0.0;
    for (const auto& name : built_in_scenario_names()) {
        const Scenario scenario = built_in_scenario(name);
        // divergent scenario: one gait cycle is the audit window (the state
        // grows without bound, so any fixed tolerance fails eventually)
        const double horizon = scenario.expected_divergence ? scenario.model.period() : 20.0;
        FullState ic = scenario.full_ics.empty()
                           ? FullState{Vector::Zero(scenario.model.block_count()),
                                       Vector::Zero(scenario.model.block_count())}
                           : scenario.full_ics[0];
        Trajectory traj = integrate(scenario.model, ic, 0.0, horizon, scenario.solver);
        worst = std::max(worst, energy_ledger(scenario.model, traj).max_abs_residual);
    }

    const Scenario inching = built_in_scenario("viscous-inching");
    auto rk4_residual = [&](double h) {
        SolverSpec rk;
        rk.method = SolverMethod::rk4_fixed;
        rk.step = h;
        rk.dense_dt = h;
        Trajectory traj = integrate(inching.model, inching.full_ics[0], 0.0, 10.0, rk);
        return energy_ledger(inching.model, traj).max_abs_residual;
    };
    const double coarse = rk4_residual(0.02);
    const double fine = rk4_residual(0.01);
    report(8, "energy ledger closes and converges at order four",
           worst < 1e-6 && coarse / fine >= 8.0,
           fmt("max residual %.2e < 1e-6, halving ratio %.1f >= 8", worst, coarse / fine));
}

void criterion_9_reconstruction() {
    double worst_consistency = 0.0, worst_roundtrip = 0.0;
    for (const char* name : {"viscous-inching", "stiff-chain", "constant-gait"}) {
        const Scenario scenario = built_in_scenario(name);
        CycleSearch search = find_limit_cycle(scenario.model, scenario.all_reduced_ics()[0],
                                              1e-9, 400, CycleAccel::none, scenario.solver);
        if (!search.success) {
            report(9, "per-block phase integrals agree and reconstruction inverts projection",
                   false, std::string("cycle search failed for ") + name);
            return;
        }
        worst_consistency = std::max(worst_consistency, search.cycle->phase_consistency);

        Trajectory reduced;
        reduced.kind = SystemKind::reduced;
        reduced.block_count = scenario.model.block_count();
        reduced.times = search.cycle->times;
        reduced.states = search.cycle->samples;
        Trajectory full = reconstruct(scenario.model, reduced, 0.0);
        for (std::size_t j = 0; j < full.size(); ++j) {
            const Vector back = project(full_state_from_packed(full.states[j])).packed();
            worst_roundtrip = std::max(
                worst_roundtrip, (back - reduced.states[j]).cwiseAbs().maxCoeff());
        }
    }
    report(9, "per-block phase integrals agree and reconstruction inverts projection",
           worst_consistency < 1e-7 && worst_roundtrip < 1e-9,
           fmt("phase consistency %.2e < 1e-7, projection round-trip %.2e < 1e-9",
               worst_consistency, worst_roundtrip));
}

void criterion_10_uniqueness() {
    double worst = 0.0;
    bool all_found = true;
    for (const char* name : {"viscous-inching", "stiff-chain"}) {
        const Scenario scenario = built_in_scenario(name);
        const int n = scenario.model.block_count();
        const auto guesses = random_probe_states(n, 10, 3.0, 11);
        std::vector<Vector> anchors;
        for (const auto& guess : guesses) {
            CycleSearch search = find_limit_cycle(scenario.model, guess, 1e-9, 400,
                                                  CycleAccel::none, scenario.solver);
            if (!search.success) {
                all_found = false;
                break;
            }
            anchors.push_back(search.cycle->samples.front());
        }
        for (std::size_t a = 0; a < anchors.size(); ++a)
            for (std::size_t b = a + 1; b < anchors.size(); ++b)
                worst = std::max(worst, (anchors[a] - anchors[b]).cwiseAbs().maxCoeff());
    }
    report(10, "ten random starts locate the same cycle", all_found && worst < 1e-7,
           fmt("all searches converged, max pairwise gap %.2e < 1e-7", worst));
}

}  // namespace

int main() {
    criterion_1_shared_limit();
    criterion_2_positive_phase();
    criterion_3_incompetence();
    criterion_4_resonant_divergence();
    criterion_5_contraction();
    criterion_6_floquet();
    criterion_7_dissipativity();
    criterion_8_energy_balance();
    criterion_9_reconstruction();
    criterion_10_uniqueness();
    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
