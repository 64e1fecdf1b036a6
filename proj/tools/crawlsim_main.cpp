// crawlsim: simulate the crawler scenarios, locate limit cycles and run the
// numerical certificates from the command line.
//
// Exit codes: 0 ok, 1 certificate failure or disagreement, 2 input error,
// 3 precondition unmet.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "crawlsim/analysis.hpp"
#include "crawlsim/csv.hpp"
#include "crawlsim/dynamics.hpp"
#include "crawlsim/scenario.hpp"
#include "crawlsim/svg.hpp"

namespace fs = std::filesystem;
using namespace crawlsim;

namespace {

constexpr int kExitOk = 0, kExitFailure = 1, kExitInput = 2, kExitPrecondition = 3;

struct CommonOpts {
    std::string scenario;
    std::string out = "out";
    std::string solver;
    double horizon = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 42;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_horizon, bool with_tol) {
    cmd->add_option("--scenario", opts.scenario, "built-in name or path to a scenario file")
        ->required();
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--solver", opts.solver, "rk4 or dp54 (overrides the scenario)");
    cmd->add_option("--seed", opts.seed, "seed for randomized probe states");
    cmd->add_option("--jobs", opts.jobs, "parallel workers for independent runs")
        ->check(CLI::PositiveNumber);
    if (with_horizon) cmd->add_option("--horizon", opts.horizon, "integration horizon");
    if (with_tol) cmd->add_option("--tol", opts.tol, "cycle residual tolerance");
}

Scenario load(const CommonOpts& opts) {
    Scenario scenario = load_scenario(opts.scenario);
    if (opts.solver == "rk4")
        scenario.solver.method = SolverMethod::rk4_fixed;
    else if (opts.solver == "dp54")
        scenario.solver.method = SolverMethod::dp54_adaptive;
    else if (!opts.solver.empty())
        throw ParseError("unknown --solver '" + opts.solver + "' (use rk4 or dp54)");
    return scenario;
}

double analysis_param(const Scenario& scenario, const std::string& op, const std::string& key,
                      double fallback) {
    for (const auto& request : scenario.analyses)
        if (request.op == op) {
            auto it = request.params.find(key);
            if (it != request.params.end()) return it->second;
        }
    return fallback;
}

std::string describe_growth(const GrowthEvidence& growth) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "envelope slope %.4f, %d windows, %.0f%% increasing, last/first %.1f",
                  growth.slope, growth.windows, 100.0 * growth.increasing_fraction,
                  growth.last_window_max / std::max(growth.first_window_max, 1e-300));
    return buf;
}

// runs fn(i) for i in [0, count) with up to `jobs` workers; results by index
template <typename T, typename Fn>
std::vector<T> run_indexed(int count, int jobs, Fn&& fn) {
    std::vector<T> results(count);
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::future<void>> workers;
    for (int w = 0; w < std::min(jobs, count); ++w)
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (int i = w; i < count; i += jobs) results[i] = fn(i);
        }));
    for (auto& worker : workers) worker.get();
    return results;
}

struct SimulationRun {
    Trajectory trajectory;
    bool diverged = false;
    double t_fail = 0.0;
};

int cmd_simulate(const CommonOpts& opts) {
    const Scenario scenario = load(opts);
    const double horizon = opts.horizon > 0.0
                               ? opts.horizon
                               : analysis_param(scenario, "simulate", "horizon",
                                                30.0 * scenario.model.period());

    const int n_full = static_cast<int>(scenario.full_ics.size());
    const int n_runs = n_full + static_cast<int>(scenario.reduced_ics.size());
    bool unexpected_divergence = false;

    auto runs = run_indexed<SimulationRun>(n_runs, opts.jobs, [&](int i) {
        SimulationRun run;
        try {
            run.trajectory =
                i < n_full
                    ? integrate(scenario.model, scenario.full_ics[i], 0.0, horizon,
                                scenario.solver)
                    : integrate(scenario.model, scenario.reduced_ics[i - n_full], 0.0, horizon,
                                scenario.solver);
        } catch (const DivergenceError& e) {
            run.trajectory = e.partial;
            run.diverged = true;
            run.t_fail = e.t_fail;
        }
        return run;
    });

    const fs::path out_dir(opts.out);
    std::vector<Series> shape_series, velocity_series, position_series;
    for (int i = 0; i < n_runs; ++i) {
        const Trajectory& traj = runs[i].trajectory;
        if (scenario.outputs.trajectory_csv) {
            const fs::path path = out_dir / ("trajectory_" + std::to_string(i) + ".csv");
            atomic_write_file(path, trajectory_csv(traj));
            std::printf("ic %d: %zu samples over [%g, %g] -> %s\n", i, traj.size(),
                        traj.times.front(), traj.times.back(), path.string().c_str());
        }
        if (runs[i].diverged) {
            std::printf("ic %d: non-finite state at t = %g (partial trajectory kept)\n", i,
                        runs[i].t_fail);
            if (!scenario.expected_divergence) unexpected_divergence = true;
        }
        const int n = scenario.model.block_count();
        for (int link = 0; link < n - 1; ++link) {
            Series s{"ic" + std::to_string(i) + " z" + std::to_string(link + 1), traj.times, {}};
            s.y.resize(traj.size());
            for (std::size_t j = 0; j < traj.size(); ++j) s.y[j] = traj.shape(j)[link];
            shape_series.push_back(std::move(s));
        }
        Series u{"ic" + std::to_string(i), traj.times, {}};
        u.y.resize(traj.size());
        const Vector mass_frac = scenario.model.masses() / scenario.model.total_mass();
        for (std::size_t j = 0; j < traj.size(); ++j)
            u.y[j] = mass_frac.dot(traj.velocity(j));
        velocity_series.push_back(std::move(u));
        if (traj.kind == SystemKind::full) {
            Series xb{"ic" + std::to_string(i), traj.times, {}};
            xb.y.resize(traj.size());
            for (std::size_t j = 0; j < traj.size(); ++j)
                xb.y[j] = mass_frac.dot(traj.states[j].head(scenario.model.block_count()));
            position_series.push_back(std::move(xb));
        }
    }

    if (scenario.outputs.plots_svg) {
        PlotStyle style;
        style.title = scenario.name + ": shape";
        style.y_label = "z";
        atomic_write_file(out_dir / "shape.svg", line_chart_svg(shape_series, style));
        style.title = scenario.name + ": barycenter velocity";
        style.y_label = "u";
        atomic_write_file(out_dir / "velocity.svg", line_chart_svg(velocity_series, style));
        if (!position_series.empty()) {
            style.title = scenario.name + ": barycenter position";
            style.y_label = "x";
            atomic_write_file(out_dir / "position.svg", line_chart_svg(position_series, style));
        }
        std::printf("plots -> %s\n", (out_dir / "*.svg").string().c_str());
    }

    if (scenario.expected_divergence) {
        const double window = 5.0 * scenario.model.period();
        if (horizon >= 10.0 * window) {
            AsymptoticsVerdict verdict = classify_asymptotics(
                scenario.model, scenario.all_reduced_ics()[0], horizon, window, scenario.solver);
            if (verdict.cls == AsymptoticsClass::diverging && verdict.growth)
                std::printf("note: diverging as expected (%s)\n",
                            describe_growth(*verdict.growth).c_str());
        } else {
            std::printf("note: divergence expected for this scenario\n");
        }
    }
    return unexpected_divergence ? kExitFailure : kExitOk;
}

int cmd_cycle(const CommonOpts& opts, const std::string& accel_flag) {
    const Scenario scenario = load(opts);
    const double tol =
        opts.tol > 0.0 ? opts.tol : analysis_param(scenario, "cycle", "tol", 1e-9);
    CycleAccel accel = analysis_param(scenario, "cycle", "accel_newton", 0.0) != 0.0
                           ? CycleAccel::newton
                           : CycleAccel::none;
    if (accel_flag == "newton") accel = CycleAccel::newton;
    if (accel_flag == "none") accel = CycleAccel::none;
    const int max_iters =
        static_cast<int>(analysis_param(scenario, "cycle", "max_iters", 400.0));

    const auto ics = scenario.all_reduced_ics();
    auto searches = run_indexed<CycleSearch>(
        static_cast<int>(ics.size()), opts.jobs, [&](int i) {
            return find_limit_cycle(scenario.model, ics[i], tol, max_iters, accel,
                                    scenario.solver);
        });

    bool any_failed = false;
    for (std::size_t i = 0; i < searches.size(); ++i) {
        const CycleSearch& search = searches[i];
        if (search.success) {
            std::printf("ic %zu: residual %.3e, g* = %.12f, %d iterations\n", i,
                        search.cycle->residual, search.cycle->geometric_phase,
                        search.iterations);
        } else {
            any_failed = true;
            if (search.divergence && search.divergence->growth)
                std::printf("ic %zu: no cycle, diverging (%s)\n", i,
                            describe_growth(*search.divergence->growth).c_str());
            else
                std::printf("ic %zu: no cycle (%s, last residual %.3e)\n", i,
                            search.note.c_str(), search.last_residual);
        }
    }

    double worst_gap = 0.0;
    if (!any_failed) {
        for (std::size_t a = 0; a < searches.size(); ++a)
            for (std::size_t b = a + 1; b < searches.size(); ++b)
                worst_gap = std::max(worst_gap, (searches[a].cycle->samples.front() -
                                                 searches[b].cycle->samples.front())
                                                    .cwiseAbs()
                                                    .maxCoeff());
        if (searches.size() > 1)
            std::printf("uniqueness: max pairwise gap %.3e (tolerance %.3e)\n", worst_gap,
                        100.0 * tol);
        std::printf("barycenter velocity half-period shift defect: %.3f (descriptive)\n",
                    half_period_shift_defect(scenario.model, *searches.front().cycle));

        const fs::path out_dir(opts.out);
        if (scenario.outputs.cycle_json)
            atomic_write_file(out_dir / "cycle.json",
                              cycle_to_json(*searches.front().cycle).dump(2) + "\n");
        atomic_write_file(out_dir / "cycle.csv", cycle_csv(*searches.front().cycle));
        if (scenario.outputs.plots_svg) {
            const LimitCycle& cycle = *searches.front().cycle;
            std::vector<Series> series;
            const int n = scenario.model.block_count();
            for (int link = 0; link < n - 1; ++link) {
                Series s{"z" + std::to_string(link + 1), cycle.times, {}};
                s.y.resize(cycle.samples.size());
                for (std::size_t j = 0; j < cycle.samples.size(); ++j)
                    s.y[j] = cycle.samples[j][link];
                series.push_back(std::move(s));
            }
            for (int i = 0; i < n; ++i) {
                Series s{"v" + std::to_string(i + 1), cycle.times, {}};
                s.y.resize(cycle.samples.size());
                for (std::size_t j = 0; j < cycle.samples.size(); ++j)
                    s.y[j] = cycle.samples[j][n - 1 + i];
                series.push_back(std::move(s));
            }
            PlotStyle style;
            style.title = scenario.name + ": limit cycle";
            atomic_write_file(out_dir / "cycle.svg", line_chart_svg(series, style));
        }
    }

    if (any_failed) return kExitFailure;
    return worst_gap <= 100.0 * tol ? kExitOk : kExitFailure;
}

int cmd_certify(const CommonOpts& opts, std::vector<std::string> which) {
    const Scenario scenario = load(opts);
    if (which.empty())
        for (const auto& request : scenario.analyses)
            if (request.op == "certify")
                which.insert(which.end(), request.which.begin(), request.which.end());
    if (which.empty()) throw ParseError("no certificate kinds requested (use --which)");

    const double horizon = opts.horizon > 0.0 ? opts.horizon : 20.0 * scenario.model.period();
    const auto ics = scenario.all_reduced_ics();

    std::vector<Certificate> results;
    bool precondition_failed = false;
    bool any_failed = false;
    for (const auto& kind : which) {
        try {
            if (kind == "contraction") {
                const ReducedState a = ics[0];
                const ReducedState b =
                    ics.size() > 1 ? ics[1]
                                   : random_probe_states(scenario.model.block_count(), 1, 2.0,
                                                         opts.seed)[0];
                results.push_back(contraction_diagnostics(scenario.model, a, b,
                                                          5.0 * scenario.model.period(),
                                                          scenario.solver));
            } else if (kind == "dissipativity") {
                const auto probes =
                    random_probe_states(scenario.model.block_count(), 10, 1e3, opts.seed);
                results.push_back(
                    dissipativity_certificate(scenario.model, probes, scenario.solver));
            } else if (kind == "floquet") {
                results.push_back(floquet_certificate(scenario.model, scenario.solver));
            } else if (kind == "incompetence") {
                results.push_back(incompetence_check(scenario.model, scenario.solver));
            } else if (kind == "assumption_a6" || kind == "a6") {
                results.push_back(a6_certificate(scenario.model));
            } else if (kind == "energy_balance" || kind == "energy") {
                const FullState ic =
                    scenario.full_ics.empty()
                        ? FullState{Vector::Zero(scenario.model.block_count()),
                                    Vector::Zero(scenario.model.block_count())}
                        : scenario.full_ics[0];
                const double audit = scenario.expected_divergence
                                         ? scenario.model.period()
                                         : horizon;
                results.push_back(
                    energy_balance_certificate(scenario.model, ic, audit, scenario.solver));
            } else {
                throw ParseError("unknown certificate kind '" + kind + "'");
            }
            const Certificate& cert = results.back();
            std::printf("%-14s %s", to_string(cert.kind).c_str(),
                        to_string(cert.verdict).c_str());
            if (cert.kind == CertificateKind::floquet)
                std::printf("  spectral radius %.6f", cert.measured.at("spectral_radius"));
            if (cert.kind == CertificateKind::dissipativity)
                std::printf("  delta %.4f box radius %.3g", cert.measured.at("delta"),
                            cert.measured.at("box_radius"));
            if (cert.kind == CertificateKind::contraction)
                std::printf("  mu_hat %.4f", cert.measured.at("mu_hat"));
            if (cert.kind == CertificateKind::energy_balance)
                std::printf("  max residual %.3e", cert.measured.at("max_abs_residual"));
            if (!cert.note.empty()) std::printf("  (%s)", cert.note.c_str());
            std::printf("\n");
            if (cert.verdict != Verdict::pass) any_failed = true;
        } catch (const PreconditionError& e) {
            std::printf("%-14s precondition unmet: %s\n", kind.c_str(), e.what());
            precondition_failed = true;
        }
    }

    if (scenario.outputs.certificates_json && !results.empty()) {
        json doc = json::array();
        for (const auto& cert : results) doc.push_back(certificate_to_json(cert));
        atomic_write_file(fs::path(opts.out) / "certificates.json", doc.dump(2) + "\n");
    }
    if (precondition_failed) return kExitPrecondition;
    return any_failed ? kExitFailure : kExitOk;
}

struct SweepAxis {
    std::string name;
    double lo = 1.0, hi = 1.0;
    int count = 1;
    double at(int i) const { return count < 2 ? lo : lo + (hi - lo) * i / (count - 1); }
};

TrigPoly scaled(const TrigPoly& poly, double factor) {
    std::vector<Harmonic> harmonics = poly.harmonics();
    for (auto& h : harmonics) h.amplitude *= factor;
    return TrigPoly(poly.period(), factor * poly.constant(), std::move(harmonics));
}

CrawlerModel scaled_model(const CrawlerModel& base, double stiffness_scale, double gait_scale,
                          double friction_scale) {
    std::vector<ScalarFriction> laws;
    for (const auto& law : base.friction().per_block()) {
        std::vector<FrictionTerm> terms;
        for (const auto& term : law.terms()) {
            if (const auto* v = std::get_if<ViscousTerm>(&term))
                terms.push_back(ViscousTerm{scaled(v->mu, friction_scale)});
            else if (const auto* l = std::get_if<LinearTerm>(&term))
                terms.push_back(LinearTerm{friction_scale * l->mu});
            else if (const auto* s = std::get_if<SmoothDryTerm>(&term))
                terms.push_back(SmoothDryTerm{friction_scale * s->scale, s->slope});
            else
                terms.push_back(term);  // the arctan example law has no scale knob
        }
        laws.emplace_back(std::move(terms));
    }
    GaitSignal gait;
    for (const auto& li : base.gait().rest_lengths)
        gait.rest_lengths.push_back(scaled(li, gait_scale));
    return CrawlerModel(base.masses(), stiffness_scale * base.shape_stiffness(),
                        FrictionLaw(std::move(laws)), std::move(gait), base.period());
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& params) {
    const Scenario scenario = load(opts);
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-8;

    std::vector<SweepAxis> axes;
    for (const auto& param : params) {
        SweepAxis axis;
        const auto eq = param.find('=');
        if (eq == std::string::npos) throw ParseError("--param expects name=lo:hi:count");
        axis.name = param.substr(0, eq);
        if (axis.name != "stiffness_scale" && axis.name != "gait_scale" &&
            axis.name != "friction_scale")
            throw ParseError("unknown sweep parameter '" + axis.name +
                             "' (stiffness_scale, gait_scale, friction_scale)");
        if (std::sscanf(param.c_str() + eq + 1, "%lf:%lf:%d", &axis.lo, &axis.hi,
                        &axis.count) != 3 ||
            axis.count < 1)
            throw ParseError("--param expects name=lo:hi:count");
        axes.push_back(axis);
    }
    if (axes.empty()) throw ParseError("sweep requires at least one --param");

    int total = 1;
    for (const auto& axis : axes) total *= axis.count;

    auto value_at = [&](int flat, const std::string& name) {
        double value = 1.0;
        int rest = flat;
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const int idx = rest % it->count;
            rest /= it->count;
            if (it->name == name) value = it->at(idx);
        }
        return value;
    };

    struct Row {
        double stiffness = 1.0, gait = 1.0, friction = 1.0;
        bool converged = false;
        double phase = 0.0, residual = 0.0;
        int iterations = 0;
    };
    const ReducedState ic = scenario.all_reduced_ics()[0];
    auto rows = run_indexed<Row>(total, opts.jobs, [&](int flat) {
        Row row;
        row.stiffness = value_at(flat, "stiffness_scale");
        row.gait = value_at(flat, "gait_scale");
        row.friction = value_at(flat, "friction_scale");
        const CrawlerModel model =
            scaled_model(scenario.model, row.stiffness, row.gait, row.friction);
        const CycleSearch search =
            find_limit_cycle(model, ic, tol, 300, CycleAccel::none, scenario.solver);
        row.converged = search.success;
        row.iterations = search.iterations;
        row.residual = search.success ? search.cycle->residual : search.last_residual;
        row.phase = search.success ? search.cycle->geometric_phase : 0.0;
        return row;
    });

    std::string csv = "stiffness_scale,gait_scale,friction_scale,converged,geometric_phase,"
                      "residual,iterations\n";
    char line[256];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d\n",
                      row.stiffness, row.gait, row.friction, row.converged ? 1 : 0, row.phase,
                      row.residual, row.iterations);
        csv += line;
    }
    const fs::path path = fs::path(opts.out) / "sweep.csv";
    atomic_write_file(path, csv);
    std::printf("%d sweep points -> %s\n", total, path.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a rectilinear chain crawler"};
    app.require_subcommand(1);

    CommonOpts sim_opts, cyc_opts, cert_opts, sweep_opts;
    std::string accel_flag;
    std::vector<std::string> which, sweep_params;

    CLI::App* sim = app.add_subcommand("simulate", "integrate the scenario initial conditions");
    add_common(sim, sim_opts, true, false);

    CLI::App* cyc = app.add_subcommand("cycle", "locate the relative-periodic limit cycle");
    add_common(cyc, cyc_opts, false, true);
    cyc->add_option("--accel", accel_flag, "none or newton");

    CLI::App* cert = app.add_subcommand("certify", "run numerical certificates");
    add_common(cert, cert_opts, true, false);
    cert->add_option("--which", which, "certificate kinds (comma separated)")
        ->delimiter(',');

    CLI::App* sweep = app.add_subcommand("sweep", "cycle search over a parameter grid");
    add_common(sweep, sweep_opts, false, true);
    sweep->add_option("--param", sweep_params, "axis as name=lo:hi:count (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (cyc->parsed()) return cmd_cycle(cyc_opts, accel_flag);
        if (cert->parsed()) return cmd_certify(cert_opts, which);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_params);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "precondition unmet: %s\n", e.what());
        return kExitPrecondition;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitOk;
}
