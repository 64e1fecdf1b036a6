#include "crawlsim/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "crawlsim/quadrature.hpp"

namespace crawlsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> component_series(const std::vector<Vector>& samples, int index) {
    std::vector<double> out(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) out[j] = samples[j][index];
    return out;
}

LimitCycle build_cycle(const CrawlerModel& model, const Vector& fixed_point,
                       const SolverSpec& spec) {
    const double period = model.period();
    const int n = model.block_count();
    const int n_out = std::max(256, resolve_output_intervals(model, spec, 0.0, period));
    OdeSolution sol = solve_ode(make_reduced_rhs(model), fixed_point, 0.0, period, spec, n_out);

    LimitCycle cycle;
    cycle.block_count = n;
    cycle.period = period;
    cycle.residual = (sol.states.back() - fixed_point).norm();
    cycle.times = std::move(sol.times);
    cycle.samples = std::move(sol.states);

    const double h = period / n_out;
    std::vector<double> integrals(n);
    for (int i = 0; i < n; ++i)
        integrals[i] = simpson(component_series(cycle.samples, n - 1 + i), h);
    cycle.geometric_phase = integrals[0];
    for (int i = 0; i < n; ++i)
        cycle.phase_consistency =
            std::max(cycle.phase_consistency, std::abs(integrals[i] - cycle.geometric_phase));
    return cycle;
}

double increasing_fraction(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    int up = 0;
    for (std::size_t j = 1; j < values.size(); ++j)
        if (values[j] > values[j - 1]) ++up;
    return static_cast<double>(up) / (values.size() - 1);
}

GrowthEvidence envelope_growth(const std::vector<double>& times, const std::vector<Vector>& states,
                               int n, double window) {
    GrowthEvidence ev;
    if (times.size() < 2) return ev;
    const double t0 = times.front();
    const int n_win =
        static_cast<int>(std::floor((times.back() - t0) / window + 1e-9));
    if (n_win < 1) return ev;
    // complete windows only; a trailing partial window is dropped
    std::vector<double> win_max(n_win, 0.0), win_mid(n_win);
    for (int w = 0; w < n_win; ++w) win_mid[w] = t0 + (w + 0.5) * window;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double offset = times[j] - t0;
        const int w = static_cast<int>(offset / window);
        if (w >= n_win) break;
        win_max[w] = std::max(win_max[w], states[j].head(n - 1).cwiseAbs().maxCoeff());
    }

    ev.windows = static_cast<int>(win_max.size());
    ev.first_window_max = win_max.front();
    ev.last_window_max = win_max.back();
    ev.increasing_fraction = increasing_fraction(win_max);
    // least-squares slope of window maxima against window midpoints
    const std::size_t m = win_max.size();
    double mt = 0.0, my = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        mt += win_mid[j];
        my += win_max[j];
    }
    mt /= m;
    my /= m;
    double cov = 0.0, var = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        cov += (win_mid[j] - mt) * (win_max[j] - my);
        var += (win_mid[j] - mt) * (win_mid[j] - mt);
    }
    ev.slope = var > 0.0 ? cov / var : 0.0;
    return ev;
}

}  // namespace

ReducedState cycle_initial_state(const LimitCycle& cycle) {
    return reduced_state_from_packed(cycle.samples.front());
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "inconclusive";
    }
}

std::string to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::contraction: return "contraction";
        case CertificateKind::dissipativity: return "dissipativity";
        case CertificateKind::floquet: return "floquet";
        case CertificateKind::incompetence: return "incompetence";
        case CertificateKind::assumption_a6: return "assumption_a6";
        default: return "energy_balance";
    }
}

ReducedState period_map(const CrawlerModel& model, const ReducedState& s, double t0,
                        const SolverSpec& spec) {
    if (s.z.size() != model.block_count() - 1 || s.v.size() != model.block_count())
        throw std::invalid_argument("period_map: state dimension mismatch");
    return reduced_state_from_packed(solve_ode_endpoint(make_reduced_rhs(model), s.packed(), t0,
                                                        t0 + model.period(), spec));
}

CycleSearch find_limit_cycle(const CrawlerModel& model, const ReducedState& s0, double tol,
                             int max_iters, CycleAccel accel, const SolverSpec& spec) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_limit_cycle: tol must be positive");
    const double period = model.period();
    const int dim = 2 * model.block_count() - 1;
    const OdeRhs rhs = make_reduced_rhs(model);
    auto map = [&](const Vector& y) {
        return solve_ode_endpoint(rhs, y, 0.0, period, spec);
    };

    CycleSearch search;
    auto classify_divergence = [&]() {
        search.divergence =
            classify_asymptotics(model, s0, 100.0 * period, 5.0 * period, spec);
        search.note = search.divergence->cls == AsymptoticsClass::diverging
                          ? "period-map residuals grow; envelope classifier reports divergence"
                          : "period-map residuals grow";
    };

    Vector s = s0.packed();
    std::vector<double> history;
    const double start_scale = 1.0 + s0.packed().norm();
    try {
        if (accel == CycleAccel::none) {
            for (int it = 1; it <= max_iters; ++it) {
                Vector next = map(s);
                const double r = (next - s).norm();
                search.last_residual = r;
                search.iterations = it;
                history.push_back(r);
                if (r < tol) {
                    search.cycle = build_cycle(model, next, spec);
                    search.success = true;
                    return search;
                }
                if (it >= 12 && history.back() > 10.0 * history.front() &&
                    increasing_fraction(history) >= 0.9) {
                    classify_divergence();
                    return search;
                }
                // residuals stall while the iterates wander off: not contracting
                if (it >= 25 && it % 25 == 0 && history.back() > 0.5 * history.front() &&
                    next.norm() > 10.0 * start_scale) {
                    classify_divergence();
                    if (search.divergence->cls == AsymptoticsClass::diverging) return search;
                    search.divergence.reset();
                }
                s.swap(next);
            }
        } else {
            for (int it = 1; it <= max_iters; ++it) {
                Vector residual = map(s) - s;
                const double rn = residual.norm();
                search.last_residual = rn;
                search.iterations = it;
                history.push_back(rn);
                if (rn < tol) {
                    search.cycle = build_cycle(model, s, spec);
                    search.success = true;
                    return search;
                }
                if (it >= 12 && history.back() > 10.0 * history.front() &&
                    increasing_fraction(history) >= 0.9) {
                    classify_divergence();
                    return search;
                }
                const double fd_step = 1e-6 * (1.0 + s.norm());
                Matrix jac(dim, dim);
                for (int j = 0; j < dim; ++j) {
                    Vector sp = s, sm = s;
                    sp[j] += fd_step;
                    sm[j] -= fd_step;
                    jac.col(j) = ((map(sp) - sp) - (map(sm) - sm)) / (2.0 * fd_step);
                }
                Vector delta = jac.partialPivLu().solve(-residual);
                if (!delta.allFinite()) {
                    search.note = "newton step is not finite (singular period-map Jacobian)";
                    return search;
                }
                double damping = 1.0;
                bool accepted = false;
                for (int k = 0; k < 7; ++k) {
                    Vector trial = s + damping * delta;
                    if ((map(trial) - trial).norm() < rn) {
                        s.swap(trial);
                        accepted = true;
                        break;
                    }
                    damping *= 0.5;
                }
                if (!accepted) {
                    search.note = "damped newton stalled";
                    return search;
                }
            }
        }
    } catch (const DivergenceError&) {
        classify_divergence();
        return search;
    } catch (const OdeDivergence&) {
        classify_divergence();
        return search;
    }
    // exhausted the budget: decide between a slow transient and divergence
    classify_divergence();
    if (search.divergence->cls != AsymptoticsClass::diverging) {
        search.divergence.reset();
        search.note = "max_iters exceeded";
    }
    return search;
}

double geometric_phase(const LimitCycle& cycle) {
    if (cycle.samples.size() < 3) throw std::invalid_argument("geometric_phase: empty cycle");
    const int n = cycle.block_count;
    const double h = cycle.period / (cycle.samples.size() - 1);
    const double g = simpson(component_series(cycle.samples, n - 1), h);
    double defect = 0.0;
    for (int i = 1; i < n; ++i)
        defect = std::max(defect,
                          std::abs(simpson(component_series(cycle.samples, n - 1 + i), h) - g));
    if (defect > 100.0 * quadrature_tolerance)
        throw InconsistentCycleError("geometric_phase: the per-block phase integrals disagree by " +
                                     std::to_string(defect));
    return g;
}

Certificate contraction_diagnostics(const CrawlerModel& model, const ReducedState& s_a,
                                    const ReducedState& s_b, double horizon,
                                    const SolverSpec& spec) {
    if (!(horizon >= model.period()))
        throw std::invalid_argument("contraction_diagnostics: horizon must cover one period");
    const int n = model.block_count();
    const int m = 2 * n - 1;

    const AssumptionReport report = validate_assumptions(model, SamplingGrid{});
    const double mu_hat = report.monotonicity_constant;
    const double c_mass = 1.0 / model.masses().maxCoeff();

    const OdeRhs reduced = make_reduced_rhs(model);
    OdeRhs doubled = [reduced, m](double t, const Vector& y, Vector& dy) {
        dy.resize(2 * m);
        Vector half(m), dhalf(m);
        half = y.head(m);
        reduced(t, half, dhalf);
        dy.head(m) = dhalf;
        half = y.tail(m);
        reduced(t, half, dhalf);
        dy.tail(m) = dhalf;
    };

    Vector y0(2 * m);
    y0 << s_a.packed(), s_b.packed();
    const int n_out = std::max(128, resolve_output_intervals(model, spec, 0.0, horizon));

    Certificate cert;
    cert.kind = CertificateKind::contraction;
    cert.measured["mu_hat"] = mu_hat;

    OdeSolution sol;
    try {
        sol = solve_ode(doubled, y0, 0.0, horizon, spec, n_out);
    } catch (const OdeDivergence& d) {
        cert.verdict = Verdict::inconclusive;
        cert.note = "integration of the doubled system diverged";
        cert.measured["diverged_at"] = d.t_fail;
        return cert;
    }

    const Matrix& stiffness = model.shape_stiffness();
    const Matrix& projection = model.projection();
    double e_prev = 0.0, e0 = 0.0;
    double max_mono_violation = -kInf, max_diss_violation = -kInf;
    Witness mono_witness, diss_witness;
    Vector dvdot(n);
    for (std::size_t j = 0; j < sol.states.size(); ++j) {
        const double t = sol.times[j];
        const Vector& y = sol.states[j];
        const Vector dz = y.head(n - 1) - y.segment(m, n - 1);
        const Vector dv = y.segment(n - 1, n) - y.tail(n);

        const double energy =
            0.5 * dv.dot(model.masses().cwiseProduct(dv)) + 0.5 * dz.dot(stiffness * dz);
        if (j == 0) {
            e0 = energy;
            cert.measured["energy_initial"] = e0;
            cert.measured["separation_initial"] = std::sqrt(dz.squaredNorm() + dv.squaredNorm());
            cert.measured["psi_initial"] =
                mu_hat * c_mass * dv.dot(model.masses().cwiseProduct(dv));
        } else {
            const double viol = energy - e_prev;
            if (viol > max_mono_violation) {
                max_mono_violation = viol;
                mono_witness = {"energy_increase", t, viol, y};
            }
        }
        e_prev = energy;

        // dE/dt along the numerical orbit, via the right-hand side
        Vector ya(m), da(m), db(m);
        ya = y.head(m);
        reduced(t, ya, da);
        ya = y.tail(m);
        reduced(t, ya, db);
        dvdot = da.tail(n) - db.tail(n);
        const double edot = dv.dot(model.masses().cwiseProduct(dvdot)) +
                            (stiffness * dz).dot(projection * dv);
        const double viol = edot + mu_hat * dv.squaredNorm();
        if (viol > max_diss_violation) {
            max_diss_violation = viol;
            diss_witness = {"dissipation_inequality", t, viol, y};
        }

        if (j + 1 == sol.states.size()) {
            cert.measured["energy_final"] = energy;
            cert.measured["separation_final"] = std::sqrt(dz.squaredNorm() + dv.squaredNorm());
            cert.measured["psi_final"] =
                mu_hat * c_mass * dv.dot(model.masses().cwiseProduct(dv));
        }
    }

    const double mono_slack = 1e-10 * (1.0 + e0);
    const double diss_slack = 1e-7 * (1.0 + e0);
    cert.measured["max_energy_increase"] = max_mono_violation;
    cert.measured["max_dissipation_defect"] = max_diss_violation;
    cert.measured["dissipation_slack"] = diss_slack;
    cert.witnesses.push_back(mono_witness);
    cert.witnesses.push_back(diss_witness);

    const bool degenerate_pair = cert.measured["separation_initial"] < 1e-14;
    const bool mono_ok = max_mono_violation <= mono_slack;
    const bool diss_ok = max_diss_violation <= diss_slack;
    const bool shrunk = degenerate_pair ||
                        cert.measured["separation_final"] < cert.measured["separation_initial"];

    if (!mono_ok || !diss_ok) {
        cert.verdict = Verdict::fail;
        cert.note = !diss_ok ? "dissipation inequality violated" : "energy increased along orbit";
    } else if (mu_hat <= 0.0) {
        cert.verdict = Verdict::inconclusive;
        cert.note = "strong monotonicity not certified (mu_hat = 0)";
    } else if (!shrunk) {
        cert.verdict = Verdict::fail;
        cert.note = "terminal separation did not shrink";
    } else {
        cert.verdict = Verdict::pass;
    }
    return cert;
}

Matrix monodromy_matrix(const CrawlerModel& model, const SolverSpec& spec) {
    if (!model.friction().is_viscous())
        throw PreconditionError("monodromy_matrix: requires viscous friction");
    const int n = model.block_count();
    const int m = 2 * n - 1;
    const Matrix projection = model.projection();
    const Matrix proj_stiffness = projection.transpose() * model.shape_stiffness();
    const Vector masses = model.masses();
    const FrictionLaw friction = model.friction();

    OdeRhs fundamental = [=](double t, const Vector& y, Vector& dy) {
        dy.resize(m * m);
        const Vector mu = friction.viscous_mu(t);
        for (int col = 0; col < m; ++col) {
            const auto z = y.segment(col * m, n - 1);
            const auto v = y.segment(col * m + n - 1, n);
            dy.segment(col * m, n - 1) = projection * v;
            dy.segment(col * m + n - 1, n) =
                (-mu.cwiseProduct(v) - proj_stiffness * z).cwiseQuotient(masses);
        }
    };

    Vector y0 = Vector::Zero(m * m);
    for (int i = 0; i < m; ++i) y0[i * m + i] = 1.0;
    const Vector yT = solve_ode_endpoint(fundamental, y0, 0.0, model.period(), spec);
    Matrix monodromy(m, m);
    for (int col = 0; col < m; ++col) monodromy.col(col) = yT.segment(col * m, m);
    return monodromy;
}

Certificate floquet_certificate(const CrawlerModel& model, const SolverSpec& spec) {
    SolverSpec tight = spec;
    tight.method = SolverMethod::dp54_adaptive;
    tight.abs_tol = std::min(spec.abs_tol, 1e-10);
    tight.rel_tol = std::min(spec.rel_tol, 1e-10);

    const Matrix monodromy = monodromy_matrix(model, tight);
    Eigen::EigenSolver<Matrix> es(monodromy);
    std::vector<std::complex<double>> multipliers(es.eigenvalues().data(),
                                                  es.eigenvalues().data() + monodromy.rows());
    std::sort(multipliers.begin(), multipliers.end(), [](const auto& a, const auto& b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    Certificate cert;
    cert.kind = CertificateKind::floquet;
    const double rho = std::abs(multipliers.front());
    cert.measured["spectral_radius"] = rho;
    cert.measured["decay_rate"] = -std::log(rho) / model.period();
    cert.measured["unit_circle_margin"] = 1.0 - rho;
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        cert.measured["multiplier_" + std::to_string(i) + "_re"] = multipliers[i].real();
        cert.measured["multiplier_" + std::to_string(i) + "_im"] = multipliers[i].imag();
    }
    cert.verdict = rho < 1.0 ? Verdict::pass : Verdict::fail;
    if (cert.verdict == Verdict::fail)
        cert.note = "a characteristic multiplier has modulus >= 1";
    return cert;
}

Certificate dissipativity_certificate(const CrawlerModel& model,
                                      const std::vector<ReducedState>& probes,
                                      const SolverSpec& spec) {
    const AssumptionReport report = validate_assumptions(model, SamplingGrid{});
    if (!report.equal_masses)
        throw PreconditionError("dissipativity_certificate: masses are not all equal");
    if (!report.identical_friction)
        throw PreconditionError("dissipativity_certificate: friction laws differ across blocks");
    if (!(report.lipschitz_constant < report.stiff_body_bound))
        throw PreconditionError(
            "dissipativity_certificate: stiff-body bound violated (C_f = " +
            std::to_string(report.lipschitz_constant) +
            " >= 4k(1-cos(pi/(n-1))) = " + std::to_string(report.stiff_body_bound) + ")");
    if (!(report.monotonicity_constant > 0.0))
        throw PreconditionError(
            "dissipativity_certificate: strong monotonicity constant is zero");

    const int n = model.block_count();
    const double mbar = model.mean_mass();
    const double k = model.min_stiffness_eigenvalue();
    const double mu_hat = report.monotonicity_constant;
    const double c_f = report.lipschitz_constant;

    const Matrix shape_op = shape_operator(model);
    const Matrix shape_sym = 0.5 * (shape_op + shape_op.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es_shape(shape_sym, Eigen::EigenvaluesOnly);
    const double lambda_min = es_shape.eigenvalues()(0);
    const double shape_norm = shape_op.jacobiSvd().singularValues()(0);

    const double bound1 = 2.0 * mu_hat * k / (2.0 * mbar + c_f);
    const double bound2 = 0.5 * k;
    const double bound3 = 0.5 * k * lambda_min;
    const double delta = 0.9 * std::min({bound1, bound2, bound3});

    // quadratic form of V(z, zdot)
    const int d = n - 1;
    Matrix form(2 * d, 2 * d);
    form.setZero();
    form.topLeftCorner(d, d) = 0.5 * shape_sym;
    form.bottomRightCorner(d, d) = 0.5 * Matrix::Identity(d, d);
    form.topRightCorner(d, d) = (0.5 * delta / k) * Matrix::Identity(d, d);
    form.bottomLeftCorner(d, d) = (0.5 * delta / k) * Matrix::Identity(d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es_form(form);
    const double form_min = es_form.eigenvalues()(0);
    const double form_max = es_form.eigenvalues()(2 * d - 1);

    const double coeff_zdot = -mu_hat / mbar + (delta / k) * (1.0 + 0.5 * c_f / mbar);
    const double coeff_z = (delta / k) * (0.5 * c_f / mbar - lambda_min);

    // linear term bound and the sublevel set capturing the dynamics
    const double c1 = shape_norm * model.gait().norm_bound() * std::max(1.0, delta / k);
    const double c_min = std::min(-coeff_zdot, -coeff_z);
    const double r1 =
        (std::sqrt(2.0) * c1 + std::sqrt(2.0 * c1 * c1 + 4.0 * c_min)) / (2.0 * c_min);
    const double level = form_max * r1 * r1;  // M1 = max V on {Vdot >= -1}
    const double box_radius = std::sqrt(level / form_min);

    const Matrix q_matrix = barycentric_offset_matrix(model);
    const double q_row_norm = q_matrix.rowwise().norm().maxCoeff();
    const double box_velocity = q_row_norm * box_radius + 1.0;  // c2 + 1

    Certificate cert;
    cert.kind = CertificateKind::dissipativity;
    cert.measured["delta"] = delta;
    cert.measured["delta_bound_monotonicity"] = bound1;
    cert.measured["delta_bound_half_k"] = bound2;
    cert.measured["delta_bound_lambda_min"] = bound3;
    cert.measured["lambda_min_shape_operator"] = lambda_min;
    // candidate analytic lower bounds for lambda_min (tridiagonal spectrum
    // conventions differ in the literature); the numeric value is what the
    // certificate actually uses
    cert.measured["lambda_min_bound_pi_over_n"] =
        2.0 * k / mbar * (1.0 - std::cos(std::numbers::pi / n));
    cert.measured["lambda_min_bound_pi_over_n_minus_1"] =
        2.0 * k / mbar * (1.0 - std::cos(std::numbers::pi / (n - 1)));
    cert.measured["coeff_zdot_sq"] = coeff_zdot;
    cert.measured["coeff_z_sq"] = coeff_z;
    cert.measured["skewed_energy_min_eig"] = form_min;
    cert.measured["sublevel_value"] = level;
    cert.measured["box_radius"] = box_radius;
    cert.measured["box_velocity"] = box_velocity;
    cert.measured["probe_count"] = static_cast<double>(probes.size());

    const bool posdef = form_min > 0.0;
    const bool coeffs_negative = coeff_zdot < 0.0 && coeff_z < 0.0;

    auto skewed_energy = [&](const Vector& z, const Vector& zdot) {
        return 0.5 * zdot.squaredNorm() + 0.5 * z.dot(shape_op * z) +
               (delta / k) * z.dot(zdot);
    };
    const Matrix projection = model.projection();
    const Vector mass_frac = model.masses() / model.total_mass();

    const double probe_horizon = 100.0 * model.period();
    SolverSpec probe_spec = spec;
    if (probe_spec.dense_dt <= 0.0) probe_spec.dense_dt = model.period() / 32.0;

    bool probes_ok = true;
    double worst_entry = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        Trajectory traj;
        try {
            traj = integrate(model, probes[p], 0.0, probe_horizon, probe_spec);
        } catch (const DivergenceError& blowup) {
            probes_ok = false;
            cert.witnesses.push_back({"probe_diverged", blowup.t_fail, 0.0, probes[p].packed()});
            break;
        }
        bool entered = false;
        double entry_time = 0.0;
        double v_prev = 0.0;
        bool stayed = true;
        for (std::size_t j = 0; j < traj.size(); ++j) {
            const Vector z = traj.states[j].head(n - 1);
            const Vector zdot = projection * Vector(traj.states[j].tail(n));
            const double u = mass_frac.dot(traj.states[j].tail(n));
            const double value = skewed_energy(z, zdot);
            const bool inside = value <= level && std::abs(u) <= box_velocity;
            if (!entered && inside) {
                entered = true;
                entry_time = traj.times[j];
            } else if (entered && !inside) {
                stayed = false;
                cert.witnesses.push_back({"probe_left_box", traj.times[j], value,
                                          traj.states[j]});
                break;
            }
            if (!entered && j > 0 && value > level && v_prev > level &&
                value > v_prev + 1e-9 * (1.0 + v_prev)) {
                cert.witnesses.push_back(
                    {"skewed_energy_increase_outside_sublevel", traj.times[j], value - v_prev,
                     traj.states[j]});
                probes_ok = false;
            }
            v_prev = value;
        }
        if (!entered || !stayed) {
            probes_ok = false;
            if (!entered)
                cert.witnesses.push_back({"probe_never_entered_box", probe_horizon, 0.0,
                                          probes[p].packed()});
        }
        worst_entry = std::max(worst_entry, entry_time);
        if (!probes_ok) break;
    }
    cert.measured["max_entry_time"] = worst_entry;
    cert.measured["probe_horizon"] = probe_horizon;

    if (posdef && coeffs_negative && probes_ok) {
        cert.verdict = Verdict::pass;
    } else {
        cert.verdict = Verdict::fail;
        if (!posdef)
            cert.note = "skewed energy is not positive definite";
        else if (!coeffs_negative)
            cert.note = "a quadratic decay coefficient is nonnegative";
        else
            cert.note = "a probe trajectory escaped the reported compact set";
    }
    return cert;
}

Certificate incompetence_check(const CrawlerModel& model, const SolverSpec& spec) {
    if (!model.friction().is_viscous() || !model.friction().time_independent())
        throw PreconditionError(
            "incompetence_check: requires time-independent viscous friction");

    Certificate cert;
    cert.kind = CertificateKind::incompetence;

    const int n = model.block_count();
    ReducedState start{model.gait().value(0.0), Vector::Zero(n)};
    CycleSearch search = find_limit_cycle(model, start, 1e-10, 400, CycleAccel::none, spec);
    if (!search.success) {
        cert.verdict = Verdict::inconclusive;
        cert.note = "limit cycle search failed: " + search.note;
        cert.measured["cycle_residual"] = search.last_residual;
        return cert;
    }
    const LimitCycle& cycle = *search.cycle;
    cert.measured["cycle_residual"] = cycle.residual;
    cert.measured["geometric_phase"] = cycle.geometric_phase;

    const Vector mass_frac = model.masses() / model.total_mass();
    std::vector<double> u_series(cycle.samples.size());
    for (std::size_t j = 0; j < cycle.samples.size(); ++j)
        u_series[j] = mass_frac.dot(cycle.samples[j].tail(n));
    const double h = cycle.period / (cycle.samples.size() - 1);
    const double mean_u = simpson(u_series, h) / cycle.period;
    cert.measured["mean_barycenter_velocity"] = mean_u;

    // 50-period barycenter drift of a generic solution (started at rest)
    const double horizon = 50.0 * model.period();
    SolverSpec drift_spec = spec;
    if (drift_spec.dense_dt <= 0.0) drift_spec.dense_dt = model.period() / 64.0;
    FullState rest{Vector::Zero(n), Vector::Zero(n)};
    Trajectory traj = integrate(model, rest, 0.0, horizon, drift_spec);
    CenterOfMass com = center_of_mass(model, traj);
    const double drift_rate = std::abs(com.xbar.back() - com.xbar.front()) / horizon;
    cert.measured["drift_rate"] = drift_rate;

    const bool mean_ok = std::abs(mean_u) < 1e-7;
    const bool drift_ok = drift_rate < 1e-5;
    cert.verdict = mean_ok && drift_ok ? Verdict::pass : Verdict::fail;
    if (!mean_ok)
        cert.note = "mean barycenter velocity on the cycle is nonzero";
    else if (!drift_ok)
        cert.note = "barycenter drift rate did not vanish";
    return cert;
}

Certificate energy_balance_certificate(const CrawlerModel& model, const FullState& ic,
                                       double horizon, const SolverSpec& spec) {
    Certificate cert;
    cert.kind = CertificateKind::energy_balance;
    Trajectory traj = integrate(model, ic, 0.0, horizon, spec);
    const EnergyLedger ledger = energy_ledger(model, traj);
    cert.measured["max_abs_residual"] = ledger.max_abs_residual;
    cert.measured["initial_energy"] = ledger.initial_energy;
    cert.measured["gronwall_bound"] = ledger.gronwall_bound;
    cert.verdict = ledger.max_abs_residual < 1e-6 ? Verdict::pass : Verdict::fail;
    if (cert.verdict == Verdict::fail) cert.note = "energy balance residual above 1e-6";
    return cert;
}

Certificate a6_certificate(const CrawlerModel& model) {
    const AssumptionReport report = validate_assumptions(model, SamplingGrid{});
    Certificate cert;
    cert.kind = CertificateKind::assumption_a6;
    cert.measured["mu_hat"] = report.monotonicity_constant;
    cert.measured["lipschitz_constant"] = report.lipschitz_constant;
    cert.measured["min_stiffness_eigenvalue"] = report.min_stiffness_eigenvalue;
    cert.measured["stiff_body_bound"] = report.stiff_body_bound;
    cert.measured["equal_masses"] = report.equal_masses ? 1.0 : 0.0;
    cert.measured["identical_friction"] = report.identical_friction ? 1.0 : 0.0;
    cert.verdict = report.stiff_body_holds ? Verdict::pass : Verdict::fail;
    if (!report.stiff_body_holds) {
        if (!report.equal_masses)
            cert.note = "masses differ";
        else if (!report.identical_friction)
            cert.note = "friction laws differ across blocks";
        else
            cert.note = "Lipschitz constant exceeds the stiff-body bound";
    }
    return cert;
}

AsymptoticsVerdict classify_asymptotics(const CrawlerModel& model, const ReducedState& s0,
                                        double horizon, double window, const SolverSpec& spec,
                                        const ClassifyOptions& options) {
    const double period = model.period();
    if (!(window >= period))
        throw std::invalid_argument("classify_asymptotics: window must cover one period");
    if (!(horizon >= 10.0 * window))
        throw std::invalid_argument("classify_asymptotics: horizon must cover 10 windows");

    const int n = model.block_count();
    const int periods = static_cast<int>(std::floor(horizon / period + 1e-9));
    const int per_period = 64;
    SolverSpec run_spec = spec;
    run_spec.dense_dt = period / per_period;

    AsymptoticsVerdict verdict;
    std::vector<double> times;
    std::vector<Vector> states;
    bool hard_divergence = false;
    try {
        Trajectory traj = integrate(model, s0, 0.0, periods * period, run_spec);
        times = std::move(traj.times);
        states = std::move(traj.states);
    } catch (const DivergenceError& d) {
        times = std::move(d.partial.times);
        states = std::move(d.partial.states);
        hard_divergence = true;
        verdict.note = "non-finite state reached at t=" + std::to_string(d.t_fail);
    }

    if (!hard_divergence) {
        // stroboscopic Cauchy test on the last few period samples
        int cauchy_run = 0;
        int converged_at = -1;
        for (int p = 1; p <= periods; ++p) {
            const double diff = (states[static_cast<std::size_t>(p) * per_period] -
                                 states[static_cast<std::size_t>(p - 1) * per_period])
                                    .cwiseAbs()
                                    .maxCoeff();
            cauchy_run = diff < options.cauchy_tol ? cauchy_run + 1 : 0;
            if (cauchy_run >= 3) {
                converged_at = p;
                break;
            }
        }
        if (converged_at >= 0) {
            const Vector anchor = states[static_cast<std::size_t>(converged_at) * per_period];
            CycleSearch search = find_limit_cycle(model, reduced_state_from_packed(anchor),
                                                  options.cauchy_tol, 50, CycleAccel::none, spec);
            if (search.success) {
                verdict.cls = AsymptoticsClass::converged_to_cycle;
                verdict.cycle = std::move(search.cycle);
                return verdict;
            }
            verdict.note = "stroboscopic samples are Cauchy but cycle polishing failed";
            return verdict;
        }
    }

    if (times.size() >= 2 && times.back() - times.front() >= 2.0 * window) {
        GrowthEvidence growth = envelope_growth(times, states, n, window);
        if (growth.windows >= 3 && growth.increasing_fraction >= options.growth_fraction &&
            growth.last_window_max >= options.growth_ratio * growth.first_window_max) {
            verdict.cls = AsymptoticsClass::diverging;
            verdict.growth = growth;
            return verdict;
        }
        if (hard_divergence) {
            // blew up before the window statistics could mature
            verdict.cls = AsymptoticsClass::diverging;
            verdict.growth = growth;
            return verdict;
        }
    }
    verdict.cls = AsymptoticsClass::undetermined;
    return verdict;
}

double half_period_shift_defect(const CrawlerModel& model, const LimitCycle& cycle) {
    const std::size_t m = cycle.samples.size() - 1;
    if (m < 4) throw std::invalid_argument("half_period_shift_defect: cycle grid too coarse");
    const Vector mass_frac = model.masses() / model.total_mass();
    std::vector<double> u(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
        u[j] = mass_frac.dot(cycle.samples[j].tail(model.block_count()));
    const std::size_t half = m / 2;
    double defect = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
        defect = std::max(defect, std::abs(u[j + half] - u[j]));
        scale = std::max(scale, std::abs(u[j]));
    }
    return scale > 0.0 ? defect / scale : defect;
}

std::vector<ReducedState> random_probe_states(int block_count, int count, double max_norm,
                                              std::uint64_t seed) {
    if (block_count < 2 || count < 1)
        throw std::invalid_argument("random_probe_states: invalid arguments");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<ReducedState> probes;
    probes.reserve(count);
    const int dim = 2 * block_count - 1;
    for (int i = 0; i < count; ++i) {
        Vector y(dim);
        for (int j = 0; j < dim; ++j) y[j] = normal(rng);
        y *= (max_norm * (i + 1) / count) / y.norm();
        probes.push_back(reduced_state_from_packed(y));
    }
    return probes;
}

}  // namespace crawlsim
