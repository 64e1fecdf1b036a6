// python bindings for the main operations: scenario loading, simulation,
// cycle search, certificates and asymptotic classification.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crawlsim/analysis.hpp"
#include "crawlsim/csv.hpp"
#include "crawlsim/dynamics.hpp"
#include "crawlsim/scenario.hpp"

namespace py = pybind11;
using namespace crawlsim;

namespace {

Matrix stack_states(const std::vector<Vector>& states) {
    if (states.empty()) return Matrix(0, 0);
    Matrix out(states.size(), states.front().size());
    for (std::size_t j = 0; j < states.size(); ++j) out.row(j) = states[j];
    return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
    py::dict out;
    out["kind"] = traj.kind == SystemKind::full ? "full" : "reduced";
    out["block_count"] = traj.block_count;
    out["times"] = Vector(Eigen::Map<const Vector>(traj.times.data(), traj.times.size()));
    out["states"] = stack_states(traj.states);
    out["csv"] = trajectory_csv(traj);
    return out;
}

py::dict cycle_dict(const LimitCycle& cycle) {
    py::dict out;
    out["block_count"] = cycle.block_count;
    out["period"] = cycle.period;
    out["geometric_phase"] = cycle.geometric_phase;
    out["residual"] = cycle.residual;
    out["phase_consistency"] = cycle.phase_consistency;
    out["times"] = Vector(Eigen::Map<const Vector>(cycle.times.data(), cycle.times.size()));
    out["samples"] = stack_states(cycle.samples);
    return out;
}

py::dict certificate_dict(const Certificate& cert) {
    py::dict out;
    out["kind"] = to_string(cert.kind);
    out["verdict"] = to_string(cert.verdict);
    out["measured"] = cert.measured;
    out["note"] = cert.note;
    return out;
}

ReducedState scenario_ic(const Scenario& scenario, int index) {
    const auto ics = scenario.all_reduced_ics();
    if (index < 0 || index >= static_cast<int>(ics.size()))
        throw std::out_of_range("initial-condition index out of range");
    return ics[index];
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical laboratory for a rectilinear chain crawler";

    m.def("list_scenarios", &built_in_scenario_names, "names of the built-in scenarios");

    m.def("build_projection", &build_projection, py::arg("n"),
          "shape projection matrix P with rows (..., -1, +1, ...)");

    m.def(
        "scenario_info",
        [](const std::string& name) {
            const Scenario scenario = load_scenario(name);
            py::dict out;
            out["name"] = scenario.name;
            out["description"] = scenario.description;
            out["block_count"] = scenario.model.block_count();
            out["period"] = scenario.model.period();
            out["initial_conditions"] = static_cast<int>(scenario.all_reduced_ics().size());
            out["expected_divergence"] = scenario.expected_divergence;
            py::dict assumptions;
            assumptions["a3_holds"] = scenario.assumptions.a3_holds;
            assumptions["a4_star_holds"] = scenario.assumptions.a4_star_holds;
            assumptions["monotonicity_constant"] = scenario.assumptions.monotonicity_constant;
            assumptions["lipschitz_constant"] = scenario.assumptions.lipschitz_constant;
            assumptions["stiff_body_holds"] = scenario.assumptions.stiff_body_holds;
            out["assumptions"] = assumptions;
            out["json"] = scenario_to_json(scenario).dump(2);
            return out;
        },
        py::arg("scenario"), "summary of a built-in or on-disk scenario");

    m.def(
        "simulate",
        [](const std::string& name, double horizon, int ic, bool reduced) {
            const Scenario scenario = load_scenario(name);
            if (reduced)
                return trajectory_dict(integrate(scenario.model, scenario_ic(scenario, ic), 0.0,
                                                 horizon, scenario.solver));
            if (ic < 0 || ic >= static_cast<int>(scenario.full_ics.size()))
                throw std::out_of_range("full initial-condition index out of range");
            return trajectory_dict(
                integrate(scenario.model, scenario.full_ics[ic], 0.0, horizon, scenario.solver));
        },
        py::arg("scenario"), py::arg("horizon"), py::arg("ic") = 0, py::arg("reduced") = false,
        "integrate one scenario initial condition and return the sampled trajectory");

    m.def(
        "find_cycle",
        [](const std::string& name, double tol, const std::string& accel, int ic,
           int max_iters) {
            const Scenario scenario = load_scenario(name);
            const CycleSearch search = find_limit_cycle(
                scenario.model, scenario_ic(scenario, ic), tol, max_iters,
                accel == "newton" ? CycleAccel::newton : CycleAccel::none, scenario.solver);
            py::dict out;
            out["success"] = search.success;
            out["iterations"] = search.iterations;
            out["last_residual"] = search.last_residual;
            out["note"] = search.note;
            if (search.cycle) out["cycle"] = cycle_dict(*search.cycle);
            if (search.divergence && search.divergence->growth) {
                py::dict growth;
                growth["slope"] = search.divergence->growth->slope;
                growth["windows"] = search.divergence->growth->windows;
                growth["increasing_fraction"] = search.divergence->growth->increasing_fraction;
                out["divergence"] = growth;
            }
            return out;
        },
        py::arg("scenario"), py::arg("tol") = 1e-9, py::arg("accel") = "none",
        py::arg("ic") = 0, py::arg("max_iters") = 400,
        "locate the limit cycle of the reduced dynamics by period-map iteration");

    m.def(
        "certify",
        [](const std::string& name, const std::vector<std::string>& which,
           std::uint64_t seed) {
            const Scenario scenario = load_scenario(name);
            std::vector<py::dict> out;
            for (const auto& kind : which) {
                if (kind == "contraction") {
                    const auto ics = scenario.all_reduced_ics();
                    const ReducedState b =
                        ics.size() > 1
                            ? ics[1]
                            : random_probe_states(scenario.model.block_count(), 1, 2.0, seed)[0];
                    out.push_back(certificate_dict(contraction_diagnostics(
                        scenario.model, ics[0], b, 5.0 * scenario.model.period(),
                        scenario.solver)));
                } else if (kind == "dissipativity") {
                    out.push_back(certificate_dict(dissipativity_certificate(
                        scenario.model,
                        random_probe_states(scenario.model.block_count(), 10, 1e3, seed),
                        scenario.solver)));
                } else if (kind == "floquet") {
                    out.push_back(
                        certificate_dict(floquet_certificate(scenario.model, scenario.solver)));
                } else if (kind == "incompetence") {
                    out.push_back(
                        certificate_dict(incompetence_check(scenario.model, scenario.solver)));
                } else if (kind == "assumption_a6" || kind == "a6") {
                    out.push_back(certificate_dict(a6_certificate(scenario.model)));
                } else if (kind == "energy_balance" || kind == "energy") {
                    const FullState ic =
                        scenario.full_ics.empty()
                            ? FullState{Vector::Zero(scenario.model.block_count()),
                                        Vector::Zero(scenario.model.block_count())}
                            : scenario.full_ics[0];
                    const double horizon = scenario.expected_divergence
                                               ? scenario.model.period()
                                               : 20.0 * scenario.model.period();
                    out.push_back(certificate_dict(energy_balance_certificate(
                        scenario.model, ic, horizon, scenario.solver)));
                } else {
                    throw std::invalid_argument("unknown certificate kind '" + kind + "'");
                }
            }
            return out;
        },
        py::arg("scenario"), py::arg("which"), py::arg("seed") = 42,
        "run the requested certificate kinds and return their verdict records");

    m.def(
        "classify",
        [](const std::string& name, double horizon, double window, int ic) {
            const Scenario scenario = load_scenario(name);
            const AsymptoticsVerdict verdict = classify_asymptotics(
                scenario.model, scenario_ic(scenario, ic), horizon, window, scenario.solver);
            py::dict out;
            switch (verdict.cls) {
                case AsymptoticsClass::converged_to_cycle: out["class"] = "converged_to_cycle"; break;
                case AsymptoticsClass::diverging: out["class"] = "diverging"; break;
                default: out["class"] = "undetermined";
            }
            if (verdict.cycle) out["cycle"] = cycle_dict(*verdict.cycle);
            if (verdict.growth) {
                py::dict growth;
                growth["slope"] = verdict.growth->slope;
                growth["windows"] = verdict.growth->windows;
                growth["increasing_fraction"] = verdict.growth->increasing_fraction;
                growth["first_window_max"] = verdict.growth->first_window_max;
                growth["last_window_max"] = verdict.growth->last_window_max;
                out["growth"] = growth;
            }
            return out;
        },
        py::arg("scenario"), py::arg("horizon"), py::arg("window"), py::arg("ic") = 0,
        "stroboscopic convergence vs envelope-growth classification");

    py::register_exception<ParseError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionUnmet", PyExc_RuntimeError);
}
