#include "crawlsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace crawlsim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw ParseError(context + ": " + message);
}

void require_object(const json& node, const std::string& context) {
    if (!node.is_object()) fail(context, "expected an object");
}

void require_keys(const json& node, std::initializer_list<const char*> allowed,
                  const std::string& context) {
    require_object(node, context);
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(context, "unknown field '" + item.key() + "'");
    }
}

const json& require_field(const json& node, const char* key, const std::string& context) {
    require_object(node, context);
    auto it = node.find(key);
    if (it == node.end()) fail(context, std::string("missing field '") + key + "'");
    return *it;
}

double get_number(const json& node, const char* key, const std::string& context) {
    const json& v = require_field(node, key, context);
    if (!v.is_number()) fail(context, std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const json& node, const char* key, double fallback,
                     const std::string& context) {
    if (!node.contains(key)) return fallback;
    return get_number(node, key, context);
}

bool get_bool_or(const json& node, const char* key, bool fallback, const std::string& context) {
    if (!node.contains(key)) return fallback;
    if (!node.at(key).is_boolean())
        fail(context, std::string("field '") + key + "' must be a boolean");
    return node.at(key).get<bool>();
}

std::string get_string_or(const json& node, const char* key, const std::string& fallback,
                          const std::string& context) {
    if (!node.contains(key)) return fallback;
    if (!node.at(key).is_string())
        fail(context, std::string("field '") + key + "' must be a string");
    return node.at(key).get<std::string>();
}

Vector get_vector(const json& node, const char* key, const std::string& context) {
    const json& v = require_field(node, key, context);
    if (!v.is_array()) fail(context, std::string("field '") + key + "' must be an array");
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(context, std::string("field '") + key + "' must be numeric");
        out[i] = v[i].get<double>();
    }
    return out;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

// ------------------------------------------------------------------ signals

json signal_to_json(const TrigPoly& poly, double period) {
    json node;
    node["constant"] = poly.constant();
    json harmonics = json::array();
    for (const auto& h : poly.harmonics()) {
        json term;
        term["amplitude"] = h.amplitude;
        term["angular_frequency"] = two_pi * h.multiple / period;
        term["phase"] = h.phase;
        harmonics.push_back(term);
    }
    node["harmonics"] = harmonics;
    return node;
}

TrigPoly signal_from_json(const json& node, double period, const std::string& context) {
    require_keys(node, {"constant", "harmonics"}, context);
    std::vector<Harmonic> harmonics;
    if (node.contains("harmonics")) {
        const json& arr = node.at("harmonics");
        if (!arr.is_array()) fail(context, "'harmonics' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string hctx = context + ".harmonics[" + std::to_string(i) + "]";
            require_keys(arr[i], {"amplitude", "angular_frequency", "phase"}, hctx);
            const double omega = get_number(arr[i], "angular_frequency", hctx);
            const double multiple = omega * period / two_pi;
            const long rounded = std::lround(multiple);
            if (rounded < 1 || std::abs(multiple - rounded) > 1e-9 * std::max(1.0, multiple))
                fail(hctx,
                     "angular_frequency must be a positive integer multiple of 2*pi/period");
            harmonics.push_back({static_cast<int>(rounded),
                                 get_number(arr[i], "amplitude", hctx),
                                 get_number_or(arr[i], "phase", 0.0, hctx)});
        }
    }
    return TrigPoly(period, get_number_or(node, "constant", 0.0, context), std::move(harmonics));
}

// ----------------------------------------------------------------- friction

json term_to_json(const FrictionTerm& term, double period) {
    json node;
    if (const auto* v = std::get_if<ViscousTerm>(&term)) {
        node["kind"] = "viscous";
        node["mu"] = signal_to_json(v->mu, period);
    } else if (const auto* l = std::get_if<LinearTerm>(&term)) {
        node["kind"] = "linear";
        node["mu"] = l->mu;
    } else if (const auto* s = std::get_if<SmoothDryTerm>(&term)) {
        node["kind"] = "smooth_dry";
        node["scale"] = s->scale;
        node["slope"] = s->slope;
    } else {
        node["kind"] = "resonance_example";
    }
    return node;
}

json law_to_json(const ScalarFriction& law, double period) {
    if (law.terms().size() == 1) return term_to_json(law.terms().front(), period);
    json node;
    node["kind"] = "sum";
    json terms = json::array();
    for (const auto& term : law.terms()) terms.push_back(term_to_json(term, period));
    node["terms"] = terms;
    return node;
}

FrictionTerm term_from_json(const json& node, double period, const std::string& context) {
    const std::string kind = get_string_or(node, "kind", "", context);
    if (kind == "viscous") {
        require_keys(node, {"kind", "mu"}, context);
        TrigPoly mu = signal_from_json(require_field(node, "mu", context), period,
                                       context + ".mu");
        return ViscousTerm{std::move(mu)};
    }
    if (kind == "linear") {
        require_keys(node, {"kind", "mu"}, context);
        return LinearTerm{get_number(node, "mu", context)};
    }
    if (kind == "smooth_dry") {
        require_keys(node, {"kind", "scale", "slope"}, context);
        return SmoothDryTerm{get_number(node, "scale", context),
                             get_number(node, "slope", context)};
    }
    if (kind == "resonance_example") {
        require_keys(node, {"kind"}, context);
        return ResonanceTerm{};
    }
    fail(context, "unknown friction kind '" + kind + "'");
}

ScalarFriction law_from_json(const json& node, double period, const std::string& context) {
    require_object(node, context);
    if (get_string_or(node, "kind", "", context) == "sum") {
        require_keys(node, {"kind", "terms"}, context);
        const json& arr = require_field(node, "terms", context);
        if (!arr.is_array() || arr.empty()) fail(context, "'terms' must be a nonempty array");
        std::vector<FrictionTerm> terms;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string tctx = context + ".terms[" + std::to_string(i) + "]";
            if (get_string_or(arr[i], "kind", "", tctx) == "sum")
                fail(tctx, "nested sums are not allowed");
            terms.push_back(term_from_json(arr[i], period, tctx));
        }
        return ScalarFriction(std::move(terms));
    }
    return ScalarFriction(term_from_json(node, period, context));
}

// -------------------------------------------------------------------- model

json model_to_json(const CrawlerModel& model) {
    json node;
    node["block_count"] = model.block_count();
    node["masses"] = vector_to_json(model.masses());
    json stiffness = json::array();
    for (Eigen::Index r = 0; r < model.shape_stiffness().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < model.shape_stiffness().cols(); ++c)
            row.push_back(model.shape_stiffness()(r, c));
        stiffness.push_back(row);
    }
    node["stiffness"] = stiffness;
    node["period"] = model.period();
    json friction = json::array();
    for (const auto& law : model.friction().per_block())
        friction.push_back(law_to_json(law, model.period()));
    node["friction"] = friction;
    json gait = json::array();
    for (const auto& li : model.gait().rest_lengths)
        gait.push_back(signal_to_json(li, model.period()));
    node["gait"] = gait;
    return node;
}

CrawlerModel model_from_json(const json& node, const std::string& context) {
    require_keys(node, {"block_count", "masses", "stiffness", "period", "friction", "gait"},
                 context);
    const double block_count = get_number(node, "block_count", context);
    const int n = static_cast<int>(block_count);
    if (n != block_count || n < 2) fail(context, "block_count must be an integer >= 2");

    const Vector masses = get_vector(node, "masses", context);
    if (masses.size() != n) fail(context, "masses must list block_count entries");

    const json& st = require_field(node, "stiffness", context);
    if (!st.is_array() || st.size() != static_cast<std::size_t>(n - 1))
        fail(context, "stiffness must be a (n-1) x (n-1) row-major matrix");
    Matrix stiffness(n - 1, n - 1);
    for (int r = 0; r < n - 1; ++r) {
        if (!st[r].is_array() || st[r].size() != static_cast<std::size_t>(n - 1))
            fail(context, "stiffness must be a (n-1) x (n-1) row-major matrix");
        for (int c = 0; c < n - 1; ++c) {
            if (!st[r][c].is_number()) fail(context, "stiffness entries must be numbers");
            stiffness(r, c) = st[r][c].get<double>();
        }
    }

    const double period = get_number(node, "period", context);
    if (!(period > 0.0)) fail(context, "period must be positive");

    const json& fr = require_field(node, "friction", context);
    if (!fr.is_array() || fr.size() != static_cast<std::size_t>(n))
        fail(context, "friction must list one law per block");
    std::vector<ScalarFriction> laws;
    for (int i = 0; i < n; ++i)
        laws.push_back(law_from_json(fr[i], period, context + ".friction[" + std::to_string(i) + "]"));

    const json& ga = require_field(node, "gait", context);
    if (!ga.is_array() || ga.size() != static_cast<std::size_t>(n - 1))
        fail(context, "gait must list one rest-length signal per link");
    GaitSignal gait;
    for (int i = 0; i < n - 1; ++i)
        gait.rest_lengths.push_back(
            signal_from_json(ga[i], period, context + ".gait[" + std::to_string(i) + "]"));

    try {
        return CrawlerModel(masses, std::move(stiffness), FrictionLaw(std::move(laws)),
                            std::move(gait), period);
    } catch (const std::invalid_argument& e) {
        fail(context, e.what());
    }
}

// ------------------------------------------------------------------- solver

json solver_to_json(const SolverSpec& spec) {
    json node;
    node["method"] =
        spec.method == SolverMethod::rk4_fixed ? "rk4_fixed" : "dp54_adaptive";
    node["step"] = spec.step;
    node["abs_tol"] = spec.abs_tol;
    node["rel_tol"] = spec.rel_tol;
    node["dense_dt"] = spec.dense_dt;
    return node;
}

SolverSpec solver_from_json(const json& node, const std::string& context) {
    require_keys(node, {"method", "step", "abs_tol", "rel_tol", "dense_dt"}, context);
    SolverSpec spec;
    const std::string method = get_string_or(node, "method", "dp54_adaptive", context);
    if (method == "rk4_fixed" || method == "rk4")
        spec.method = SolverMethod::rk4_fixed;
    else if (method == "dp54_adaptive" || method == "dp54")
        spec.method = SolverMethod::dp54_adaptive;
    else
        fail(context, "unknown solver method '" + method + "'");
    spec.step = get_number_or(node, "step", spec.step, context);
    spec.abs_tol = get_number_or(node, "abs_tol", spec.abs_tol, context);
    spec.rel_tol = get_number_or(node, "rel_tol", spec.rel_tol, context);
    spec.dense_dt = get_number_or(node, "dense_dt", spec.dense_dt, context);
    if (!(spec.step > 0.0) || !(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) ||
        spec.dense_dt < 0.0)
        fail(context, "solver step and tolerances must be positive");
    return spec;
}

// ----------------------------------------------------------------- analyses

const std::map<std::string, std::vector<const char*>>& analysis_schemas() {
    static const std::map<std::string, std::vector<const char*>> schemas = {
        {"simulate", {"op", "horizon"}},
        {"cycle", {"op", "tol", "max_iters", "accel"}},
        {"certify", {"op", "which"}},
        {"classify", {"op", "horizon", "window"}},
    };
    return schemas;
}

AnalysisRequest analysis_from_json(const json& node, const std::string& context) {
    require_object(node, context);
    AnalysisRequest request;
    request.op = get_string_or(node, "op", "", context);
    const auto schema = analysis_schemas().find(request.op);
    if (schema == analysis_schemas().end())
        fail(context, "unknown analysis op '" + request.op + "'");
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : schema->second)
            if (item.key() == key) known = true;
        if (!known) fail(context, "unknown field '" + item.key() + "' for op " + request.op);
    }
    if (request.op == "certify") {
        const json& which = require_field(node, "which", context);
        if (!which.is_array() || which.empty())
            fail(context, "'which' must be a nonempty array of certificate kinds");
        for (const auto& w : which) {
            if (!w.is_string()) fail(context, "'which' entries must be strings");
            request.which.push_back(w.get<std::string>());
        }
    } else {
        for (const auto& item : node.items()) {
            if (item.key() == "op") continue;
            if (item.key() == "accel") {
                const std::string accel = item.value().is_string()
                                              ? item.value().get<std::string>()
                                              : std::string();
                if (accel != "none" && accel != "newton")
                    fail(context, "accel must be 'none' or 'newton'");
                request.params["accel_newton"] = accel == "newton" ? 1.0 : 0.0;
                continue;
            }
            if (!item.value().is_number())
                fail(context, "field '" + item.key() + "' must be a number");
            request.params[item.key()] = item.value().get<double>();
        }
    }
    return request;
}

json analysis_to_json(const AnalysisRequest& request) {
    json node;
    node["op"] = request.op;
    if (request.op == "certify") {
        node["which"] = request.which;
        return node;
    }
    for (const auto& [key, value] : request.params) {
        if (key == "accel_newton") {
            node["accel"] = value != 0.0 ? "newton" : "none";
            continue;
        }
        node[key] = value;
    }
    return node;
}

}  // namespace

std::vector<ReducedState> Scenario::all_reduced_ics() const {
    std::vector<ReducedState> out;
    for (const auto& ic : full_ics) out.push_back(project(ic));
    for (const auto& ic : reduced_ics) out.push_back(ic);
    return out;
}

bool operator==(const Scenario& a, const Scenario& b) {
    return a.name == b.name && a.description == b.description &&
           a.schema_version == b.schema_version &&
           a.expected_divergence == b.expected_divergence && a.model == b.model &&
           a.full_ics == b.full_ics && a.reduced_ics == b.reduced_ics && a.solver == b.solver &&
           a.analyses == b.analyses && a.outputs == b.outputs;
}

Scenario scenario_from_json(const json& doc) {
    const std::string context = "scenario";
    require_keys(doc,
                 {"schema_version", "name", "description", "expected_divergence", "model",
                  "initial_conditions", "solver", "analyses", "outputs"},
                 context);
    const double version = get_number(doc, "schema_version", context);
    if (version != 1) fail(context, "unsupported schema_version (expected 1)");

    CrawlerModel model = model_from_json(require_field(doc, "model", context), "model");
    const int n = model.block_count();

    std::vector<FullState> full_ics;
    std::vector<ReducedState> reduced_ics;
    const json& ics = require_field(doc, "initial_conditions", context);
    if (!ics.is_array() || ics.empty())
        fail(context, "initial_conditions must be a nonempty array");
    for (std::size_t i = 0; i < ics.size(); ++i) {
        const std::string ictx = "initial_conditions[" + std::to_string(i) + "]";
        const json& node = ics[i];
        require_object(node, ictx);
        const bool has_x = node.contains("x"), has_z = node.contains("z");
        if (has_x == has_z) fail(ictx, "exactly one of 'x' (full) or 'z' (reduced) is required");
        const Vector v = get_vector(node, "v", ictx);
        if (v.size() != n) fail(ictx, "'v' must have one entry per block");
        if (has_x) {
            require_keys(node, {"x", "v"}, ictx);
            const Vector x = get_vector(node, "x", ictx);
            if (x.size() != n) fail(ictx, "'x' must have one entry per block");
            full_ics.push_back({x, v});
        } else {
            require_keys(node, {"z", "v"}, ictx);
            const Vector z = get_vector(node, "z", ictx);
            if (z.size() != n - 1) fail(ictx, "'z' must have n-1 entries");
            reduced_ics.push_back({z, v});
        }
    }

    SolverSpec solver;
    if (doc.contains("solver")) solver = solver_from_json(doc.at("solver"), "solver");

    std::vector<AnalysisRequest> analyses;
    if (doc.contains("analyses")) {
        const json& arr = doc.at("analyses");
        if (!arr.is_array()) fail(context, "analyses must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            analyses.push_back(
                analysis_from_json(arr[i], "analyses[" + std::to_string(i) + "]"));
    }

    OutputRequests outputs;
    if (doc.contains("outputs")) {
        const std::string octx = "outputs";
        const json& node = doc.at("outputs");
        require_keys(node, {"trajectory_csv", "cycle_json", "certificates_json", "plots_svg"},
                     octx);
        outputs.trajectory_csv = get_bool_or(node, "trajectory_csv", true, octx);
        outputs.cycle_json = get_bool_or(node, "cycle_json", true, octx);
        outputs.certificates_json = get_bool_or(node, "certificates_json", true, octx);
        outputs.plots_svg = get_bool_or(node, "plots_svg", true, octx);
    }

    Scenario scenario{get_string_or(doc, "name", "", context),
                      get_string_or(doc, "description", "", context),
                      1,
                      get_bool_or(doc, "expected_divergence", false, context),
                      std::move(model),
                      std::move(full_ics),
                      std::move(reduced_ics),
                      solver,
                      std::move(analyses),
                      outputs,
                      {}};
    scenario.assumptions = validate_assumptions(scenario.model, SamplingGrid{});
    return scenario;
}

json scenario_to_json(const Scenario& scenario) {
    json doc;
    doc["schema_version"] = scenario.schema_version;
    doc["name"] = scenario.name;
    doc["description"] = scenario.description;
    doc["expected_divergence"] = scenario.expected_divergence;
    doc["model"] = model_to_json(scenario.model);
    json ics = json::array();
    for (const auto& ic : scenario.full_ics) {
        json node;
        node["x"] = vector_to_json(ic.x);
        node["v"] = vector_to_json(ic.v);
        ics.push_back(node);
    }
    for (const auto& ic : scenario.reduced_ics) {
        json node;
        node["z"] = vector_to_json(ic.z);
        node["v"] = vector_to_json(ic.v);
        ics.push_back(node);
    }
    doc["initial_conditions"] = ics;
    doc["solver"] = solver_to_json(scenario.solver);
    json analyses = json::array();
    for (const auto& request : scenario.analyses) analyses.push_back(analysis_to_json(request));
    doc["analyses"] = analyses;
    json outputs;
    outputs["trajectory_csv"] = scenario.outputs.trajectory_csv;
    outputs["cycle_json"] = scenario.outputs.cycle_json;
    outputs["certificates_json"] = scenario.outputs.certificates_json;
    outputs["plots_svg"] = scenario.outputs.plots_svg;
    doc["outputs"] = outputs;
    return doc;
}

namespace {

TrigPoly cosine(double period, double constant, double amplitude, double phase, int multiple = 1) {
    return TrigPoly(period, constant, {{multiple, amplitude, phase}});
}

Scenario make_viscous_inching() {
    const double period = 1.0;
    // mu_1 = 2 + sin(2 pi t), mu_2 = 2 - sin(2 pi t); L_1 = 5 cos(2 pi t)
    std::vector<ScalarFriction> laws;
    laws.emplace_back(ViscousTerm{cosine(period, 2.0, 1.0, -std::numbers::pi / 2)});
    laws.emplace_back(ViscousTerm{cosine(period, 2.0, 1.0, std::numbers::pi / 2)});
    GaitSignal gait{{cosine(period, 0.0, 5.0, 0.0)}};
    CrawlerModel model(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                       FrictionLaw(std::move(laws)), std::move(gait), period);

    auto full = [](double x1, double v1, double x2, double v2) {
        Vector x(2), v(2);
        x << x1, x2;
        v << v1, v2;
        return FullState{x, v};
    };
    Scenario scenario{"viscous-inching",
                      "two-block crawler with time-dependent viscous friction; the shape "
                      "converges to a 1-periodic cycle with positive advancement per period",
                      1,
                      false,
                      std::move(model),
                      {full(1.0 / 6, -7.0, -1.0 / 6, 2.0), full(2.5, 2.0, -2.5, 3.0),
                       full(1.5, 10.0, -1.5, 1.0)},
                      {},
                      SolverSpec{},
                      {AnalysisRequest{"simulate", {{"horizon", 30.0}}, {}},
                       AnalysisRequest{"cycle", {{"tol", 1e-9}}, {}},
                       AnalysisRequest{"certify", {}, {"floquet"}}},
                      OutputRequests{},
                      {}};
    scenario.assumptions = validate_assumptions(scenario.model, SamplingGrid{});
    return scenario;
}

Scenario make_resonance() {
    const double k = 2.0, amplitude = 3.0;
    const double period = std::numbers::pi;  // forcing frequency sqrt(2k) = 2
    std::vector<ScalarFriction> laws(2, ScalarFriction(ResonanceTerm{}));
    GaitSignal gait{{cosine(period, 0.0, amplitude, 0.0)}};
    CrawlerModel model(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, k),
                       FrictionLaw(std::move(laws)), std::move(gait), period);

    Vector x(2), v(2);
    x << 0.0, 15.0;
    v << 10.0, 0.0;
    Scenario scenario{"resonance",
                      "bounded smooth-dry-type friction with the gait in internal resonance; "
                      "the shape oscillation grows without bound",
                      1,
                      true,
                      std::move(model),
                      {FullState{x, v}},
                      {},
                      SolverSpec{},
                      {AnalysisRequest{"simulate", {{"horizon", 200.0}}, {}},
                       AnalysisRequest{
                           "classify",
                           {{"horizon", 200.0}, {"window", 5.0 * std::numbers::pi}},
                           {}},
                       AnalysisRequest{"cycle", {{"tol", 1e-8}}, {}}},
                      OutputRequests{},
                      {}};
    scenario.assumptions = validate_assumptions(scenario.model, SamplingGrid{});
    return scenario;
}

Scenario make_stiff_chain() {
    const double period = 1.0;
    const int n = 4;
    // Linear friction with C_f at half the stiff-body bound 4k(1-cos(pi/3)) = 2k.
    std::vector<ScalarFriction> laws(n, ScalarFriction(LinearTerm{1.0}));
    // seeded random gait draw, frozen
    GaitSignal gait{{cosine(period, 0.0, 0.8, 0.0),
                     cosine(period, 0.0, 0.6, 2.0943951023931953),
                     cosine(period, 0.0, 0.7, 4.1887902047863905)}};
    CrawlerModel model(Vector::Constant(n, 1.0), Matrix::Identity(n - 1, n - 1),
                       FrictionLaw(std::move(laws)), std::move(gait), period);

    Vector x(n), v(n);
    x << 0.0, 0.2, 0.1, 0.25;
    v << 0.5, -0.25, 0.4, -0.3;
    Scenario scenario{"stiff-chain",
                      "four equal blocks, unit stiffness, linear friction at half the "
                      "stiff-body bound; exercises the dissipativity certificate",
                      1,
                      false,
                      std::move(model),
                      {FullState{x, v}},
                      {},
                      SolverSpec{},
                      {AnalysisRequest{"cycle", {{"tol", 1e-9}}, {}},
                       AnalysisRequest{"certify", {}, {"dissipativity", "contraction",
                                                       "assumption_a6"}}},
                      OutputRequests{},
                      {}};
    scenario.assumptions = validate_assumptions(scenario.model, SamplingGrid{});
    return scenario;
}

Scenario make_constant_gait() {
    const double period = 1.0;
    const int n = 3;
    std::vector<ScalarFriction> laws(n, ScalarFriction(LinearTerm{1.5}));
    GaitSignal gait{{TrigPoly(period, 0.5), TrigPoly(period, 0.5)}};
    CrawlerModel model(Vector::Constant(n, 1.0), 2.0 * Matrix::Identity(n - 1, n - 1),
                       FrictionLaw(std::move(laws)), std::move(gait), period);

    Vector x(n), v(n);
    x << 0.0, 0.8, 1.5;
    v << 0.0, 0.0, 0.0;
    Scenario scenario{"constant-gait",
                      "autonomous chain with constant rest lengths; the attractor is the "
                      "rest shape with zero geometric phase",
                      1,
                      false,
                      std::move(model),
                      {FullState{x, v}},
                      {},
                      SolverSpec{},
                      {AnalysisRequest{"cycle", {{"tol", 1e-10}}, {}},
                       AnalysisRequest{"certify", {}, {"incompetence"}}},
                      OutputRequests{},
                      {}};
    scenario.assumptions = validate_assumptions(scenario.model, SamplingGrid{});
    return scenario;
}

}  // namespace

std::vector<std::string> built_in_scenario_names() {
    return {"constant-gait", "resonance", "stiff-chain", "viscous-inching"};
}

Scenario built_in_scenario(const std::string& name) {
    if (name == "viscous-inching") return make_viscous_inching();
    if (name == "resonance") return make_resonance();
    if (name == "stiff-chain") return make_stiff_chain();
    if (name == "constant-gait") return make_constant_gait();
    throw ParseError("unknown built-in scenario '" + name + "'");
}

Scenario load_scenario(const std::string& name_or_path) {
    for (const auto& name : built_in_scenario_names())
        if (name == name_or_path) return built_in_scenario(name);
    std::ifstream stream(name_or_path);
    if (!stream) throw ParseError("cannot open scenario file: " + name_or_path);
    json doc;
    try {
        doc = json::parse(stream);
    } catch (const json::parse_error& e) {
        throw ParseError("failed to parse " + name_or_path + ": " + e.what());
    }
    return scenario_from_json(doc);
}

json assumption_report_to_json(const AssumptionReport& report) {
    json node;
    node["a3_holds"] = report.a3_holds;
    node["monotonicity_constant"] = report.monotonicity_constant;
    node["a4_star_holds"] = report.a4_star_holds;
    node["lipschitz_constant"] = report.lipschitz_constant;
    node["stiff_body_holds"] = report.stiff_body_holds;
    node["equal_masses"] = report.equal_masses;
    node["identical_friction"] = report.identical_friction;
    node["min_stiffness_eigenvalue"] = report.min_stiffness_eigenvalue;
    node["stiff_body_bound"] = report.stiff_body_bound;
    json witnesses = json::array();
    for (const auto& w : report.witnesses) {
        json wn;
        wn["label"] = w.label;
        wn["t"] = w.t;
        wn["value"] = w.value;
        wn["state"] = vector_to_json(w.state);
        witnesses.push_back(wn);
    }
    node["witnesses"] = witnesses;
    return node;
}

json certificate_to_json(const Certificate& cert) {
    json node;
    node["kind"] = to_string(cert.kind);
    node["verdict"] = to_string(cert.verdict);
    node["measured"] = json::object();
    for (const auto& [key, value] : cert.measured) node["measured"][key] = value;
    json witnesses = json::array();
    for (const auto& w : cert.witnesses) {
        json wn;
        wn["label"] = w.label;
        wn["t"] = w.t;
        wn["value"] = w.value;
        wn["state"] = vector_to_json(w.state);
        witnesses.push_back(wn);
    }
    node["witnesses"] = witnesses;
    node["note"] = cert.note;
    return node;
}

json cycle_to_json(const LimitCycle& cycle) {
    json node;
    node["block_count"] = cycle.block_count;
    node["period"] = cycle.period;
    node["geometric_phase"] = cycle.geometric_phase;
    node["residual"] = cycle.residual;
    node["phase_consistency"] = cycle.phase_consistency;
    node["times"] = json::array();
    node["samples"] = json::array();
    for (std::size_t j = 0; j < cycle.samples.size(); ++j) {
        node["times"].push_back(cycle.times[j]);
        node["samples"].push_back(vector_to_json(cycle.samples[j]));
    }
    return node;
}

}  // namespace crawlsim
