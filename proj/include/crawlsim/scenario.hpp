#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "crawlsim/analysis.hpp"
#include "crawlsim/model.hpp"
#include "crawlsim/solver.hpp"
#include "crawlsim/state.hpp"

namespace crawlsim {

using json = nlohmann::json;

/// One requested analysis of a scenario: op in {simulate, cycle, certify,
/// classify} plus numeric parameters and, for certify, the certificate kinds.
struct AnalysisRequest {
    std::string op;
    std::map<std::string, double> params;
    std::vector<std::string> which;

    friend bool operator==(const AnalysisRequest&, const AnalysisRequest&) = default;
};

struct OutputRequests {
    bool trajectory_csv = true;
    bool cycle_json = true;
    bool certificates_json = true;
    bool plots_svg = true;

    friend bool operator==(const OutputRequests&, const OutputRequests&) = default;
};

struct Scenario {
    std::string name;
    std::string description;
    int schema_version = 1;
    bool expected_divergence = false;
    CrawlerModel model;
    std::vector<FullState> full_ics;
    std::vector<ReducedState> reduced_ics;
    SolverSpec solver;
    std::vector<AnalysisRequest> analyses;
    OutputRequests outputs;
    /// Pre-checked structural assumptions, attached at load time.
    AssumptionReport assumptions;

    /// Initial conditions in reduced form (full ones projected).
    std::vector<ReducedState> all_reduced_ics() const;

    friend bool operator==(const Scenario& a, const Scenario& b);
};

std::vector<std::string> built_in_scenario_names();
Scenario built_in_scenario(const std::string& name);

/// Built-in name or path to a scenario file. Throws ParseError with
/// field-path diagnostics on malformed input; unknown fields are errors.
Scenario load_scenario(const std::string& name_or_path);

json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& doc);

json assumption_report_to_json(const AssumptionReport& report);
json certificate_to_json(const Certificate& cert);
json cycle_to_json(const LimitCycle& cycle);

}  // namespace crawlsim
