#pragma once
#include "rtbp/oracle.hpp"
#include "rtbp/scenario.hpp"

#include <string>

namespace rtbp {

struct ScenarioFile {
    ScenarioConfig scenario;
    oracle::IntegratorConfig integrator;
};

/// Parses a scenario document (JSON, // and /* */ comments allowed).
/// Unknown keys are rejected; missing required keys are an error.
/// Throws ConfigError on any parse or validation problem.
ScenarioFile load_scenario_file(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin);

/// Human-readable schema of the scenario document, printed by the
/// `schema` subcommand.
std::string scenario_schema_text();

} // namespace rtbp
