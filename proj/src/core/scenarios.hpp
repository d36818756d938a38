#pragma once

#include <string>
#include <vector>

namespace mmkit {

// Runs a named study with JSON-encoded parameters and returns a JSON report.
// Reports carry a "rows" array for tabular output plus scenario-specific
// summary fields; most carry a top-level "ok".
std::string run_scenario(const std::string& name, const std::string& params_json);

std::vector<std::string> scenario_names();

}  // namespace mmkit
