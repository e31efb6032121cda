#pragma once

#include "popanchor/scenario.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace popanchor::ingest {

// Parses and validates the JSON scenario config. Paths are resolved relative
// to the config file's directory and checked for existence.
ScenarioConfig load_config(const std::filesystem::path& path);

// Loads every input file into a cross-validated scenario.
Scenario load_scenario(const ScenarioConfig& config);
Scenario load_scenario(const std::filesystem::path& config_path);

// Class of one cell from its per-category floor areas. Total and deterministic
// over non-negative area vectors.
std::string classify_cell(const std::map<std::string, double>& areas,
                          const ClassificationRules& rules);

} // namespace popanchor::ingest
