#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "trolleyloc/world.hpp"

namespace trolleyloc {

/// Scenario + grid axes as read from one configuration file. Every field has
/// a default, so an empty JSON object (or no file at all) is a valid config.
struct FileConfig {
  Scenario scenario;
  GridSpec grid;
};

/// Built-in defaults: robot at the origin facing +x, trolley 3 m ahead facing
/// away, default trolley geometry and sensor calibration, seed 42.
Scenario default_scenario();

// File schema uses meters for lengths and degrees for angles; in-memory
// structures keep radians.
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json gridspec_to_json(const GridSpec& g);
GridSpec gridspec_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const FileConfig& c);
FileConfig config_from_json(const nlohmann::json& j);

/// Parses a config file. Throws ConfigParse on a missing file, malformed JSON
/// or schema violations.
FileConfig load_config(const std::string& path);

}  // namespace trolleyloc
