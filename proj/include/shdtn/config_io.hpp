#pragma once

#include <string>

#include <json.hpp>

#include "shdtn/scenario.hpp"

namespace shdtn {

// Scenario files use the presentation units GPa, g/cm^3, mm, MHz; everything
// in memory is SI. See README for the schema.
Scenario load_scenario(const std::string& path);
void write_scenario(const std::string& path, const Scenario& s);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace shdtn
