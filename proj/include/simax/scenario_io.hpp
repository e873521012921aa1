#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "simax/distributions.hpp"

namespace simax {

// Scenario config document:
//
//   {"name": "...", "n": 3, "per_point": [
//      {"kind": "point_mass", "x": 1, "y": 2},
//      {"kind": "finite_mixture", "atoms": [{"x": 0, "y": 1, "weight": 0.5}, ...]},
//      {"kind": "uniform_rect", "x0": 0, "x1": 1, "y0": 0, "y1": 1},
//      {"kind": "uniform_segment", "ax": 0, "ay": 0, "bx": 1, "by": 1}]}
//
// Errors are ConfigError with the JSON path of the offending field.

ScenarioSpec parse_scenario_config(std::string_view text);
std::string serialize_scenario(const ScenarioSpec& spec);

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& doc);

}  // namespace simax
