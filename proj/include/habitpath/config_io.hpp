#pragma once

// JSON scenario files. Keys mirror ScenarioConfig field-for-field; unknown
// keys are rejected with BAD_CONFIG naming the key.

#include <filesystem>

#include <json.hpp>

#include "habitpath/core.hpp"

namespace habitpath {

ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& config);

ScenarioConfig load_config(const std::filesystem::path& file);

}  // namespace habitpath
