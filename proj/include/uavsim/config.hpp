// Copyright 2026 The uavsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "uavsim/world.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace uavsim {

/// Raised for malformed or inconsistent configuration; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a scenario from JSON. Top-level sections: lattice, channel, bss,
/// uavs, targets, run. Every key is optional except the bss/uavs/targets
/// lists; unknown keys are rejected. See README.md for the key reference.
ScenarioConfig parse_config(const nlohmann::json& doc);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; emits every key.
nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace uavsim
