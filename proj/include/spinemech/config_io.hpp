/*
 * Copyright 2026 spine-mech authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON (de)serialization for all config types. Schemas are strict: unknown
// fields are rejected (a `_comment` string is allowed anywhere), every load
// validates invariants before returning. Angles in files are radians.

#ifndef SPINEMECH_CONFIG_IO_HPP
#define SPINEMECH_CONFIG_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinemech/linkage.hpp"
#include "spinemech/sweep.hpp"
#include "spinemech/transition.hpp"
#include "spinemech/tum.hpp"

namespace spinemech {

using json = nlohmann::json;

// A mechanism description: TUM required, linkage/friction optional sections.
struct MechanismConfig {
  TumSpec tum;
  std::optional<LinkageSpec> linkage;
  std::optional<FrictionGenerator> friction;
};

TumSpec tum_from_json(const json& j);
json to_json(const TumSpec& spec);

LinkageSpec linkage_from_json(const json& j);
json to_json(const LinkageSpec& spec);

FrictionGenerator friction_from_json(const json& j);
json to_json(const FrictionGenerator& gen);

Scenario scenario_from_json(const json& j);
json to_json(const Scenario& scenario);

SweepConfig sweep_config_from_json(const json& j);

// Objectives are optional in a sweep config; this returns the configured
// list or the default (maximize stroke_mm, minimize
// required_holding_torque_Nmm).
std::vector<Objective> objectives_from_json(const json& j);

MechanismConfig mechanism_from_json(const json& j);

// File loaders. Parse failures and schema violations throw ConfigError.
json load_json_file(const std::string& path);
MechanismConfig load_mechanism(const std::string& path);
Scenario load_scenario(const std::string& path);
SweepConfig load_sweep_config(const std::string& path);
std::vector<Objective> load_objectives(const std::string& path);

// FNV-1a 64-bit hash of a file's bytes, as 16 lowercase hex digits. Used in
// output provenance headers. Throws ConfigError when the file is unreadable.
std::string config_hash(const std::string& path);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace spinemech

#endif  // SPINEMECH_CONFIG_IO_HPP
