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

#include "spinemech/config_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "spinemech/errors.hpp"

namespace spinemech {

namespace {

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
}

// Strict schema: every present key must be in `allowed`; `_comment` entries
// are ignored everywhere.
void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (item.key() == "_comment") continue;
    if (ok.find(item.key()) == ok.end()) {
      throw ConfigError(ctx + ": unknown field '" + item.key() + "'");
    }
  }
}

double get_number(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& ctx, const char* key,
                     double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(ctx + "." + key + ": expected integer");
  return v.get<int>();
}

int get_int_or(const json& j, const std::string& ctx, const char* key,
               int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(ctx + "." + key + ": expected integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& ctx,
                       const char* key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(ctx + "." + key + ": expected string");
  return v.get<std::string>();
}

bool get_bool(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key))
    throw ConfigError(ctx + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_boolean())
    throw ConfigError(ctx + "." + key + ": expected boolean");
  return v.get<bool>();
}

ParamRange range_from_json(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  check_keys(j, ctx, {"min", "max", "steps"});
  ParamRange r;
  r.min = get_number(j, ctx, "min");
  r.max = get_number_or(j, ctx, "max", r.min);
  r.steps = get_int_or(j, ctx, "steps", 1);
  if (r.steps < 1) throw ConfigError(ctx + ".steps: must be >= 1");
  return r;
}

}  // namespace

TumSpec tum_from_json(const json& j) {
  const std::string ctx = "tum";
  require_object(j, ctx);
  check_keys(j, ctx,
             {"radius_R", "strip_length_L", "n_strips", "strip_width_w1",
              "top_plate_thickness_w2", "bottom_plate_thickness_w3",
              "youngs_modulus_E", "second_moment_I", "max_rotation_theta_max"});
  TumSpec spec;
  spec.radius_R = get_number(j, ctx, "radius_R");
  spec.strip_length_L = get_number(j, ctx, "strip_length_L");
  spec.n_strips = get_int(j, ctx, "n_strips");
  spec.strip_width_w1 = get_number(j, ctx, "strip_width_w1");
  spec.top_plate_thickness_w2 = get_number(j, ctx, "top_plate_thickness_w2");
  spec.bottom_plate_thickness_w3 =
      get_number(j, ctx, "bottom_plate_thickness_w3");
  spec.youngs_modulus_E = get_number(j, ctx, "youngs_modulus_E");
  spec.second_moment_I = get_number(j, ctx, "second_moment_I");
  spec.max_rotation_theta_max = get_number(j, ctx, "max_rotation_theta_max");
  validate(spec);
  return spec;
}

json to_json(const TumSpec& spec) {
  json j;
  j["radius_R"] = spec.radius_R;
  j["strip_length_L"] = spec.strip_length_L;
  j["n_strips"] = spec.n_strips;
  j["strip_width_w1"] = spec.strip_width_w1;
  j["top_plate_thickness_w2"] = spec.top_plate_thickness_w2;
  j["bottom_plate_thickness_w3"] = spec.bottom_plate_thickness_w3;
  j["youngs_modulus_E"] = spec.youngs_modulus_E;
  j["second_moment_I"] = spec.second_moment_I;
  j["max_rotation_theta_max"] = spec.max_rotation_theta_max;
  return j;
}

LinkageSpec linkage_from_json(const json& j) {
  const std::string ctx = "linkage";
  require_object(j, ctx);
  check_keys(j, ctx,
             {"offset_a", "offset_b", "offset_c", "link_R1", "link_R2",
              "tum_length_L", "branch"});
  LinkageSpec spec;
  spec.offset_a = get_number(j, ctx, "offset_a");
  spec.offset_b = get_number(j, ctx, "offset_b");
  spec.offset_c = get_number(j, ctx, "offset_c");
  spec.link_R1 = get_number(j, ctx, "link_R1");
  spec.link_R2 = get_number(j, ctx, "link_R2");
  spec.tum_length_L = get_number(j, ctx, "tum_length_L");
  if (j.contains("branch")) {
    const std::string b = get_string(j, ctx, "branch");
    if (b == "open-forward") {
      spec.branch = Branch::kOpenForward;
    } else if (b == "open-back") {
      spec.branch = Branch::kOpenBack;
    } else {
      throw ConfigError(
          ctx + ".branch: expected 'open-forward' or 'open-back', got '" + b +
          "'");
    }
  }
  validate(spec);
  return spec;
}

json to_json(const LinkageSpec& spec) {
  json j;
  j["offset_a"] = spec.offset_a;
  j["offset_b"] = spec.offset_b;
  j["offset_c"] = spec.offset_c;
  j["link_R1"] = spec.link_R1;
  j["link_R2"] = spec.link_R2;
  j["tum_length_L"] = spec.tum_length_L;
  j["branch"] =
      spec.branch == Branch::kOpenForward ? "open-forward" : "open-back";
  return j;
}

FrictionGenerator friction_from_json(const json& j) {
  const std::string ctx = "friction";
  require_object(j, ctx);
  check_keys(j, ctx, {"tau_static", "tau_kinetic", "calibration"});
  FrictionGenerator gen;
  gen.tau_static = get_number(j, ctx, "tau_static");
  gen.tau_kinetic = get_number(j, ctx, "tau_kinetic");
  if (j.contains("calibration")) {
    const json& rows = j.at("calibration");
    if (!rows.is_array())
      throw ConfigError(ctx + ".calibration: expected array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rctx = ctx + ".calibration[" + std::to_string(i) + "]";
      const json& row = rows[i];
      require_object(row, rctx);
      check_keys(row, rctx, {"spacer_thickness", "tau_static", "tau_kinetic"});
      FrictionCalibrationRow r;
      r.spacer_thickness = get_number(row, rctx, "spacer_thickness");
      r.tau_static = get_number(row, rctx, "tau_static");
      r.tau_kinetic = get_number(row, rctx, "tau_kinetic");
      gen.calibration.push_back(r);
    }
  }
  validate(gen);
  return gen;
}

json to_json(const FrictionGenerator& gen) {
  json j;
  j["tau_static"] = gen.tau_static;
  j["tau_kinetic"] = gen.tau_kinetic;
  json rows = json::array();
  for (const FrictionCalibrationRow& r : gen.calibration) {
    json row;
    row["spacer_thickness"] = r.spacer_thickness;
    row["tau_static"] = r.tau_static;
    row["tau_kinetic"] = r.tau_kinetic;
    rows.push_back(row);
  }
  j["calibration"] = rows;
  return j;
}

Scenario scenario_from_json(const json& j) {
  const std::string ctx = "scenario";
  require_object(j, ctx);
  check_keys(j, ctx,
             {"tum", "linkage", "friction", "input_speed",
              "contact_angle_theta2", "contact_stiffness", "duration", "dt"});
  if (!j.contains("tum")) throw ConfigError(ctx + ": missing field 'tum'");
  if (!j.contains("linkage"))
    throw ConfigError(ctx + ": missing field 'linkage'");
  if (!j.contains("friction"))
    throw ConfigError(ctx + ": missing field 'friction'");
  Scenario sc;
  sc.tum = tum_from_json(j.at("tum"));
  sc.linkage = linkage_from_json(j.at("linkage"));
  sc.friction = friction_from_json(j.at("friction"));
  sc.input_speed = get_number(j, ctx, "input_speed");
  if (j.contains("contact_angle_theta2") &&
      !j.at("contact_angle_theta2").is_null()) {
    const json& v = j.at("contact_angle_theta2");
    if (!v.is_number())
      throw ConfigError(ctx + ".contact_angle_theta2: expected number or null");
    sc.contact_angle_theta2 = v.get<double>();
  }
  sc.contact_stiffness =
      get_number_or(j, ctx, "contact_stiffness", sc.contact_stiffness);
  sc.duration = get_number(j, ctx, "duration");
  sc.dt = get_number_or(j, ctx, "dt", sc.dt);
  validate(sc);
  return sc;
}

json to_json(const Scenario& scenario) {
  json j;
  j["tum"] = to_json(scenario.tum);
  j["linkage"] = to_json(scenario.linkage);
  j["friction"] = to_json(scenario.friction);
  j["input_speed"] = scenario.input_speed;
  if (scenario.contact_angle_theta2.has_value()) {
    j["contact_angle_theta2"] = *scenario.contact_angle_theta2;
  } else {
    j["contact_angle_theta2"] = nullptr;
  }
  j["contact_stiffness"] = scenario.contact_stiffness;
  j["duration"] = scenario.duration;
  j["dt"] = scenario.dt;
  return j;
}

SweepConfig sweep_config_from_json(const json& j) {
  const std::string ctx = "sweep";
  require_object(j, ctx);
  check_keys(j, ctx,
             {"ranges", "youngs_modulus_E", "second_moment_I",
              "max_rotation_theta_max", "reference_tau_in", "reference_theta",
              "objectives"});
  if (!j.contains("ranges"))
    throw ConfigError(ctx + ": missing field 'ranges'");
  const json& r = j.at("ranges");
  const std::string rctx = ctx + ".ranges";
  require_object(r, rctx);
  check_keys(r, rctx,
             {"radius_R", "strip_length_L", "n_strips", "strip_width_w1",
              "top_plate_thickness_w2", "bottom_plate_thickness_w3", "link_R1",
              "link_R2", "offset_a", "offset_b", "offset_c"});
  SweepConfig config;
  const auto axis = [&](const char* name) {
    if (!r.contains(name))
      throw ConfigError(rctx + ": missing axis '" + name + "'");
    return range_from_json(r.at(name), rctx + "." + name);
  };
  config.ranges.radius_R = axis("radius_R");
  config.ranges.strip_length_L = axis("strip_length_L");
  config.ranges.n_strips = axis("n_strips");
  config.ranges.strip_width_w1 = axis("strip_width_w1");
  config.ranges.top_plate_thickness_w2 = axis("top_plate_thickness_w2");
  config.ranges.bottom_plate_thickness_w3 = axis("bottom_plate_thickness_w3");
  config.ranges.link_R1 = axis("link_R1");
  config.ranges.link_R2 = axis("link_R2");
  config.ranges.offset_a = axis("offset_a");
  config.ranges.offset_b = axis("offset_b");
  config.ranges.offset_c = axis("offset_c");
  config.youngs_modulus_E = get_number(j, ctx, "youngs_modulus_E");
  config.second_moment_I = get_number(j, ctx, "second_moment_I");
  config.max_rotation_theta_max = get_number(j, ctx, "max_rotation_theta_max");
  config.reference_tau_in = get_number(j, ctx, "reference_tau_in");
  config.reference_theta = get_number(j, ctx, "reference_theta");
  (void)candidate_count(config.ranges);  // rejects broken step counts early
  return config;
}

std::vector<Objective> objectives_from_json(const json& j) {
  require_object(j, "sweep");
  std::vector<Objective> out;
  if (!j.contains("objectives")) {
    out.push_back({"stroke_mm", true});
    out.push_back({"required_holding_torque_Nmm", false});
    return out;
  }
  const json& arr = j.at("objectives");
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError("sweep.objectives: expected non-empty array");
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "sweep.objectives[" + std::to_string(i) + "]";
    const json& o = arr[i];
    require_object(o, ctx);
    check_keys(o, ctx, {"field", "maximize"});
    Objective obj;
    obj.field = get_string(o, ctx, "field");
    obj.maximize = get_bool(o, ctx, "maximize");
    DesignReport probe;
    (void)report_field(probe, obj.field);  // rejects unknown metric names
    out.push_back(obj);
  }
  return out;
}

MechanismConfig mechanism_from_json(const json& j) {
  const std::string ctx = "mechanism";
  require_object(j, ctx);
  check_keys(j, ctx, {"tum", "linkage", "friction"});
  if (!j.contains("tum")) throw ConfigError(ctx + ": missing field 'tum'");
  MechanismConfig config;
  config.tum = tum_from_json(j.at("tum"));
  if (j.contains("linkage")) {
    config.linkage = linkage_from_json(j.at("linkage"));
  }
  if (j.contains("friction")) {
    config.friction = friction_from_json(j.at("friction"));
  }
  return config;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

MechanismConfig load_mechanism(const std::string& path) {
  return mechanism_from_json(load_json_file(path));
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

SweepConfig load_sweep_config(const std::string& path) {
  return sweep_config_from_json(load_json_file(path));
}

std::vector<Objective> load_objectives(const std::string& path) {
  return objectives_from_json(load_json_file(path));
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string config_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a64_hex(buf.str());
}

}  // namespace spinemech
