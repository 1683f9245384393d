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

// spine-mech: command line front end for the TUM gripper analysis library.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 model domain error
// (singularity, infeasible geometry, non-convergence), 4 malformed data.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinemech/config_io.hpp"
#include "spinemech/csv.hpp"
#include "spinemech/errors.hpp"
#include "spinemech/linkage.hpp"
#include "spinemech/sweep.hpp"
#include "spinemech/transition.hpp"
#include "spinemech/tum.hpp"
#include "spinemech/units.hpp"
#include "spinemech/version.hpp"

namespace {

using spinemech::ConfigError;

constexpr double kUnsetValue = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw ConfigError("samples: need at least 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(i == n - 1 ? hi
                             : lo + static_cast<double>(i) * (hi - lo) /
                                        static_cast<double>(n - 1));
  }
  return out;
}

// Parallelism: SPINE_MECH_JOBS overrides --jobs; the hardware count is the
// fallback when neither is given.
int resolve_jobs(int flag_jobs) {
  if (const char* env = std::getenv("SPINE_MECH_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw ConfigError("SPINE_MECH_JOBS: expected a positive integer, got '" +
                        std::string(env) + "'");
    }
    return static_cast<int>(v);
  }
  if (flag_jobs >= 1) return flag_jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int run_tum_curve(const std::string& config_path, const std::string& out_path,
                  double theta_min_deg, double theta_max_deg, int samples) {
  const spinemech::MechanismConfig mc = spinemech::load_mechanism(config_path);
  if (std::isnan(theta_max_deg)) {
    theta_max_deg = spinemech::rad_to_deg(spinemech::effective_theta_max(mc.tum));
  }
  std::vector<double> thetas;
  for (const double deg : linspace(theta_min_deg, theta_max_deg, samples)) {
    thetas.push_back(spinemech::deg_to_rad(deg));
  }
  const std::string prov = spinemech::provenance_line(
      "tum-curve", spinemech::config_hash(config_path));
  spinemech::write_file(out_path,
                        spinemech::tum_curve_csv(mc.tum, thetas, prov));
  std::cout << "wrote " << out_path << " (" << thetas.size() << " rows)\n";
  return 0;
}

int run_linkage_curve(const std::string& config_path,
                      const std::string& out_path, double x_min, double x_max,
                      int samples) {
  const spinemech::MechanismConfig mc = spinemech::load_mechanism(config_path);
  if (!mc.linkage.has_value()) {
    throw ConfigError(config_path + ": config has no linkage section");
  }
  const spinemech::SolvableInterval iv =
      spinemech::solvable_interval(*mc.linkage);
  if (std::isnan(x_min)) x_min = std::max(0.0, iv.x_min);
  if (std::isnan(x_max)) {
    // Stay strictly inside the fold point, where the loop Jacobian turns
    // singular and the finger ratio blows up.
    const double margin = 1e-6 * std::max(1.0, iv.x_max - x_min);
    x_max = iv.x_max - margin;
  }
  const std::string prov = spinemech::provenance_line(
      "linkage-curve", spinemech::config_hash(config_path));
  spinemech::write_file(
      out_path, spinemech::linkage_curve_csv(*mc.linkage,
                                             linspace(x_min, x_max, samples),
                                             prov));
  std::cout << "wrote " << out_path << " (" << samples << " rows)\n";
  return 0;
}

int run_check_design(const std::string& config_path) {
  const spinemech::MechanismConfig mc = spinemech::load_mechanism(config_path);
  using spinemech::format_double;

  const spinemech::RadiusCheck rc = spinemech::check_radius_constraint(mc.tum);
  const double theta_eff = spinemech::effective_theta_max(mc.tum);
  const double stroke = spinemech::contraction(mc.tum, theta_eff);
  const double tau_hold = spinemech::max_holding_torque(mc.tum);

  std::cout << spinemech::kToolName << " " << spinemech::kVersion
            << " check-design\n";
  std::cout << "radius_constraint: " << (rc.pass ? "PASS" : "FAIL")
            << " min_radius_mm=" << format_double(rc.min_radius)
            << " margin_mm=" << format_double(rc.margin) << "\n";
  std::cout << "effective_theta_max_rad=" << format_double(theta_eff)
            << " (" << format_double(spinemech::rad_to_deg(theta_eff))
            << " deg)\n";
  std::cout << "stroke_mm=" << format_double(stroke) << "\n";
  std::cout << "max_holding_torque_Nmm=" << format_double(tau_hold) << "\n";

  if (mc.linkage.has_value()) {
    const spinemech::SolvableInterval iv =
        spinemech::solvable_interval(*mc.linkage);
    const spinemech::FingerTravel travel =
        spinemech::finger_travel(*mc.linkage, stroke, stroke / 64.0);
    std::cout << "linkage_solvable_X_mm=[" << format_double(iv.x_min) << ", "
              << format_double(iv.x_max) << "]\n";
    std::cout << "finger_travel_deg="
              << format_double(spinemech::rad_to_deg(travel.travel))
              << " theta2_start_rad=" << format_double(travel.theta2_start)
              << " theta2_end_rad=" << format_double(travel.theta2_end)
              << "\n";
  }
  if (mc.friction.has_value()) {
    const spinemech::GraspCheck gc =
        spinemech::grasp_success(mc.tum, *mc.friction);
    std::cout << "grasp: " << (gc.success ? "PASS" : "FAIL")
              << " tau_static_Nmm=" << format_double(mc.friction->tau_static)
              << " max_elastic_Nmm=" << format_double(gc.max_elastic_torque)
              << " margin_Nmm=" << format_double(gc.margin) << "\n";
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_path) {
  const spinemech::Scenario sc = spinemech::load_scenario(config_path);
  const spinemech::SimTrace trace = spinemech::simulate(sc);
  const std::string hash = spinemech::config_hash(config_path);
  const std::string prov = spinemech::provenance_line("simulate", hash);
  spinemech::write_file(out_path, spinemech::trace_csv(trace, prov));

  const spinemech::SimSummary& s = trace.summary;
  const char* outcome = s.outcome == spinemech::SimOutcome::kCompleted
                            ? "completed"
                            : "closed-without-slip";
  spinemech::json j;
  j["tool"] = spinemech::kToolName;
  j["version"] = spinemech::kVersion;
  j["command"] = "simulate";
  j["config_hash"] = hash;
  j["outcome"] = outcome;
  j["peak_torque_Nmm"] = s.peak_torque;
  j["plateau_torque_Nmm"] = s.plateau_torque;
  j["plateau_kinetic_Nmm"] = s.plateau_kinetic;
  j["frozen_elastic_torque_Nmm"] = s.frozen_elastic_torque;
  j["slip_twist_rad"] = s.slip_twist;
  j["slipped"] = s.slipped;
  j["grasp_success"] = s.grasp_success;
  if (s.t_contact.has_value()) {
    j["t_contact_s"] = *s.t_contact;
  } else {
    j["t_contact_s"] = nullptr;
  }
  if (s.t_slip.has_value()) {
    j["t_slip_s"] = *s.t_slip;
  } else {
    j["t_slip_s"] = nullptr;
  }
  j["states"] = trace.states.size();
  spinemech::write_file(out_path + ".summary.json", j.dump(2) + "\n");

  std::cout << "outcome=" << outcome
            << " peak_torque_Nmm=" << spinemech::format_double(s.peak_torque)
            << " plateau_torque_Nmm="
            << spinemech::format_double(s.plateau_torque)
            << " grasp_success=" << (s.grasp_success ? 1 : 0)
            << " states=" << trace.states.size() << "\n";
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  int flag_jobs) {
  const spinemech::json root = spinemech::load_json_file(config_path);
  const spinemech::SweepConfig config =
      spinemech::sweep_config_from_json(root);
  const std::vector<spinemech::Objective> objectives =
      spinemech::objectives_from_json(root);
  const int jobs = resolve_jobs(flag_jobs);

  const std::vector<spinemech::DesignReport> reports =
      spinemech::run_sweep(config, jobs);
  const std::vector<std::size_t> front =
      spinemech::pareto_front(reports, objectives);

  const std::string hash = spinemech::config_hash(config_path);
  const std::string prov = spinemech::provenance_line("sweep", hash);
  spinemech::write_file(out_path, spinemech::reports_csv(reports, prov));

  spinemech::json j;
  j["tool"] = spinemech::kToolName;
  j["version"] = spinemech::kVersion;
  j["command"] = "sweep";
  j["config_hash"] = hash;
  j["candidate_count"] = reports.size();
  spinemech::json jobj = spinemech::json::array();
  for (const spinemech::Objective& o : objectives) {
    spinemech::json e;
    e["field"] = o.field;
    e["maximize"] = o.maximize;
    jobj.push_back(e);
  }
  j["objectives"] = jobj;
  spinemech::json jfront = spinemech::json::array();
  for (const std::size_t i : front) jfront.push_back(i);
  j["pareto_front_indices"] = jfront;
  spinemech::json jrows = spinemech::json::array();
  for (const spinemech::DesignReport& r : reports) {
    spinemech::json row;
    row["candidate_index"] = r.candidate_index;
    row["radius_R"] = r.radius_R;
    row["strip_length_L"] = r.strip_length_L;
    row["n_strips"] = r.n_strips;
    row["strip_width_w1"] = r.strip_width_w1;
    row["top_plate_thickness_w2"] = r.top_plate_thickness_w2;
    row["bottom_plate_thickness_w3"] = r.bottom_plate_thickness_w3;
    row["link_R1"] = r.link_R1;
    row["link_R2"] = r.link_R2;
    row["offset_a"] = r.offset_a;
    row["offset_b"] = r.offset_b;
    row["offset_c"] = r.offset_c;
    row["status"] = spinemech::to_string(r.status);
    row["constraint_pass"] = r.constraint_pass;
    // NaN metrics of non-ok rows serialize as JSON null.
    row["margin_mm"] = r.margin_mm;
    row["stroke_mm"] = r.stroke_mm;
    row["finger_range_deg"] = r.finger_range_deg;
    row["required_holding_torque_Nmm"] = r.required_holding_torque_Nmm;
    row["grasp_torque_Nmm"] = r.grasp_torque_Nmm;
    jrows.push_back(row);
  }
  j["reports"] = jrows;
  spinemech::write_file(out_path + ".json", j.dump(2) + "\n");

  std::size_t ok = 0;
  for (const spinemech::DesignReport& r : reports) {
    if (r.status == spinemech::DesignStatus::kOk) ++ok;
  }
  std::cout << "candidates=" << reports.size() << " ok=" << ok
            << " pareto=" << front.size() << " jobs=" << jobs << " wrote "
            << out_path << "\n";
  return 0;
}

int run_analyze(const std::string& config_path, const std::string& log_path,
                const std::string& out_path, double load_force) {
  const spinemech::MechanismConfig mc = spinemech::load_mechanism(config_path);
  const std::vector<spinemech::LogSample> log =
      spinemech::read_torque_log(log_path);
  const std::vector<spinemech::JacobianSample> samples =
      spinemech::empirical_jacobian(log, mc.tum, load_force);
  const double offset =
      spinemech::fit_torque_offset(log, mc.tum, load_force);
  const std::string prov = spinemech::provenance_line(
      "analyze", spinemech::config_hash(config_path));
  spinemech::write_file(
      out_path, spinemech::analysis_csv(samples, mc.tum, offset, prov));
  std::cout << "fitted_offset_Nmm=" << spinemech::format_double(offset)
            << " samples=" << samples.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mechanism analysis for a twisted underactuated gripper"};
  app.set_version_flag("--version", std::string(spinemech::kToolName) + " " +
                                        spinemech::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string log_path;
  double theta_min_deg = 0.0;
  double theta_max_deg = kUnsetValue;
  double x_min = kUnsetValue;
  double x_max = kUnsetValue;
  double load_force = 0.0;
  int samples = 181;
  int jobs = 0;
  int rc = 0;

  CLI::App* tum_curve =
      app.add_subcommand("tum-curve", "Tabulate twist kinematics and elastic "
                                      "forces over a twist range");
  tum_curve->add_option("--config", config_path, "Mechanism JSON file")
      ->required();
  tum_curve->add_option("-o,--out,--output", out_path, "Output CSV path")
      ->required();
  tum_curve->add_option("--theta-min", theta_min_deg,
                        "Start twist [deg] (default 0)");
  tum_curve->add_option("--theta-max", theta_max_deg,
                        "End twist [deg] (default: effective stroke limit)");
  tum_curve->add_option("--samples", samples, "Row count (default 181)");
  tum_curve->callback([&] {
    rc = run_tum_curve(config_path, out_path, theta_min_deg, theta_max_deg,
                       samples);
  });

  CLI::App* linkage_curve = app.add_subcommand(
      "linkage-curve", "Tabulate finger angle and ratio over contraction");
  linkage_curve->add_option("--config", config_path, "Mechanism JSON file")
      ->required();
  linkage_curve->add_option("-o,--out,--output", out_path, "Output CSV path")
      ->required();
  linkage_curve->add_option("--x-min", x_min,
                            "Start contraction [mm] (default 0)");
  linkage_curve->add_option(
      "--x-max", x_max,
      "End contraction [mm] (default: just inside the solvable bound)");
  linkage_curve->add_option("--samples", samples, "Row count (default 181)");
  linkage_curve->callback([&] {
    rc = run_linkage_curve(config_path, out_path, x_min, x_max, samples);
  });

  CLI::App* check = app.add_subcommand(
      "check-design", "Print constraint, stroke and grasp checks");
  check->add_option("--config", config_path, "Mechanism JSON file")
      ->required();
  check->callback([&] { rc = run_check_design(config_path); });

  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Run the stick-slip closing simulation from a scenario");
  simulate_cmd->add_option("--config", config_path, "Scenario JSON file")
      ->required();
  simulate_cmd
      ->add_option("-o,--out,--output", out_path,
                   "Trace CSV path (summary lands next to it as "
                   "<output>.summary.json)")
      ->required();
  simulate_cmd->callback([&] { rc = run_simulate(config_path, out_path); });

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Evaluate a design grid and its Pareto front");
  sweep_cmd->add_option("--config", config_path, "Sweep JSON file")
      ->required();
  sweep_cmd
      ->add_option("-o,--out,--output", out_path,
                   "Report CSV path (JSON mirror lands at <output>.json)")
      ->required();
  sweep_cmd->add_option(
      "--jobs", jobs,
      "Worker threads (SPINE_MECH_JOBS overrides; default: hardware count)");
  sweep_cmd->callback([&] { rc = run_sweep_cmd(config_path, out_path, jobs); });

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Compare a measured drive log against the model");
  analyze->add_option("--config", config_path, "Mechanism JSON file")
      ->required();
  analyze->add_option("--log", log_path, "Drive log CSV (theta_rad,tau_in_Nmm)")
      ->required();
  analyze->add_option("-o,--out,--output", out_path, "Output CSV path")->required();
  analyze->add_option("--load-n,--load", load_force, "Constant load force [N]")
      ->required();
  analyze->callback(
      [&] { rc = run_analyze(config_path, log_path, out_path, load_force); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const spinemech::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const spinemech::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const spinemech::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const spinemech::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
