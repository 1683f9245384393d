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

// Cartesian design sweep over TUM and linkage parameters, with per-candidate
// reports and Pareto filtering. Candidate enumeration is a pure function of
// the ranges (lexicographic row-major order), so sequential and concurrent
// sweeps produce identical output.

#ifndef SPINEMECH_SWEEP_HPP
#define SPINEMECH_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spinemech/linkage.hpp"
#include "spinemech/tum.hpp"

namespace spinemech {

struct ParamRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;  // number of grid values; 1 pins the parameter at min
};

// Grid axes in lexicographic significance order (first varies slowest).
struct DesignRanges {
  ParamRange radius_R;
  ParamRange strip_length_L;
  ParamRange n_strips;  // values rounded to nearest integer
  ParamRange strip_width_w1;
  ParamRange top_plate_thickness_w2;
  ParamRange bottom_plate_thickness_w3;
  ParamRange link_R1;
  ParamRange link_R2;
  ParamRange offset_a;
  ParamRange offset_b;
  ParamRange offset_c;
};

// Parameters shared by every candidate plus the evaluation reference point.
struct SweepConfig {
  DesignRanges ranges;
  double youngs_modulus_E = 0.0;
  double second_moment_I = 0.0;
  double max_rotation_theta_max = 0.0;  // [rad]
  double reference_tau_in = 0.0;        // input torque for grasp readout [N*mm]
  double reference_theta = 0.0;         // twist for grasp readout [rad]
};

struct Candidate {
  std::uint64_t index = 0;
  TumSpec tum;
  LinkageSpec linkage;
};

// Feasibility outcome of one candidate evaluation. Metric fields are NaN
// when the tag is not kOk.
enum class DesignStatus {
  kOk,
  kInvalidSpec,           // candidate violates a spec invariant
  kRadiusDegenerate,      // w2 + w3 == 0, constraint undefined
  kLinkageUnsolvable,     // loop infeasible somewhere over the stroke
  kReferenceBeyondStroke,  // reference twist outside the effective stroke
};

std::string to_string(DesignStatus s);

struct DesignReport {
  std::uint64_t candidate_index = 0;
  // Echoed grid parameters.
  double radius_R = 0.0;
  double strip_length_L = 0.0;
  int n_strips = 0;
  double strip_width_w1 = 0.0;
  double top_plate_thickness_w2 = 0.0;
  double bottom_plate_thickness_w3 = 0.0;
  double link_R1 = 0.0;
  double link_R2 = 0.0;
  double offset_a = 0.0;
  double offset_b = 0.0;
  double offset_c = 0.0;
  // Metrics.
  DesignStatus status = DesignStatus::kOk;
  bool constraint_pass = false;
  double margin_mm = 0.0;
  double stroke_mm = 0.0;
  double finger_range_deg = 0.0;
  double required_holding_torque_Nmm = 0.0;
  double grasp_torque_Nmm = 0.0;
};

struct Objective {
  std::string field;  // DesignReport metric name, e.g. "stroke_mm"
  bool maximize = false;
};

// Number of grid points (product of all steps).
std::uint64_t candidate_count(const DesignRanges& ranges);

// Candidate at a lexicographic row-major index. Pure; O(1).
Candidate candidate_at(const SweepConfig& config, std::uint64_t index);

// Evaluates one candidate. Geometric failures are reported through the
// status tag, not exceptions. DesignReport.finger_range_deg sweeps the
// TUM-limited stroke in stroke/64 steps via linkage::finger_travel.
DesignReport evaluate(const Candidate& candidate, double reference_tau_in,
                      double reference_theta);

// Evaluates the whole grid. jobs <= 1 runs sequentially; any job count
// yields identical reports (indices partition into contiguous chunks and
// results land in a pre-sized vector).
std::vector<DesignReport> run_sweep(const SweepConfig& config, int jobs = 1);

// Numeric metric accessor used by objectives. Throws ConfigError for an
// unknown field name.
double report_field(const DesignReport& report, const std::string& field);

// Indices (into `reports`, in stable ascending order) of the non-dominated
// rows under the given objectives. Rows whose status is not kOk or whose
// objective fields are NaN do not participate.
std::vector<std::size_t> pareto_front(const std::vector<DesignReport>& reports,
                                      const std::vector<Objective>& objectives);

}  // namespace spinemech

#endif  // SPINEMECH_SWEEP_HPP
