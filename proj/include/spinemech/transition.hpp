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

// Friction-gated mode transition: stick-slip behaviour of the gripper body.
//
// The gripper body couples to its frame through a friction stage (an O-ring
// preloaded by a spacer). While the transmitted torque stays below the static
// threshold the body sticks and all input rotation goes into TUM twist
// (contraction, finger closing). Once the threshold is crossed the interface
// slips: the twist freezes at its slip value and the whole assembly rotates.
// The simulation is quasi-static (no inertia), driven at constant input
// speed, integrated with a fixed step.
//
// Phase sequence: Approaching (free closing) -> ForceBuildup (fingers touch
// the object, a rotational contact spring loads the transmission) ->
// Rotating (slipped). ForceBuildup is skipped when slip precedes contact.
//
// Units: mm, rad, N*mm, s.

#ifndef SPINEMECH_TRANSITION_HPP
#define SPINEMECH_TRANSITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "spinemech/linkage.hpp"
#include "spinemech/tum.hpp"

namespace spinemech {

struct FrictionCalibrationRow {
  double spacer_thickness = 0.0;  // [mm]
  double tau_static = 0.0;        // [N*mm]
  double tau_kinetic = 0.0;       // [N*mm]
};

struct FrictionGenerator {
  double tau_static = 0.0;   // stick threshold [N*mm]
  double tau_kinetic = 0.0;  // slip level [N*mm], <= tau_static
  std::vector<FrictionCalibrationRow> calibration;  // spacer -> thresholds
};

enum class Phase { kApproaching, kForceBuildup, kRotating };

// Single-letter phase codes used in trace CSV output.
char phase_code(Phase p);

struct Scenario {
  TumSpec tum;
  LinkageSpec linkage;
  FrictionGenerator friction;
  double input_speed = 0.0;       // drive speed [rad/s]
  std::optional<double> contact_angle_theta2;  // object surface [rad]; empty
                                               // means closed-stroke, no object
  double contact_stiffness = 5000.0;  // rotational contact spring [N*mm/rad]
  double duration = 0.0;          // [s]
  double dt = 1e-3;               // [s]
};

struct SimState {
  double t = 0.0;              // [s]
  double theta_input = 0.0;    // integrated drive angle [rad]
  double theta_twist = 0.0;    // TUM twist share [rad]
  double theta_body = 0.0;     // body rotation share [rad]
  double X = 0.0;              // contraction [mm]
  double theta2 = 0.0;         // finger angle [rad]
  double tau_transmitted = 0.0;  // torque across the friction stage [N*mm]
  double grasp_torque = 0.0;   // fingertip torque readout [N*mm]
  Phase phase = Phase::kApproaching;
};

enum class SimOutcome {
  kCompleted,          // ran to the configured duration
  kClosedWithoutSlip,  // twist hit the stroke ceiling before any slip
};

struct SimSummary {
  SimOutcome outcome = SimOutcome::kCompleted;
  double peak_torque = 0.0;      // max |tau_transmitted| over the trace
  double plateau_torque = 0.0;   // steady |tau_transmitted| after slip
  double plateau_kinetic = 0.0;  // raw kinetic threshold readout
  double frozen_elastic_torque = 0.0;  // |elastic torque| at the frozen twist
  double slip_twist = 0.0;       // twist at the slip instant [rad]
  bool slipped = false;
  bool grasp_success = false;    // contact established strictly before slip
  std::optional<double> t_contact;  // first contact time [s]
  std::optional<double> t_slip;     // slip time [s]
};

struct SimTrace {
  std::vector<SimState> states;
  SimSummary summary;
};

struct GraspCheck {
  bool success = false;
  double margin = 0.0;              // tau_static - max elastic torque [N*mm]
  double max_elastic_torque = 0.0;  // over the effective stroke [N*mm]
};

// One sample of a measured drive log.
struct LogSample {
  double theta = 0.0;   // twist [rad]
  double tau_in = 0.0;  // input torque [N*mm]
};

struct JacobianSample {
  double theta = 0.0;
  double jacobian = 0.0;  // experimental transmission ratio [mm/rad]
};

// Throws ConfigError on tau_kinetic > tau_static, non-increasing thickness
// order, or thresholds increasing with thickness.
void validate(const FrictionGenerator& gen);

// Throws ConfigError on non-positive dt, duration < dt, zero input speed or
// negative contact stiffness, and validates the embedded specs.
void validate(const Scenario& scenario);

// Piecewise-linear interpolation of the calibration table at a spacer
// thickness. Exact at the knots; DomainError outside the knot range; no
// extrapolation. The result carries the same table.
FrictionGenerator friction_from_spacer(
    const std::vector<FrictionCalibrationRow>& table, double spacer_thickness);

// Static predicate: the grasp holds iff tau_static strictly exceeds the
// largest elastic torque anywhere in the stroke.
GraspCheck grasp_success(const TumSpec& tum, const FrictionGenerator& gen);

// Runs the fixed-step phase simulation. The trace starts with the initial
// state, so duration == dt yields two states. Pure function of the scenario:
// identical scenarios produce bitwise-identical traces.
//
// Per step, while stuck, candidate twist accumulates the drive increment and
// tau = |elastic_torque(twist)| + stiffness * penetration(theta2). The slip
// instant is bisected inside the crossing step, so the peak transmitted
// torque equals tau_static exactly and the twist freezes at the crossing;
// the step's remaining input goes to body rotation. After slip the
// transmitted torque is min(tau_static, tau_kinetic + frozen elastic torque)
// and the grasp torque holds at its force-balance value at the frozen twist.
SimTrace simulate(const Scenario& scenario);

// Experimental transmission ratio from a drive log under a constant load
// force: J_exp = (tau_in - elastic_torque(theta)) / load_force per sample.
// Throws DomainError when load_force == 0, DataError on an empty log.
std::vector<JacobianSample> empirical_jacobian(const std::vector<LogSample>& log,
                                               const TumSpec& spec,
                                               double load_force);

// Least-squares constant torque offset of a drive log against the model:
// mean of tau_in - elastic_torque(theta) - J(theta) * load_force.
double fit_torque_offset(const std::vector<LogSample>& log, const TumSpec& spec,
                         double load_force);

}  // namespace spinemech

#endif  // SPINEMECH_TRANSITION_HPP
