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

#include "spinemech/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinemech/errors.hpp"

namespace spinemech {

namespace {

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Rotational overlap of the finger past the object surface, measured along
// the closing direction of theta2.
double penetration(double theta2, double contact_angle, double closing_dir) {
  return std::max(0.0, (theta2 - contact_angle) * closing_dir);
}

}  // namespace

char phase_code(Phase p) {
  switch (p) {
    case Phase::kApproaching:
      return 'A';
    case Phase::kForceBuildup:
      return 'F';
    case Phase::kRotating:
      return 'R';
  }
  return '?';
}

void validate(const FrictionGenerator& gen) {
  if (!(gen.tau_static > 0.0))
    throw ConfigError("friction: tau_static must be > 0");
  if (gen.tau_kinetic < 0.0)
    throw ConfigError("friction: tau_kinetic must be >= 0");
  if (gen.tau_kinetic > gen.tau_static)
    throw ConfigError("friction: tau_kinetic must not exceed tau_static");
  for (std::size_t i = 0; i < gen.calibration.size(); ++i) {
    const auto& row = gen.calibration[i];
    if (row.tau_kinetic > row.tau_static) {
      throw ConfigError("friction calibration row " + std::to_string(i) +
                        ": tau_kinetic exceeds tau_static");
    }
    if (i > 0) {
      const auto& prev = gen.calibration[i - 1];
      if (!(row.spacer_thickness > prev.spacer_thickness)) {
        throw ConfigError("friction calibration: spacer thicknesses must be "
                          "strictly increasing");
      }
      if (row.tau_static > prev.tau_static ||
          row.tau_kinetic > prev.tau_kinetic) {
        throw ConfigError("friction calibration: thresholds must not increase "
                          "with spacer thickness");
      }
    }
  }
}

void validate(const Scenario& scenario) {
  validate(scenario.tum);
  validate(scenario.linkage);
  validate(scenario.friction);
  if (!(scenario.dt > 0.0)) throw ConfigError("scenario: dt must be > 0");
  if (!(scenario.duration >= scenario.dt))
    throw ConfigError("scenario: duration must be >= dt");
  if (scenario.input_speed == 0.0)
    throw ConfigError("scenario: input_speed must be nonzero");
  if (scenario.contact_stiffness < 0.0)
    throw ConfigError("scenario: contact_stiffness must be >= 0");
}

FrictionGenerator friction_from_spacer(
    const std::vector<FrictionCalibrationRow>& table, double spacer_thickness) {
  if (table.empty()) {
    throw DomainError("friction_from_spacer: empty calibration table");
  }
  FrictionGenerator probe;
  probe.tau_static = table.front().tau_static;
  probe.tau_kinetic = table.front().tau_kinetic;
  probe.calibration = table;
  validate(probe);  // enforces row ordering invariants
  if (spacer_thickness < table.front().spacer_thickness ||
      spacer_thickness > table.back().spacer_thickness) {
    throw DomainError(
        "friction_from_spacer: thickness " + std::to_string(spacer_thickness) +
        " mm outside calibrated range [" +
        std::to_string(table.front().spacer_thickness) + ", " +
        std::to_string(table.back().spacer_thickness) + "]; no extrapolation");
  }
  FrictionGenerator out;
  out.calibration = table;
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    const auto& lo = table[i];
    const auto& hi = table[i + 1];
    if (spacer_thickness > hi.spacer_thickness) continue;
    if (spacer_thickness == lo.spacer_thickness) {
      out.tau_static = lo.tau_static;
      out.tau_kinetic = lo.tau_kinetic;
    } else if (spacer_thickness == hi.spacer_thickness) {
      out.tau_static = hi.tau_static;
      out.tau_kinetic = hi.tau_kinetic;
    } else {
      const double u = (spacer_thickness - lo.spacer_thickness) /
                       (hi.spacer_thickness - lo.spacer_thickness);
      out.tau_static = lo.tau_static + u * (hi.tau_static - lo.tau_static);
      out.tau_kinetic = lo.tau_kinetic + u * (hi.tau_kinetic - lo.tau_kinetic);
    }
    return out;
  }
  // Single-row table, thickness equals the knot.
  out.tau_static = table.front().tau_static;
  out.tau_kinetic = table.front().tau_kinetic;
  return out;
}

GraspCheck grasp_success(const TumSpec& tum, const FrictionGenerator& gen) {
  GraspCheck out;
  out.max_elastic_torque = max_holding_torque(tum);
  out.margin = gen.tau_static - out.max_elastic_torque;
  out.success = gen.tau_static > out.max_elastic_torque;
  return out;
}

SimTrace simulate(const Scenario& sc) {
  validate(sc);
  const double dir = sign_of(sc.input_speed);
  const double theta_limit = effective_theta_max(sc.tum);
  const double tau_static = sc.friction.tau_static;
  const double tau_kinetic = sc.friction.tau_kinetic;

  SimTrace trace;
  trace.summary.plateau_kinetic = tau_kinetic;

  LinkageState lk = solve_configuration(sc.linkage, 0.0);
  // Closing direction of theta2 as contraction grows, from the loop Jacobian
  // at the open pose. Contraction is even in twist, so this does not depend
  // on the drive direction.
  const double jg_open = finger_jacobian(sc.linkage, lk);
  const double closing_dir = jg_open < 0.0 ? -1.0 : 1.0;

  SimState state;
  state.theta2 = lk.theta2;
  trace.states.push_back(state);

  // Transmitted torque magnitude while stuck, at twist magnitude `tw_mag`.
  // Also reports the solved linkage state and the contact penetration.
  const auto stuck_torque = [&](double tw_mag, const LinkageState& seed,
                                LinkageState* lk_out, double* pen_out) {
    const double X = contraction(sc.tum, dir * tw_mag);
    *lk_out = solve_configuration(sc.linkage, X, seed.theta1, seed.theta2);
    double pen = 0.0;
    if (sc.contact_angle_theta2.has_value()) {
      pen = penetration(lk_out->theta2, *sc.contact_angle_theta2, closing_dir);
    }
    *pen_out = pen;
    return std::abs(elastic_torque(sc.tum, dir * tw_mag)) +
           sc.contact_stiffness * pen;
  };

  const long long steps = std::llround(sc.duration / sc.dt);
  bool slipped = false;
  double rotating_tau = 0.0;    // signed steady transmitted torque
  double rotating_grasp = 0.0;  // signed steady grasp readout

  for (long long i = 1; i <= steps; ++i) {
    SimState prev = trace.states.back();
    SimState next;
    next.t = prev.t + sc.dt;
    next.theta_input = prev.theta_input + sc.input_speed * sc.dt;

    if (slipped) {
      next.theta_twist = prev.theta_twist;
      next.theta_body = prev.theta_body + sc.input_speed * sc.dt;
      next.X = prev.X;
      next.theta2 = prev.theta2;
      next.tau_transmitted = rotating_tau;
      next.grasp_torque = rotating_grasp;
      next.phase = Phase::kRotating;
      trace.states.push_back(next);
      continue;
    }

    const double cand = prev.theta_twist + sc.input_speed * sc.dt;
    if (std::abs(cand) >= theta_limit) {
      // Stroke ceiling reached before any slip: the run terminates here.
      trace.summary.outcome = SimOutcome::kClosedWithoutSlip;
      break;
    }

    LinkageState lk_cand;
    double pen = 0.0;
    const double mag = stuck_torque(std::abs(cand), lk, &lk_cand, &pen);

    if (mag >= tau_static) {
      // Slip inside this step: bisect the twist magnitude at which the
      // transmitted torque first meets the static threshold.
      double lo = std::abs(prev.theta_twist);
      double hi = std::abs(cand);
      LinkageState lk_mid;
      double pen_mid = 0.0;
      for (int it = 0; it < 100 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (stuck_torque(mid, lk, &lk_mid, &pen_mid) >= tau_static) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      const double slip_mag = hi;
      LinkageState lk_slip;
      double pen_slip = 0.0;
      (void)stuck_torque(slip_mag, lk, &lk_slip, &pen_slip);
      const double slip_twist = dir * slip_mag;
      const double frozen = std::abs(elastic_torque(sc.tum, slip_twist));

      next.theta_twist = slip_twist;
      next.theta_body = prev.theta_body + (cand - slip_twist);
      next.X = contraction(sc.tum, slip_twist);
      next.theta2 = lk_slip.theta2;
      next.tau_transmitted = dir * tau_static;  // threshold, by construction
      next.phase = Phase::kRotating;

      const double jg = finger_jacobian(sc.linkage, lk_slip);
      const auto balance_grasp = [&](double tau_signed) {
        if (std::abs(slip_twist) < kDefaultThetaFloor) return 0.0;
        return jg * (tau_signed - elastic_torque(sc.tum, slip_twist)) /
               jacobian(sc.tum, slip_twist);
      };
      next.grasp_torque = balance_grasp(next.tau_transmitted);

      // Steady slipping level: kinetic threshold plus the frozen elastic
      // share, never above the static threshold.
      rotating_tau = dir * std::min(tau_static, tau_kinetic + frozen);
      rotating_grasp = balance_grasp(rotating_tau);

      slipped = true;
      trace.summary.slipped = true;
      trace.summary.slip_twist = slip_twist;
      trace.summary.frozen_elastic_torque = frozen;
      trace.summary.t_slip = next.t;
      trace.summary.grasp_success = pen_slip > 0.0;
      trace.summary.plateau_torque = std::abs(rotating_tau);
      if (pen_slip > 0.0 && !trace.summary.t_contact.has_value()) {
        trace.summary.t_contact = next.t;
      }
      lk = lk_slip;
      trace.states.push_back(next);
      continue;
    }

    next.theta_twist = cand;
    next.theta_body = prev.theta_body;
    next.X = contraction(sc.tum, cand);
    next.theta2 = lk_cand.theta2;
    next.tau_transmitted = dir * mag;
    next.phase = pen > 0.0 ? Phase::kForceBuildup : Phase::kApproaching;
    if (pen > 0.0 && !trace.summary.t_contact.has_value()) {
      trace.summary.t_contact = next.t;
    }
    if (std::abs(cand) < kDefaultThetaFloor || pen <= 0.0) {
      next.grasp_torque = 0.0;
    } else {
      const double jg = finger_jacobian(sc.linkage, lk_cand);
      next.grasp_torque = jg *
                          (next.tau_transmitted -
                           elastic_torque(sc.tum, cand)) /
                          jacobian(sc.tum, cand);
    }
    lk = lk_cand;
    trace.states.push_back(next);
  }

  for (const SimState& s : trace.states) {
    trace.summary.peak_torque =
        std::max(trace.summary.peak_torque, std::abs(s.tau_transmitted));
  }
  return trace;
}

std::vector<JacobianSample> empirical_jacobian(const std::vector<LogSample>& log,
                                               const TumSpec& spec,
                                               double load_force) {
  if (load_force == 0.0) {
    throw DomainError("empirical_jacobian: load_force must be nonzero");
  }
  if (log.empty()) {
    throw DataError("empirical_jacobian: empty log");
  }
  std::vector<JacobianSample> out;
  out.reserve(log.size());
  for (const LogSample& s : log) {
    out.push_back(
        {s.theta, (s.tau_in - elastic_torque(spec, s.theta)) / load_force});
  }
  return out;
}

double fit_torque_offset(const std::vector<LogSample>& log, const TumSpec& spec,
                         double load_force) {
  if (log.empty()) {
    throw DataError("fit_torque_offset: empty log");
  }
  // Least squares for a constant term reduces to the mean residual.
  double sum = 0.0;
  for (const LogSample& s : log) {
    sum += s.tau_in - elastic_torque(spec, s.theta) -
           jacobian(spec, s.theta) * load_force;
  }
  return sum / static_cast<double>(log.size());
}

}  // namespace spinemech
