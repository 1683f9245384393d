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

// Stick-slip transition simulator and friction calibration. Frozen values
// come from an independent step-by-step re-computation of the quasi-static
// update rule at high precision.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinemech/errors.hpp"
#include "spinemech/transition.hpp"
#include "spinemech/units.hpp"

using namespace spinemech;

namespace {

TumSpec prototype_tum() {
  TumSpec s;
  s.radius_R = 20.0;
  s.strip_length_L = 40.0;
  s.n_strips = 1;
  s.strip_width_w1 = 5.0;
  s.top_plate_thickness_w2 = 2.0;
  s.bottom_plate_thickness_w3 = 2.0;
  s.youngs_modulus_E = 1200.0;
  s.second_moment_I = 1.71;
  s.max_rotation_theta_max = 1.8325957145940461;
  return s;
}

LinkageSpec prototype_linkage() {
  LinkageSpec s;
  s.offset_a = 30.0;
  s.offset_b = 10.0;
  s.offset_c = 25.0;
  s.link_R1 = 40.0;
  s.link_R2 = 25.0;
  s.tum_length_L = 40.0;
  s.branch = Branch::kOpenForward;
  return s;
}

std::vector<FrictionCalibrationRow> spacer_table() {
  return {{0.45, 700.0, 560.0}, {0.60, 568.0, 462.0}, {0.70, 210.0, 170.0}};
}

Scenario high_friction_scenario() {
  Scenario sc;
  sc.tum = prototype_tum();
  sc.linkage = prototype_linkage();
  sc.friction.tau_static = 440.0;
  sc.friction.tau_kinetic = 340.0;
  sc.input_speed = 2.0 * kPi;
  sc.contact_angle_theta2 = -0.826591478331;  // finger angle at 0.35 rad twist
  sc.contact_stiffness = 5000.0;
  sc.duration = 10.0;
  sc.dt = 1e-3;
  return sc;
}

Scenario low_friction_scenario() {
  Scenario sc = high_friction_scenario();
  sc.friction.tau_static = 100.0;
  sc.friction.tau_kinetic = 90.0;
  sc.contact_angle_theta2 = -0.942995431269;  // finger angle at 0.90 rad twist
  return sc;
}

}  // namespace

TEST_CASE("phase codes") {
  CHECK(phase_code(Phase::kApproaching) == 'A');
  CHECK(phase_code(Phase::kForceBuildup) == 'F');
  CHECK(phase_code(Phase::kRotating) == 'R');
}

TEST_CASE("friction generator validation") {
  FrictionGenerator gen;
  gen.tau_static = 440.0;
  gen.tau_kinetic = 340.0;
  CHECK_NOTHROW(validate(gen));
  gen.tau_kinetic = 500.0;  // kinetic above static
  CHECK_THROWS_AS(validate(gen), ConfigError);
  gen.tau_static = 0.0;
  gen.tau_kinetic = 0.0;
  CHECK_THROWS_AS(validate(gen), ConfigError);
}

TEST_CASE("spacer interpolation is exact at the knots") {
  const auto table = spacer_table();
  const FrictionGenerator at45 = friction_from_spacer(table, 0.45);
  CHECK(at45.tau_static == 700.0);
  CHECK(at45.tau_kinetic == 560.0);
  const FrictionGenerator at60 = friction_from_spacer(table, 0.60);
  CHECK(at60.tau_static == 568.0);
  CHECK(at60.tau_kinetic == 462.0);
  const FrictionGenerator at70 = friction_from_spacer(table, 0.70);
  CHECK(at70.tau_static == 210.0);
  CHECK(at70.tau_kinetic == 170.0);
  CHECK(at70.calibration.size() == 3);
}

TEST_CASE("spacer interpolation between the knots") {
  const auto table = spacer_table();
  const FrictionGenerator mid = friction_from_spacer(table, 0.5);
  CHECK(mid.tau_static == doctest::Approx(656.0).epsilon(1e-12));
  CHECK(mid.tau_kinetic ==
        doctest::Approx(527.33333333333337).epsilon(1e-12));
  const FrictionGenerator hi = friction_from_spacer(table, 0.65);
  CHECK(hi.tau_static == doctest::Approx(389.0).epsilon(1e-12));
  CHECK(hi.tau_kinetic == doctest::Approx(316.0).epsilon(1e-12));
}

TEST_CASE("spacer interpolation refuses to extrapolate") {
  const auto table = spacer_table();
  CHECK_THROWS_AS(friction_from_spacer(table, 0.44), DomainError);
  CHECK_THROWS_AS(friction_from_spacer(table, 0.71), DomainError);
  CHECK_THROWS_AS(friction_from_spacer({}, 0.5), DomainError);

  const std::vector<FrictionCalibrationRow> single = {{0.5, 300.0, 250.0}};
  const FrictionGenerator g = friction_from_spacer(single, 0.5);
  CHECK(g.tau_static == 300.0);
  CHECK(g.tau_kinetic == 250.0);
  CHECK_THROWS_AS(friction_from_spacer(single, 0.49), DomainError);
}

TEST_CASE("spacer interpolation rejects broken tables") {
  auto unsorted = spacer_table();
  std::swap(unsorted[0], unsorted[1]);
  CHECK_THROWS_AS(friction_from_spacer(unsorted, 0.5), ConfigError);

  auto crossed = spacer_table();
  crossed[1].tau_kinetic = crossed[1].tau_static + 1.0;
  CHECK_THROWS_AS(friction_from_spacer(crossed, 0.5), ConfigError);

  auto rising = spacer_table();
  rising[2].tau_static = 800.0;  // thresholds must fall with thickness
  CHECK_THROWS_AS(friction_from_spacer(rising, 0.5), ConfigError);
}

TEST_CASE("static grasp predicate") {
  const TumSpec tum = prototype_tum();
  FrictionGenerator strong;
  strong.tau_static = 440.0;
  strong.tau_kinetic = 340.0;
  const GraspCheck ok = grasp_success(tum, strong);
  CHECK(ok.success);
  CHECK(ok.max_elastic_torque ==
        doctest::Approx(330.47734412131291).epsilon(1e-12));
  CHECK(ok.margin == doctest::Approx(109.52265587868709).epsilon(1e-12));

  FrictionGenerator weak;
  weak.tau_static = 100.0;
  weak.tau_kinetic = 90.0;
  CHECK_FALSE(grasp_success(tum, weak).success);

  FrictionGenerator exact;
  exact.tau_static = ok.max_elastic_torque;  // equality does not hold a grasp
  exact.tau_kinetic = 0.0;
  CHECK_FALSE(grasp_success(tum, exact).success);
}

TEST_CASE("scenario validation") {
  Scenario sc = high_friction_scenario();
  CHECK_NOTHROW(validate(sc));
  sc.dt = 0.0;
  CHECK_THROWS_AS(validate(sc), ConfigError);
  sc = high_friction_scenario();
  sc.duration = 1e-4;  // below one step
  CHECK_THROWS_AS(validate(sc), ConfigError);
  sc = high_friction_scenario();
  sc.input_speed = 0.0;
  CHECK_THROWS_AS(validate(sc), ConfigError);
  sc = high_friction_scenario();
  sc.contact_stiffness = -1.0;
  CHECK_THROWS_AS(validate(sc), ConfigError);
  sc = high_friction_scenario();
  sc.tum.n_strips = 0;
  CHECK_THROWS_AS(validate(sc), ConfigError);
  sc = high_friction_scenario();
  sc.friction.tau_kinetic = 999.0;
  CHECK_THROWS_AS(validate(sc), ConfigError);
}

TEST_CASE("high friction run passes through all three phases") {
  const SimTrace trace = simulate(high_friction_scenario());
  const SimSummary& sum = trace.summary;
  CHECK(sum.outcome == SimOutcome::kCompleted);
  CHECK(sum.slipped);
  CHECK(sum.grasp_success);
  // The slip step is bisected to the threshold, so the peak is exact.
  CHECK(sum.peak_torque == 440.0);
  CHECK(sum.frozen_elastic_torque ==
        doctest::Approx(93.480429693945865).epsilon(1e-7));
  CHECK(sum.plateau_torque ==
        doctest::Approx(433.48042969394589).epsilon(1e-7));
  CHECK(sum.slip_twist ==
        doctest::Approx(0.73202215845147534).epsilon(1e-7));
  REQUIRE(sum.t_contact.has_value());
  REQUIRE(sum.t_slip.has_value());
  CHECK(*sum.t_contact == doctest::Approx(0.056).epsilon(1e-9));
  CHECK(*sum.t_slip == doctest::Approx(0.117).epsilon(1e-9));
  CHECK(*sum.t_contact < *sum.t_slip);

  // Phase sequence A -> F -> R with no backtracking.
  int rank_seen = 0;
  bool saw_f = false, saw_r = false;
  for (const SimState& s : trace.states) {
    const int rank = s.phase == Phase::kApproaching
                         ? 0
                         : (s.phase == Phase::kForceBuildup ? 1 : 2);
    CHECK(rank >= rank_seen);
    rank_seen = rank;
    saw_f = saw_f || s.phase == Phase::kForceBuildup;
    saw_r = saw_r || s.phase == Phase::kRotating;
  }
  CHECK(saw_f);
  CHECK(saw_r);

  // Conservation and bounds along the whole trace.
  for (const SimState& s : trace.states) {
    CHECK(std::abs(s.theta_input - (s.theta_twist + s.theta_body)) <= 1e-9);
    CHECK(std::abs(s.tau_transmitted) <= 440.0 + 1e-9);
  }
  CHECK(trace.states.front().t == 0.0);
  CHECK(trace.states.size() == 10001);
}

TEST_CASE("low friction run slips before contact") {
  const SimTrace trace = simulate(low_friction_scenario());
  const SimSummary& sum = trace.summary;
  CHECK(sum.outcome == SimOutcome::kCompleted);
  CHECK(sum.slipped);
  CHECK_FALSE(sum.grasp_success);
  CHECK_FALSE(sum.t_contact.has_value());
  CHECK(sum.peak_torque == 100.0);
  CHECK(sum.plateau_torque == 100.0);  // kinetic + frozen saturates at static
  CHECK(sum.frozen_elastic_torque == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(sum.slip_twist ==
        doctest::Approx(0.78104322815969596).epsilon(1e-7));
  for (const SimState& s : trace.states) {
    CHECK(s.phase != Phase::kForceBuildup);
    CHECK(std::abs(s.grasp_torque) < 1e-6);  // fingers never load the object
  }
}

TEST_CASE("strong friction with no object closes without slip") {
  Scenario sc = high_friction_scenario();
  sc.contact_angle_theta2.reset();
  const SimTrace trace = simulate(sc);
  CHECK(trace.summary.outcome == SimOutcome::kClosedWithoutSlip);
  CHECK_FALSE(trace.summary.slipped);
  const double limit = effective_theta_max(sc.tum);
  const SimState& last = trace.states.back();
  CHECK(std::abs(last.theta_twist) < limit);
  // The very next step would cross the stroke ceiling.
  CHECK(std::abs(last.theta_twist + sc.input_speed * sc.dt) >= limit);
  for (const SimState& s : trace.states) {
    CHECK(s.phase == Phase::kApproaching);
  }
}

TEST_CASE("reversed drive mirrors the trace") {
  const Scenario fwd = high_friction_scenario();
  Scenario rev = fwd;
  rev.input_speed = -fwd.input_speed;
  const SimTrace a = simulate(fwd);
  const SimTrace b = simulate(rev);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK_EQ(a.states[i].theta_twist, -b.states[i].theta_twist);
    CHECK_EQ(a.states[i].X, b.states[i].X);
    CHECK_EQ(a.states[i].theta2, b.states[i].theta2);
    CHECK_EQ(a.states[i].tau_transmitted, -b.states[i].tau_transmitted);
    // Fingertip torque is even in the drive direction: the twist-side signs
    // cancel in the force balance.
    CHECK_EQ(a.states[i].grasp_torque, b.states[i].grasp_torque);
  }
  CHECK_EQ(a.summary.slip_twist, -b.summary.slip_twist);
  CHECK_EQ(a.summary.peak_torque, b.summary.peak_torque);
  CHECK(b.summary.grasp_success);
}

TEST_CASE("identical scenarios produce bitwise-identical traces") {
  const SimTrace a = simulate(high_friction_scenario());
  const SimTrace b = simulate(high_friction_scenario());
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK_EQ(a.states[i].t, b.states[i].t);
    CHECK_EQ(a.states[i].theta_twist, b.states[i].theta_twist);
    CHECK_EQ(a.states[i].theta_body, b.states[i].theta_body);
    CHECK_EQ(a.states[i].X, b.states[i].X);
    CHECK_EQ(a.states[i].theta2, b.states[i].theta2);
    CHECK_EQ(a.states[i].tau_transmitted, b.states[i].tau_transmitted);
    CHECK_EQ(a.states[i].grasp_torque, b.states[i].grasp_torque);
  }
}

TEST_CASE("empirical jacobian recovers the model from a synthetic log") {
  const TumSpec tum = prototype_tum();
  const double load = 5.0;
  std::vector<LogSample> log;
  for (double theta = 0.3; theta <= 1.5; theta += 0.3) {
    log.push_back({theta, elastic_torque(tum, theta) +
                              jacobian(tum, theta) * load});
  }
  const auto samples = empirical_jacobian(log, tum, load);
  REQUIRE(samples.size() == log.size());
  for (const auto& s : samples) {
    CHECK(s.jacobian == doctest::Approx(jacobian(tum, s.theta)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(empirical_jacobian(log, tum, 0.0), DomainError);
  CHECK_THROWS_AS(empirical_jacobian({}, tum, load), DataError);
}

TEST_CASE("torque offset fit recovers a constant bias") {
  const TumSpec tum = prototype_tum();
  const double load = 5.0;
  const double bias = 7.5;
  std::vector<LogSample> log;
  for (double theta = 0.3; theta <= 1.5; theta += 0.3) {
    log.push_back({theta, elastic_torque(tum, theta) +
                              jacobian(tum, theta) * load + bias});
  }
  CHECK(fit_torque_offset(log, tum, load) ==
        doctest::Approx(bias).epsilon(1e-9));
  CHECK_THROWS_AS(fit_torque_offset({}, tum, load), DataError);
}
