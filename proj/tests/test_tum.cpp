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

// Twist kinematics and strip elasticity. Expected values were frozen from an
// independent high-precision re-computation of the closed forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spinemech/errors.hpp"
#include "spinemech/tum.hpp"
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
  s.max_rotation_theta_max = 1.8325957145940461;  // 105 deg
  return s;
}

constexpr double kTheta105 = 1.8325957145940461;

}  // namespace

TEST_CASE("prototype spec validates") {
  CHECK_NOTHROW(validate(prototype_tum()));
}

TEST_CASE("validation rejects broken invariants") {
  const TumSpec base = prototype_tum();
  auto broken = base;
  broken.radius_R = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.strip_length_L = -1.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.n_strips = 0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.strip_width_w1 = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.top_plate_thickness_w2 = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.bottom_plate_thickness_w3 = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.youngs_modulus_E = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.second_moment_I = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.max_rotation_theta_max = 0.0;
  CHECK_THROWS_AS(validate(broken), ConfigError);
  broken = base;
  broken.max_rotation_theta_max = 2.0;  // L/R exactly, singular
  CHECK_THROWS_AS(validate(broken), ConfigError);
}

TEST_CASE("contraction matches frozen prototype values") {
  const TumSpec s = prototype_tum();
  CHECK(contraction(s, 0.0) == 0.0);
  CHECK(contraction(s, kTheta105) ==
        doctest::Approx(23.980100538997906).epsilon(1e-13));
  CHECK(contraction(s, 1.0) ==
        doctest::Approx(5.3589838486224508).epsilon(1e-13));
}

TEST_CASE("contraction at 105 degrees hits the documented stroke") {
  // Reference design point: 23.98 mm at the stroke end.
  const double X = contraction(prototype_tum(), deg_to_rad(105.0));
  CHECK(std::abs(X - 23.98) < 0.01);
}

TEST_CASE("contraction is even and jacobian odd, bit-exactly") {
  const TumSpec s = prototype_tum();
  std::mt19937_64 rng(20260815);
  std::uniform_real_distribution<double> dist(0.0, effective_theta_max(s));
  for (int i = 0; i < 10000; ++i) {
    const double theta = dist(rng);
    CHECK_EQ(contraction(s, theta), contraction(s, -theta));
    CHECK_EQ(jacobian(s, -theta), -jacobian(s, theta));
    CHECK_EQ(chord_shortening(s, theta), chord_shortening(s, -theta));
    CHECK_EQ(beta_angle(s, theta), beta_angle(s, -theta));
    CHECK_EQ(elastic_torque(s, -theta), -elastic_torque(s, theta));
  }
}

TEST_CASE("jacobian matches finite differences") {
  const TumSpec s = prototype_tum();
  const double h = 1e-6;
  for (int i = 0; i <= 500; ++i) {
    const double theta =
        0.05 + (0.95 * s.strip_length_L / s.radius_R - 0.05) * i / 500.0;
    const double fd =
        (contraction(s, theta + h) - contraction(s, theta - h)) / (2.0 * h);
    const double j = jacobian(s, theta);
    CHECK(std::abs(fd - j) <= 1e-6 * std::abs(j));
  }
}

TEST_CASE("jacobian limit and contraction rate") {
  const TumSpec s = prototype_tum();
  CHECK(jacobian(s, 0.0) == 0.0);
  CHECK(jacobian(s, 1.0) == doctest::Approx(11.547005383792515).epsilon(1e-13));
  CHECK(jacobian(s, kTheta105) ==
        doctest::Approx(45.757982915066599).epsilon(1e-13));
  CHECK(contraction_rate(s, 1.0, 2.0) ==
        doctest::Approx(2.0 * 11.547005383792515).epsilon(1e-13));
}

TEST_CASE("rotation_for_contraction inverts contraction") {
  const TumSpec s = prototype_tum();
  for (double theta = 0.01; theta < 1.83; theta += 0.0375) {
    const double X = contraction(s, theta);
    CHECK(rotation_for_contraction(s, X) ==
          doctest::Approx(theta).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rotation_for_contraction(s, -0.5), DomainError);
  CHECK_THROWS_AS(rotation_for_contraction(s, 40.0), DomainError);
}

TEST_CASE("kinematic singularity raises past R*theta = L") {
  const TumSpec s = prototype_tum();
  CHECK_THROWS_AS(contraction(s, 2.0), SingularityError);
  CHECK_THROWS_AS(contraction(s, -2.0), SingularityError);
  CHECK_THROWS_AS(jacobian(s, 2.0), SingularityError);
  CHECK_NOTHROW(contraction(s, 1.9999));
}

TEST_CASE("effective stroke ceiling") {
  TumSpec s = prototype_tum();
  CHECK(effective_theta_max(s) == kTheta105);  // configured limit binds
  s.max_rotation_theta_max = 1.99;             // ceiling 0.99 * L / R binds
  CHECK(effective_theta_max(s) == doctest::Approx(1.98).epsilon(1e-13));
}

TEST_CASE("chord shortening, inclination and buckling at frozen points") {
  const TumSpec s = prototype_tum();
  CHECK(chord_shortening(s, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(chord_shortening(s, kTheta105) ==
        doctest::Approx(4.4515483484493856).epsilon(1e-12));
  CHECK(chord_shortening(s, 1.0) ==
        doctest::Approx(0.40507412173261059).epsilon(1e-12));
  CHECK(beta_angle(s, kTheta105) ==
        doctest::Approx(1.1033033176990978).epsilon(1e-13));
  CHECK(beta_angle(s, 1.0) ==
        doctest::Approx(0.50559751085376015).epsilon(1e-13));
  CHECK(buckling_load(s, kTheta105) ==
        doctest::Approx(16.02639059432666).epsilon(1e-13));
  CHECK(buckling_load(s, 1.0) ==
        doctest::Approx(12.918081888139842).epsilon(1e-13));
  // P(0) = pi^2 EI / L^2, beta(0) = 0, so F_s(0) = P(0).
  CHECK(buckling_load(s, 0.0) ==
        doctest::Approx(12.657767644397103).epsilon(1e-13));
  CHECK(strip_axial_force(s, 0.0) ==
        doctest::Approx(12.657767644397103).epsilon(1e-13));
}

TEST_CASE("axial force and torque at frozen points") {
  const TumSpec s = prototype_tum();
  CHECK(strip_axial_force(s, kTheta105) ==
        doctest::Approx(7.2222882886845428).epsilon(1e-13));
  CHECK(strip_axial_force(s, 1.0) ==
        doctest::Approx(11.301839147462291).epsilon(1e-13));
  CHECK(elastic_torque(s, 0.0) == 0.0);
  CHECK(elastic_torque(s, kTheta105) ==
        doctest::Approx(330.47734412131291).epsilon(1e-13));
  CHECK(elastic_torque(s, 1.0) ==
        doctest::Approx(130.50239748250408).epsilon(1e-13));

  TumSpec four = s;
  four.n_strips = 4;
  CHECK(total_elastic_force(four, 0.0) ==
        doctest::Approx(4.0 * 12.657767644397103).epsilon(1e-13));
  CHECK(elastic_torque(four, kTheta105) ==
        doctest::Approx(4.0 * 330.47734412131291).epsilon(1e-13));
}

TEST_CASE("elastic torque is monotone increasing over the stroke") {
  const TumSpec s = prototype_tum();
  double prev = 0.0;
  for (int i = 1; i <= 420; ++i) {
    const double theta = kTheta105 * i / 420.0;
    const double tau = elastic_torque(s, theta);
    CHECK(tau > prev);
    prev = tau;
  }
}

TEST_CASE("compact closed-form force route diverges from the composed route") {
  const TumSpec s = prototype_tum();
  CHECK(strip_axial_force_compact(s, kTheta105) ==
        doctest::Approx(12.58621).epsilon(1e-5));
  // The divergence is reported, never patched over.
  CHECK(force_route_divergence(s, kTheta105) ==
        doctest::Approx(0.742690).epsilon(1e-3));
}

TEST_CASE("contraction force and twist floor") {
  const TumSpec s = prototype_tum();
  CHECK(contraction_force(s, 1.0, 300.0) ==
        doctest::Approx(14.67892296607087).epsilon(1e-12));
  CHECK_THROWS_AS(contraction_force(s, 1e-4, 300.0), SingularityError);
  CHECK_NOTHROW(contraction_force(s, 1e-4, 300.0, 1e-5));
}

TEST_CASE("strip state assembles the per-strip quantities") {
  const TumSpec s = prototype_tum();
  const StripState st = strip_state(s, 1.0);
  CHECK(st.theta == 1.0);
  CHECK(st.contraction == contraction(s, 1.0));
  CHECK(st.chord_shortening == chord_shortening(s, 1.0));
  CHECK(st.beta == beta_angle(s, 1.0));
  CHECK(st.buckling_load == buckling_load(s, 1.0));
  CHECK(st.axial_force == strip_axial_force(s, 1.0));
}

TEST_CASE("deflection profile pins both strip ends") {
  const TumSpec s = prototype_tum();
  const DeflectionProfile p = deflection_profile(s, 1.0, 2.0, 9);
  CHECK(p.samples.size() == 9);
  CHECK(p.half_wave_length ==
        doctest::Approx(40.0 - 0.40507412173261059).epsilon(1e-12));
  CHECK(p.amplitude == 2.0);
  CHECK(p.samples.front().first == 0.0);
  CHECK(p.samples.front().second == 0.0);
  CHECK(p.samples.back().first == p.half_wave_length);
  CHECK(p.samples.back().second == 0.0);
  // Mid sample sits at the half-sine crest.
  CHECK(p.samples[4].second == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(deflection_profile(s, 1.0, 2.0, 1), DomainError);
}

TEST_CASE("strip inclination and inter-strip distance") {
  const TumSpec s = prototype_tum();
  CHECK(strip_inclination(s, 0.0) ==
        doctest::Approx(0.1001674211615598).epsilon(1e-13));
  CHECK(inter_strip_distance(s, 0.0) ==
        doctest::Approx(12.566370614359172).epsilon(1e-13));
  // arcsin argument above 1 leaves the model's domain.
  CHECK_THROWS_AS(strip_inclination(s, 37.0), DomainError);
}

TEST_CASE("radius constraint for the prototype") {
  const TumSpec s = prototype_tum();
  const RadiusCheck rc = check_radius_constraint(s);
  CHECK(rc.pass);
  CHECK(rc.min_radius == doctest::Approx(7.9577471545947667).epsilon(1e-13));
  CHECK(rc.margin == doctest::Approx(12.042252845405233).epsilon(1e-13));

  TumSpec tight = s;
  tight.strip_width_w1 = 20.0;  // min radius 31.8 mm > R
  CHECK_FALSE(check_radius_constraint(tight).pass);

  TumSpec degenerate = s;
  degenerate.top_plate_thickness_w2 = 0.0;
  degenerate.bottom_plate_thickness_w3 = 0.0;
  CHECK_THROWS_AS(check_radius_constraint(degenerate), DomainError);
}

TEST_CASE("max holding torque equals the stroke-end torque when monotone") {
  const TumSpec s = prototype_tum();
  CHECK(max_holding_torque(s) ==
        doctest::Approx(330.47734412131291).epsilon(1e-12));
}

TEST_CASE("strip count calibration picks the closest integer") {
  const TumSpec s = prototype_tum();
  const StripCountFit fit = calibrate_strip_count(s, 115.0, 80.0, 180.0);
  CHECK(fit.n_strips == 1);
  CHECK(fit.model_torque == doctest::Approx(330.47734412131291).epsilon(1e-12));
  CHECK(fit.residual == doctest::Approx(215.47734412131291).epsilon(1e-12));
  CHECK_FALSE(fit.in_band);

  // An anchor near the two-strip torque selects n = 2 and lands in band.
  const StripCountFit two = calibrate_strip_count(s, 700.0, 600.0, 700.0);
  CHECK(two.n_strips == 2);
  CHECK(two.model_torque ==
        doctest::Approx(2.0 * 330.47734412131291).epsilon(1e-12));
  CHECK(two.in_band);
}
