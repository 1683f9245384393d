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

#include "spinemech/tum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinemech/errors.hpp"
#include "spinemech/units.hpp"

namespace spinemech {

namespace {

// Squared distance between the endpoints of a buckled strip:
// L^2 - (R theta)^2 + 4 R^2 sin^2(theta/2). Everything downstream of the
// buckling model keys off this one radicand. Even in theta by construction
// (|theta| feeds the only odd term).
double chord_radicand(const TumSpec& spec, double theta) {
  const double u = spec.radius_R * theta;
  const double s = std::sin(std::abs(theta) * 0.5);
  return spec.strip_length_L * spec.strip_length_L - u * u +
         4.0 * spec.radius_R * spec.radius_R * s * s;
}

void require_within_singularity(const TumSpec& spec, double theta,
                                const char* op) {
  const double u = spec.radius_R * std::abs(theta);
  if (u >= spec.strip_length_L) {
    throw SingularityError(std::string(op) + ": R*|theta| = " +
                           std::to_string(u) + " mm reaches strip length " +
                           std::to_string(spec.strip_length_L) + " mm");
  }
}

}  // namespace

void validate(const TumSpec& spec) {
  if (!(spec.radius_R > 0.0)) throw ConfigError("tum: radius_R must be > 0");
  if (!(spec.strip_length_L > 0.0))
    throw ConfigError("tum: strip_length_L must be > 0");
  if (spec.n_strips < 1) throw ConfigError("tum: n_strips must be >= 1");
  if (!(spec.strip_width_w1 > 0.0))
    throw ConfigError("tum: strip_width_w1 must be > 0");
  if (!(spec.top_plate_thickness_w2 > 0.0))
    throw ConfigError("tum: top_plate_thickness_w2 must be > 0");
  if (!(spec.bottom_plate_thickness_w3 > 0.0))
    throw ConfigError("tum: bottom_plate_thickness_w3 must be > 0");
  if (!(spec.youngs_modulus_E > 0.0))
    throw ConfigError("tum: youngs_modulus_E must be > 0");
  if (!(spec.second_moment_I > 0.0))
    throw ConfigError("tum: second_moment_I must be > 0");
  if (!(spec.max_rotation_theta_max > 0.0))
    throw ConfigError("tum: max_rotation_theta_max must be > 0");
  if (!(spec.max_rotation_theta_max <
        spec.strip_length_L / spec.radius_R)) {
    throw ConfigError("tum: max_rotation_theta_max must stay below L/R");
  }
}

double effective_theta_max(const TumSpec& spec) {
  return std::min(spec.max_rotation_theta_max,
                  kStrokeCeilingFraction * spec.strip_length_L / spec.radius_R);
}

double strip_inclination(const TumSpec& spec, double spacer_thickness) {
  const double stack = spec.top_plate_thickness_w2 +
                       spec.bottom_plate_thickness_w3 + spacer_thickness;
  const double ratio = stack / spec.strip_length_L;
  if (ratio < 0.0 || ratio > 1.0) {
    throw DomainError("strip_inclination: (w2 + w3 + spacer)/L = " +
                      std::to_string(ratio) + " outside [0, 1]");
  }
  return std::asin(ratio);
}

double inter_strip_distance(const TumSpec& spec, double spacer_thickness) {
  const double stack = spec.top_plate_thickness_w2 +
                       spec.bottom_plate_thickness_w3 + spacer_thickness;
  return 2.0 * kPi * spec.radius_R * stack /
         (static_cast<double>(spec.n_strips) * spec.strip_length_L);
}

RadiusCheck check_radius_constraint(const TumSpec& spec) {
  const double plates =
      spec.top_plate_thickness_w2 + spec.bottom_plate_thickness_w3;
  if (!(plates > 0.0)) {
    throw DomainError(
        "check_radius_constraint: w2 + w3 must be > 0 for the bound");
  }
  RadiusCheck out;
  out.min_radius = spec.strip_width_w1 * static_cast<double>(spec.n_strips) *
                   spec.strip_length_L / (2.0 * kPi * plates);
  out.margin = spec.radius_R - out.min_radius;
  out.pass = spec.radius_R >= out.min_radius;
  return out;
}

double contraction(const TumSpec& spec, double theta) {
  require_within_singularity(spec, theta, "contraction");
  const double L = spec.strip_length_L;
  const double u = spec.radius_R * theta;
  // L - sqrt(L^2 - u^2), written cancellation-free.
  return u * u / (L + std::sqrt(L * L - u * u));
}

double rotation_for_contraction(const TumSpec& spec, double X) {
  const double L = spec.strip_length_L;
  if (X < 0.0) {
    throw DomainError("rotation_for_contraction: X < 0");
  }
  if (X >= L) {
    throw DomainError("rotation_for_contraction: X = " + std::to_string(X) +
                      " mm out of stroke (limit " + std::to_string(L) + " mm)");
  }
  // L^2 - (L - X)^2 == X (2L - X), exact rearrangement.
  return std::sqrt(X * (2.0 * L - X)) / spec.radius_R;
}

double jacobian(const TumSpec& spec, double theta) {
  require_within_singularity(spec, theta, "jacobian");
  const double L = spec.strip_length_L;
  const double u = spec.radius_R * theta;
  return spec.radius_R * spec.radius_R * theta / std::sqrt(L * L - u * u);
}

double contraction_rate(const TumSpec& spec, double theta, double theta_dot) {
  return jacobian(spec, theta) * theta_dot;
}

double chord_shortening(const TumSpec& spec, double theta) {
  const double rad = chord_radicand(spec, theta);
  if (!(rad > 0.0)) {
    throw DomainError("chord_shortening: endpoint distance radicand " +
                      std::to_string(rad) + " not positive");
  }
  const double L = spec.strip_length_L;
  const double u = spec.radius_R * theta;
  const double s = std::sin(std::abs(theta) * 0.5);
  const double w = 4.0 * spec.radius_R * spec.radius_R * s * s;
  // L - sqrt(rad) with rad = L^2 - u^2 + w, written cancellation-free.
  return (u * u - w) / (L + std::sqrt(rad));
}

double beta_angle(const TumSpec& spec, double theta) {
  require_within_singularity(spec, theta, "beta_angle");
  const double L = spec.strip_length_L;
  const double u = spec.radius_R * theta;
  const double lateral = 2.0 * spec.radius_R * std::sin(std::abs(theta) * 0.5);
  // L - X == sqrt(L^2 - u^2).
  return std::atan2(lateral, std::sqrt(L * L - u * u));
}

double buckling_load(const TumSpec& spec, double theta) {
  const double rad = chord_radicand(spec, theta);
  if (!(rad > 0.0)) {
    throw DomainError("buckling_load: endpoint distance radicand not positive");
  }
  // (pi / (L - dS))^2 EI with (L - dS)^2 == rad.
  return kPi * kPi * spec.youngs_modulus_E * spec.second_moment_I / rad;
}

DeflectionProfile deflection_profile(const TumSpec& spec, double theta,
                                     double amplitude, int n_samples) {
  if (n_samples < 2) {
    throw DomainError("deflection_profile: n_samples must be >= 2");
  }
  const double rad = chord_radicand(spec, theta);
  if (!(rad > 0.0)) {
    throw DomainError("deflection_profile: endpoint distance radicand not positive");
  }
  DeflectionProfile out;
  out.amplitude = amplitude;
  out.half_wave_length = std::sqrt(rad);
  out.samples.reserve(static_cast<std::size_t>(n_samples));
  const double h = out.half_wave_length / static_cast<double>(n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const bool boundary = (i == 0) || (i == n_samples - 1);
    const double s = boundary && i != 0 ? out.half_wave_length
                                        : static_cast<double>(i) * h;
    // Pinned ends: y vanishes exactly at both boundaries.
    const double y =
        boundary ? 0.0 : amplitude * std::sin(kPi * s / out.half_wave_length);
    out.samples.emplace_back(s, y);
  }
  return out;
}

double strip_axial_force(const TumSpec& spec, double theta) {
  return buckling_load(spec, theta) * std::cos(beta_angle(spec, theta));
}

double strip_axial_force_compact(const TumSpec& spec, double theta) {
  const double R = spec.radius_R;
  const double L = spec.strip_length_L;
  const double u = R * theta;
  const double rad = chord_radicand(spec, theta);
  const double num = spec.youngs_modulus_E * spec.second_moment_I * kPi * kPi;
  // Denominator transcribed as published; the sqrt(2 R^2) term carries
  // length units against squared-length neighbours.
  const double den =
      std::sqrt(2.0 * R * R) - 2.0 * R * R * std::cos(theta) + L * L - u * u;
  if (den == 0.0 || rad <= 0.0) {
    throw DomainError("strip_axial_force_compact: degenerate denominator");
  }
  return num / rad * (R * R * std::sin(theta)) / den;
}

double force_route_divergence(const TumSpec& spec, double theta) {
  const double composed = strip_axial_force(spec, theta);
  const double compact = strip_axial_force_compact(spec, theta);
  return std::abs(compact - composed) / std::abs(composed);
}

double total_elastic_force(const TumSpec& spec, double theta) {
  return static_cast<double>(spec.n_strips) * strip_axial_force(spec, theta);
}

double elastic_torque(const TumSpec& spec, double theta) {
  if (theta == 0.0) return 0.0;  // limit value, J(0) = 0
  return jacobian(spec, theta) * total_elastic_force(spec, theta);
}

double contraction_force(const TumSpec& spec, double theta, double tau_in,
                         double theta_floor) {
  if (std::abs(theta) < theta_floor) {
    throw SingularityError(
        "contraction_force: |theta| below the transmission floor " +
        std::to_string(theta_floor) + " rad, inverse Jacobian undefined");
  }
  return tau_in / jacobian(spec, theta) - total_elastic_force(spec, theta);
}

StripState strip_state(const TumSpec& spec, double theta) {
  StripState st;
  st.theta = theta;
  st.contraction = contraction(spec, theta);
  st.chord_shortening = chord_shortening(spec, theta);
  st.beta = beta_angle(spec, theta);
  st.buckling_load = buckling_load(spec, theta);
  st.axial_force = strip_axial_force(spec, theta);
  return st;
}

double max_holding_torque(const TumSpec& spec) {
  const double theta_end = effective_theta_max(spec);
  constexpr int kGrid = 1024;
  double best = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double theta =
        theta_end * static_cast<double>(i) / static_cast<double>(kGrid);
    best = std::max(best, std::abs(elastic_torque(spec, theta)));
  }
  return best;
}

StripCountFit calibrate_strip_count(const TumSpec& spec, double anchor_torque,
                                    double band_lo, double band_hi) {
  const double theta_end = effective_theta_max(spec);
  StripCountFit fit;
  double best_abs = 0.0;
  for (int n = 1; n <= 16; ++n) {
    TumSpec candidate = spec;
    candidate.n_strips = n;
    const double tau = std::abs(elastic_torque(candidate, theta_end));
    const double err = std::abs(tau - anchor_torque);
    if (fit.n_strips == 0 || err < best_abs) {
      best_abs = err;
      fit.n_strips = n;
      fit.model_torque = tau;
    }
  }
  fit.residual = fit.model_torque - anchor_torque;
  TumSpec fitted = spec;
  fitted.n_strips = fit.n_strips;
  fit.max_holding_torque = max_holding_torque(fitted);
  fit.in_band =
      fit.max_holding_torque >= band_lo && fit.max_holding_torque <= band_hi;
  return fit;
}

}  // namespace spinemech
