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

// Twisted underactuated mechanism (TUM) kinematics and strip elasticity.
//
// The mechanism is a pair of plates joined by N thin compliant strips of
// length L arranged on a circle of radius R. Twisting the plates by theta
// wraps each strip attachment through an arc R*theta, which pulls the plates
// together. Treating the strip chord as inextensible gives the contraction
//
//     X(theta) = L - sqrt(L^2 - (R*theta)^2),
//
// valid while R*|theta| < L (the transmission singularity where the strip
// chord becomes tangential). X is even in theta: twist direction does not
// matter. The transmission Jacobian dX/dtheta follows by differentiation.
//
// Each strip also buckles: the twist shortens the straight-line distance
// between its endpoints by dS, and the strip, clamped at both ends, bows out
// with a half-sine lateral profile y(s) = A sin(pi s / (L - dS)). The axial
// load it can sustain in that state is the critical column load
// P = (pi/(L-dS))^2 EI. The endpoint chord is inclined at beta to the plate
// axis, so the axial (plate-separating) component of the strip force is
// F_s = P cos(beta). Restoring torque about the twist axis follows from
// virtual work: tau_s = J(theta) * N * F_s(theta).
//
// Units: mm, rad, N, N*mm.

#ifndef SPINEMECH_TUM_HPP
#define SPINEMECH_TUM_HPP

#include <utility>
#include <vector>

namespace spinemech {

// Twist angle below which inverse-Jacobian operations refuse to divide.
inline constexpr double kDefaultThetaFloor = 1e-3;  // rad

// Fraction of the kinematic singularity L/R used as the hard stroke ceiling.
inline constexpr double kStrokeCeilingFraction = 0.99;

struct TumSpec {
  double radius_R = 0.0;                 // strip attachment circle radius [mm]
  double strip_length_L = 0.0;           // compliant strip length [mm]
  int n_strips = 0;                      // number of strips
  double strip_width_w1 = 0.0;           // strip width [mm]
  double top_plate_thickness_w2 = 0.0;   // [mm]
  double bottom_plate_thickness_w3 = 0.0;  // [mm]
  double youngs_modulus_E = 0.0;         // [N/mm^2]
  double second_moment_I = 0.0;          // strip section second moment [mm^4]
  double max_rotation_theta_max = 0.0;   // configured stroke limit [rad]
};

// Kinematic/elastic state of one strip at a given twist.
struct StripState {
  double theta = 0.0;        // twist [rad]
  double contraction = 0.0;  // X [mm]
  double chord_shortening = 0.0;  // dS [mm]
  double beta = 0.0;         // chord inclination [rad]
  double buckling_load = 0.0;     // P [N]
  double axial_force = 0.0;  // F_s = P cos(beta), single strip [N]
};

// Sampled lateral deflection y(s) of a buckled strip.
struct DeflectionProfile {
  double amplitude = 0.0;     // A [mm]
  double half_wave_length = 0.0;  // L - dS [mm]
  std::vector<std::pair<double, double>> samples;  // (s [mm], y [mm])
};

struct RadiusCheck {
  bool pass = false;
  double min_radius = 0.0;  // smallest admissible R [mm]
  double margin = 0.0;      // R - min_radius [mm]
};

struct StripCountFit {
  int n_strips = 0;            // integer count minimizing the anchor residual
  double model_torque = 0.0;   // elastic torque at the anchor twist [N*mm]
  double residual = 0.0;       // model_torque - anchor [N*mm]
  double max_holding_torque = 0.0;  // over the stroke, at the fitted count
  bool in_band = false;        // max_holding_torque inside the requested band
};

// Throws ConfigError when the spec breaks its invariants (positive lengths,
// n_strips >= 1, E > 0, I > 0, 0 < theta_max < L/R).
void validate(const TumSpec& spec);

// Stroke ceiling actually enforced by consumers:
// min(max_rotation_theta_max, kStrokeCeilingFraction * L / R).
double effective_theta_max(const TumSpec& spec);

// Strip inclination alpha = arcsin((w2 + w3 + spacer) / L) [rad].
// Throws DomainError when the argument leaves [0, 1].
double strip_inclination(const TumSpec& spec, double spacer_thickness);

// Circumferential distance between adjacent strip edges for a given spacer,
// d_w = 2 pi R (w2 + w3 + spacer) / (N L) [mm].
double inter_strip_distance(const TumSpec& spec, double spacer_thickness);

// Non-interference bound R >= w1 N L / (2 pi (w2 + w3)), evaluated with no
// spacer. Throws DomainError when w2 + w3 == 0 (degenerate plates).
RadiusCheck check_radius_constraint(const TumSpec& spec);

// Plate-to-plate contraction X(theta) [mm]. Even in theta.
// Throws SingularityError when R*|theta| >= L.
double contraction(const TumSpec& spec, double theta);

// Inverse kinematics: twist producing contraction X, theta >= 0.
// Throws DomainError when X < 0 or X >= L (out of stroke).
double rotation_for_contraction(const TumSpec& spec, double X);

// Transmission Jacobian dX/dtheta [mm/rad]. Odd in theta, zero at theta = 0.
// Throws SingularityError when R*|theta| >= L.
double jacobian(const TumSpec& spec, double theta);

// Contraction speed for a given twist rate [mm/s].
double contraction_rate(const TumSpec& spec, double theta, double theta_dot);

// Endpoint chord shortening dS(theta) [mm]. Even in theta, dS(0) = 0.
// The buckled-strip endpoints are separated by
// sqrt(L^2 - (R theta)^2 + 4 R^2 sin^2(theta/2)); throws DomainError when
// that radicand is not positive.
double chord_shortening(const TumSpec& spec, double theta);

// Chord inclination beta(theta) = arctan(2 R |sin(theta/2)| / (L - X)) [rad].
// Even in theta.
double beta_angle(const TumSpec& spec, double theta);

// Critical axial load of the buckled strip, P = (pi/(L-dS))^2 EI [N].
// P(0) = pi^2 EI / L^2.
double buckling_load(const TumSpec& spec, double theta);

// Lateral half-sine profile of a buckled strip sampled at n_samples points
// over s in [0, L - dS]. Endpoints are exactly zero. n_samples >= 2.
DeflectionProfile deflection_profile(const TumSpec& spec, double theta,
                                     double amplitude, int n_samples);

// Axial force of a single strip, F_s = P(theta) cos(beta(theta)) [N].
double strip_axial_force(const TumSpec& spec, double theta);

// Compact closed-form variant of the single-strip axial force. Kept only for
// cross-checking: the expression is dimensionally inconsistent (a length term
// added to squared lengths in its denominator) and is known to diverge from
// the composed route. Do not use for predictions.
double strip_axial_force_compact(const TumSpec& spec, double theta);

// Relative divergence |compact - composed| / composed of the two force
// routes at the given twist. Reported, never silently corrected.
double force_route_divergence(const TumSpec& spec, double theta);

// Total axial elastic force of all strips, N * F_s [N].
double total_elastic_force(const TumSpec& spec, double theta);

// Restoring torque tau_s = J(theta) * N * F_s(theta) [N*mm]. Odd in theta;
// returns exactly 0 at theta = 0 (limit value, J(0) = 0).
double elastic_torque(const TumSpec& spec, double theta);

// Net contraction force available at the output,
// F_c = tau_in / J(theta) - N * F_s(theta) [N].
// Throws SingularityError when |theta| < theta_floor (J^-1 undefined).
double contraction_force(const TumSpec& spec, double theta, double tau_in,
                         double theta_floor = kDefaultThetaFloor);

// Assembles the full per-strip state at one twist.
StripState strip_state(const TumSpec& spec, double theta);

// Largest |elastic_torque| over the effective stroke, sampled on a dense
// grid. This is the torque a friction stage must exceed to hold the twist.
double max_holding_torque(const TumSpec& spec);

// Fits the integer strip count whose elastic torque at the spec's effective
// stroke end is closest to anchor_torque, searching n in [1, 16]. Reports
// whether the resulting max holding torque falls inside [band_lo, band_hi].
StripCountFit calibrate_strip_count(const TumSpec& spec, double anchor_torque,
                                    double band_lo, double band_hi);

}  // namespace spinemech

#endif  // SPINEMECH_TUM_HPP
