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

// Slider-crank finger linkage driven by the TUM contraction.
//
// The contraction X moves a slider along the mechanism axis; a two-link chain
// (gripper link R1, finger link R2) connects the frame to the slider through
// fixed offsets a, b, c. Closing the planar loop gives
//
//     R1 cos(theta1) + R2 cos(theta2) - b - L + X = 0
//     R1 sin(theta1) + R2 sin(theta2) - a + c     = 0
//
// with theta1, theta2 measured counterclockwise from the slider axis and L
// the extended (zero-twist) TUM length. For a solvable X the loop has two
// roots (elbow above/below the chord). The default branch, `open-forward`,
// is the root whose finger link lies closest to the slider axis at that X,
// i.e. the smaller |theta2|; `open-back` selects the other. The finger
// Jacobian dtheta2/dX follows from implicit differentiation of the loop.
//
// Units: mm, rad.

#ifndef SPINEMECH_LINKAGE_HPP
#define SPINEMECH_LINKAGE_HPP

#include <array>

#include "spinemech/tum.hpp"

namespace spinemech {

enum class Branch {
  kOpenForward,  // smaller |theta2| root at the queried contraction
  kOpenBack,     // the other root
};

struct LinkageSpec {
  double offset_a = 0.0;     // lateral frame offset [mm]
  double offset_b = 0.0;     // axial frame offset [mm]
  double offset_c = 0.0;     // lateral slider offset [mm]
  double link_R1 = 0.0;      // gripper link length [mm]
  double link_R2 = 0.0;      // finger link length [mm]
  double tum_length_L = 0.0;  // extended TUM length entering the loop [mm]
  Branch branch = Branch::kOpenForward;
};

struct LinkageState {
  double contraction_X = 0.0;  // [mm]
  double theta1 = 0.0;         // gripper link angle [rad]
  double theta2 = 0.0;         // finger link angle [rad]
  double residual = 0.0;       // infinity norm of the loop equations [mm]
};

struct NewtonOptions {
  int max_iterations = 50;
  double tolerance = 1e-9;  // residual infinity norm [mm]
  int max_step_halvings = 20;
};

// Contraction interval over which the loop admits a real solution, from the
// two-link reach bounds |R1 - R2| <= dist(slider pivot) <= R1 + R2.
struct SolvableInterval {
  double x_min = 0.0;
  double x_max = 0.0;
};

// Finger sweep result over a contraction range.
struct FingerTravel {
  double theta2_start = 0.0;  // [rad]
  double theta2_end = 0.0;    // [rad]
  double travel = 0.0;        // |theta2_end - theta2_start| [rad]
  double x_end = 0.0;         // last solvable sampled contraction [mm]
  int samples_solved = 0;
};

// Throws ConfigError when link lengths are not positive or no feasible
// configuration exists at X = 0.
void validate(const LinkageSpec& spec);

// Loop equation residuals (f1, f2) [mm] at a trial configuration.
std::array<double, 2> loop_residual(const LinkageSpec& spec, double X,
                                    double theta1, double theta2);

// Solves the loop at contraction X on the spec's configured branch, seeding
// Newton from the closed-form two-link root. Geometric infeasibility throws
// GeometryError; a numerically stuck iteration throws ConvergenceError.
// Identical inputs produce bitwise-identical results.
LinkageState solve_configuration(const LinkageSpec& spec, double X,
                                 const NewtonOptions& opts = {});

// Solves the loop at contraction X starting from a caller-supplied guess;
// returns the solution branch continuous with that guess.
LinkageState solve_configuration(const LinkageSpec& spec, double X,
                                 double guess_theta1, double guess_theta2,
                                 const NewtonOptions& opts = {});

// Finger Jacobian J_g = dtheta2/dX [rad/mm] at a solved state, via the 2x2
// linear system of the differentiated loop. Throws SingularityError at dead
// points (links aligned, constraint matrix singular) and DomainError when
// the state does not actually solve the loop at its contraction.
double finger_jacobian(const LinkageSpec& spec, const LinkageState& state);

SolvableInterval solvable_interval(const LinkageSpec& spec);

// Sweeps X from 0 in fixed steps while the loop stays solvable and X <= x_max,
// carrying the branch by continuity (each solve seeded from the previous
// state). The travel metric depends on the step near fold-over, so the step
// is an explicit part of the contract.
FingerTravel finger_travel(const LinkageSpec& spec, double x_max, double step);

// Fingertip torque from an input torque at twist theta:
// tau_g = J_g(X(theta)) * (tau_in / J(theta) - N * F_s(theta)) [J_g in rad/mm].
// Composes the TUM force balance with the linkage Jacobian on the
// spec's configured branch.
double grasp_torque(const TumSpec& tum, const LinkageSpec& linkage,
                    double theta, double tau_in,
                    double theta_floor = kDefaultThetaFloor);

}  // namespace spinemech

#endif  // SPINEMECH_LINKAGE_HPP
