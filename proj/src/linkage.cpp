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

#include "spinemech/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinemech/errors.hpp"
#include "spinemech/units.hpp"

namespace spinemech {

namespace {

constexpr double kReachSlack = 1e-9;      // fp slack on the reach boundary
constexpr double kStatePreTol = 1e-6;     // residual bound for "solved" states
constexpr double kAlignedSinFloor = 1e-10;  // dead-point detector

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct LoopTarget {
  double x;  // axial reach b + L - X [mm]
  double y;  // lateral reach a - c [mm]
};

LoopTarget loop_target(const LinkageSpec& spec, double X) {
  return {spec.offset_b + spec.tum_length_L - X, spec.offset_a - spec.offset_c};
}

struct RootPair {
  double theta1[2];
  double theta2[2];
};

// Closed-form two-link roots (elbow on either side of the reach chord).
// Throws GeometryError when the slider pivot is outside the annulus the
// chain can reach.
RootPair closed_form_roots(const LinkageSpec& spec, double X) {
  const LoopTarget t = loop_target(spec, X);
  const double r1 = spec.link_R1;
  const double r2 = spec.link_R2;
  const double d2 = t.x * t.x + t.y * t.y;
  double cpsi = (d2 - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
  if (cpsi > 1.0 + kReachSlack || cpsi < -1.0 - kReachSlack) {
    throw GeometryError(
        "linkage loop has no real solution at X = " + std::to_string(X) +
        " mm (reach " + std::to_string(std::sqrt(d2)) + " mm outside [" +
        std::to_string(std::abs(r1 - r2)) + ", " + std::to_string(r1 + r2) +
        "])");
  }
  cpsi = std::clamp(cpsi, -1.0, 1.0);
  RootPair out{};
  const double base = std::atan2(t.y, t.x);
  for (int k = 0; k < 2; ++k) {
    const double psi = (k == 0 ? 1.0 : -1.0) * std::acos(cpsi);
    const double th1 =
        base - std::atan2(r2 * std::sin(psi), r1 + r2 * std::cos(psi));
    out.theta1[k] = normalize_angle(th1);
    out.theta2[k] = normalize_angle(th1 + psi);
  }
  return out;
}

// open-forward: the root whose finger link lies closest to the slider axis.
int pick_branch(const RootPair& roots, Branch branch) {
  int forward = std::abs(roots.theta2[0]) <= std::abs(roots.theta2[1]) ? 0 : 1;
  if (std::abs(roots.theta2[0]) == std::abs(roots.theta2[1])) {
    forward = roots.theta2[0] >= roots.theta2[1] ? 0 : 1;  // tie: positive side
  }
  return branch == Branch::kOpenForward ? forward : 1 - forward;
}

double residual_norm(const std::array<double, 2>& f) {
  return std::max(std::abs(f[0]), std::abs(f[1]));
}

LinkageState newton_polish(const LinkageSpec& spec, double X, double th1,
                           double th2, const NewtonOptions& opts) {
  std::array<double, 2> f = loop_residual(spec, X, th1, th2);
  double norm = residual_norm(f);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (norm <= opts.tolerance) {
      return LinkageState{X, normalize_angle(th1), normalize_angle(th2), norm};
    }
    const double s1 = std::sin(th1), c1 = std::cos(th1);
    const double s2 = std::sin(th2), c2 = std::cos(th2);
    // d(f)/d(theta): [[-R1 s1, -R2 s2], [R1 c1, R2 c2]]
    const double a00 = -spec.link_R1 * s1, a01 = -spec.link_R2 * s2;
    const double a10 = spec.link_R1 * c1, a11 = spec.link_R2 * c2;
    const double det = a00 * a11 - a01 * a10;
    if (std::abs(det) < kAlignedSinFloor * spec.link_R1 * spec.link_R2) {
      throw ConvergenceError(
          "linkage solve: constraint matrix singular at residual " +
          std::to_string(norm) + " mm");
    }
    double d1 = (-f[0] * a11 + f[1] * a01) / det;
    double d2 = (f[0] * a10 - f[1] * a00) / det;
    // Damp by halving until the residual actually decreases.
    bool accepted = false;
    for (int h = 0; h <= opts.max_step_halvings; ++h) {
      const std::array<double, 2> trial =
          loop_residual(spec, X, th1 + d1, th2 + d2);
      const double trial_norm = residual_norm(trial);
      if (trial_norm < norm) {
        th1 += d1;
        th2 += d2;
        f = trial;
        norm = trial_norm;
        accepted = true;
        break;
      }
      d1 *= 0.5;
      d2 *= 0.5;
    }
    if (!accepted) {
      throw ConvergenceError(
          "linkage solve stalled at residual " + std::to_string(norm) +
          " mm after " + std::to_string(iter + 1) + " iterations");
    }
  }
  if (norm <= opts.tolerance) {
    return LinkageState{X, normalize_angle(th1), normalize_angle(th2), norm};
  }
  throw ConvergenceError("linkage solve: residual " + std::to_string(norm) +
                         " mm above tolerance after " +
                         std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace

void validate(const LinkageSpec& spec) {
  if (!(spec.link_R1 > 0.0)) throw ConfigError("linkage: link_R1 must be > 0");
  if (!(spec.link_R2 > 0.0)) throw ConfigError("linkage: link_R2 must be > 0");
  if (!(spec.tum_length_L > 0.0))
    throw ConfigError("linkage: tum_length_L must be > 0");
  try {
    solve_configuration(spec, 0.0);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("linkage: no feasible configuration at X = 0: ") +
                      e.what());
  }
}

std::array<double, 2> loop_residual(const LinkageSpec& spec, double X,
                                    double theta1, double theta2) {
  return {spec.link_R1 * std::cos(theta1) + spec.link_R2 * std::cos(theta2) -
              spec.offset_b - spec.tum_length_L + X,
          spec.link_R1 * std::sin(theta1) + spec.link_R2 * std::sin(theta2) -
              spec.offset_a + spec.offset_c};
}

LinkageState solve_configuration(const LinkageSpec& spec, double X,
                                 const NewtonOptions& opts) {
  const RootPair roots = closed_form_roots(spec, X);
  const int k = pick_branch(roots, spec.branch);
  return newton_polish(spec, X, roots.theta1[k], roots.theta2[k], opts);
}

LinkageState solve_configuration(const LinkageSpec& spec, double X,
                                 double guess_theta1, double guess_theta2,
                                 const NewtonOptions& opts) {
  return newton_polish(spec, X, guess_theta1, guess_theta2, opts);
}

double finger_jacobian(const LinkageSpec& spec, const LinkageState& state) {
  const std::array<double, 2> f =
      loop_residual(spec, state.contraction_X, state.theta1, state.theta2);
  if (residual_norm(f) > kStatePreTol) {
    throw DomainError("finger_jacobian: state does not solve the loop (residual " +
                      std::to_string(residual_norm(f)) + " mm)");
  }
  const double s1 = std::sin(state.theta1), c1 = std::cos(state.theta1);
  const double s2 = std::sin(state.theta2), c2 = std::cos(state.theta2);
  // Differentiating the loop w.r.t. X:
  //   [[-R1 s1, -R2 s2], [R1 c1, R2 c2]] [dtheta1/dX, dtheta2/dX]' = [-1, 0]'
  const double a00 = -spec.link_R1 * s1, a01 = -spec.link_R2 * s2;
  const double a10 = spec.link_R1 * c1, a11 = spec.link_R2 * c2;
  const double det = a00 * a11 - a01 * a10;  // == R1 R2 sin(theta2 - theta1)
  if (std::abs(det) < kAlignedSinFloor * spec.link_R1 * spec.link_R2) {
    throw SingularityError(
        "finger_jacobian: links aligned, constraint matrix singular");
  }
  const double rhs0 = -1.0, rhs1 = 0.0;
  return (a00 * rhs1 - a10 * rhs0) / det;
}

SolvableInterval solvable_interval(const LinkageSpec& spec) {
  const double y = spec.offset_a - spec.offset_c;
  const double outer = spec.link_R1 + spec.link_R2;
  const double inner = std::abs(spec.link_R1 - spec.link_R2);
  if (y * y > outer * outer) {
    throw GeometryError(
        "linkage: lateral offset exceeds total reach, never solvable");
  }
  const double hi_x = std::sqrt(outer * outer - y * y);
  const double lo_x =
      inner * inner > y * y ? std::sqrt(inner * inner - y * y) : -hi_x;
  const double base = spec.offset_b + spec.tum_length_L;
  return SolvableInterval{base - hi_x, base - lo_x};
}

FingerTravel finger_travel(const LinkageSpec& spec, double x_max, double step) {
  if (!(step > 0.0)) throw DomainError("finger_travel: step must be > 0");
  FingerTravel out;
  LinkageState prev;
  bool have_prev = false;
  for (int k = 0;; ++k) {
    const double X = static_cast<double>(k) * step;
    if (X > x_max + step * 1e-9) break;
    LinkageState st;
    try {
      st = have_prev ? solve_configuration(spec, X, prev.theta1, prev.theta2)
                     : solve_configuration(spec, X);
    } catch (const GeometryError&) {
      break;
    } catch (const ConvergenceError&) {
      break;
    }
    if (!have_prev) {
      out.theta2_start = st.theta2;
      have_prev = true;
    }
    out.theta2_end = st.theta2;
    out.x_end = X;
    out.samples_solved = k + 1;
    prev = st;
  }
  if (!have_prev) {
    throw GeometryError("finger_travel: loop unsolvable at X = 0");
  }
  out.travel = std::abs(out.theta2_end - out.theta2_start);
  return out;
}

double grasp_torque(const TumSpec& tum, const LinkageSpec& linkage,
                    double theta, double tau_in, double theta_floor) {
  const double X = contraction(tum, theta);
  const LinkageState st = solve_configuration(linkage, X);
  const double jg = finger_jacobian(linkage, st);
  return jg * contraction_force(tum, theta, tau_in, theta_floor);
}

}  // namespace spinemech
