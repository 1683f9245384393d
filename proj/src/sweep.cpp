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

#include "spinemech/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

#include "spinemech/errors.hpp"
#include "spinemech/units.hpp"

namespace spinemech {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Hard cap on grid size; reports are kept in memory.
constexpr std::uint64_t kMaxCandidates = 1000000;

// Number of finger-travel samples over the stroke (stroke/64 steps).
constexpr int kTravelSteps = 64;

std::array<const ParamRange*, 11> axes(const DesignRanges& r) {
  return {&r.radius_R,      &r.strip_length_L,
          &r.n_strips,      &r.strip_width_w1,
          &r.top_plate_thickness_w2, &r.bottom_plate_thickness_w3,
          &r.link_R1,       &r.link_R2,
          &r.offset_a,      &r.offset_b,
          &r.offset_c};
}

double grid_value(const ParamRange& r, std::uint64_t i) {
  if (r.steps == 1 || i == 0) return r.min;
  if (i == static_cast<std::uint64_t>(r.steps) - 1) return r.max;
  return r.min + static_cast<double>(i) * (r.max - r.min) /
                     static_cast<double>(r.steps - 1);
}

void set_nan_metrics(DesignReport* r) {
  r->constraint_pass = false;
  r->margin_mm = kNaN;
  r->stroke_mm = kNaN;
  r->finger_range_deg = kNaN;
  r->required_holding_torque_Nmm = kNaN;
  r->grasp_torque_Nmm = kNaN;
}

bool dominates(const DesignReport& a, const DesignReport& b,
               const std::vector<Objective>& objectives) {
  bool strictly_better = false;
  for (const Objective& obj : objectives) {
    const double fa = report_field(a, obj.field);
    const double fb = report_field(b, obj.field);
    const double better = obj.maximize ? fa - fb : fb - fa;
    if (better < 0.0) return false;
    if (better > 0.0) strictly_better = true;
  }
  return strictly_better;
}

}  // namespace

std::string to_string(DesignStatus s) {
  switch (s) {
    case DesignStatus::kOk:
      return "ok";
    case DesignStatus::kInvalidSpec:
      return "invalid-spec";
    case DesignStatus::kRadiusDegenerate:
      return "radius-degenerate";
    case DesignStatus::kLinkageUnsolvable:
      return "linkage-unsolvable";
    case DesignStatus::kReferenceBeyondStroke:
      return "reference-beyond-stroke";
  }
  return "unknown";
}

std::uint64_t candidate_count(const DesignRanges& ranges) {
  std::uint64_t count = 1;
  for (const ParamRange* r : axes(ranges)) {
    if (r->steps < 1) throw ConfigError("sweep: every axis needs steps >= 1");
    const auto s = static_cast<std::uint64_t>(r->steps);
    if (count > std::numeric_limits<std::uint64_t>::max() / s) {
      throw ConfigError("sweep: grid size overflows");
    }
    count *= s;
  }
  return count;
}

Candidate candidate_at(const SweepConfig& config, std::uint64_t index) {
  const std::uint64_t total = candidate_count(config.ranges);
  if (index >= total) {
    throw ConfigError("sweep: candidate index out of range");
  }
  const auto ax = axes(config.ranges);
  std::array<double, 11> value{};
  std::uint64_t rem = index;
  for (int k = 10; k >= 0; --k) {
    const auto steps = static_cast<std::uint64_t>(ax[static_cast<std::size_t>(k)]->steps);
    value[static_cast<std::size_t>(k)] =
        grid_value(*ax[static_cast<std::size_t>(k)], rem % steps);
    rem /= steps;
  }

  Candidate c;
  c.index = index;
  c.tum.radius_R = value[0];
  c.tum.strip_length_L = value[1];
  c.tum.n_strips = static_cast<int>(std::llround(value[2]));
  c.tum.strip_width_w1 = value[3];
  c.tum.top_plate_thickness_w2 = value[4];
  c.tum.bottom_plate_thickness_w3 = value[5];
  c.tum.youngs_modulus_E = config.youngs_modulus_E;
  c.tum.second_moment_I = config.second_moment_I;
  c.tum.max_rotation_theta_max = config.max_rotation_theta_max;
  c.linkage.link_R1 = value[6];
  c.linkage.link_R2 = value[7];
  c.linkage.offset_a = value[8];
  c.linkage.offset_b = value[9];
  c.linkage.offset_c = value[10];
  c.linkage.tum_length_L = value[1];
  c.linkage.branch = Branch::kOpenForward;
  return c;
}

DesignReport evaluate(const Candidate& candidate, double reference_tau_in,
                      double reference_theta) {
  const TumSpec& tum = candidate.tum;
  const LinkageSpec& lk = candidate.linkage;

  DesignReport r;
  r.candidate_index = candidate.index;
  r.radius_R = tum.radius_R;
  r.strip_length_L = tum.strip_length_L;
  r.n_strips = tum.n_strips;
  r.strip_width_w1 = tum.strip_width_w1;
  r.top_plate_thickness_w2 = tum.top_plate_thickness_w2;
  r.bottom_plate_thickness_w3 = tum.bottom_plate_thickness_w3;
  r.link_R1 = lk.link_R1;
  r.link_R2 = lk.link_R2;
  r.offset_a = lk.offset_a;
  r.offset_b = lk.offset_b;
  r.offset_c = lk.offset_c;
  set_nan_metrics(&r);

  try {
    validate(tum);
  } catch (const ConfigError&) {
    r.status = DesignStatus::kInvalidSpec;
    return r;
  }
  if (!(lk.link_R1 > 0.0) || !(lk.link_R2 > 0.0) ||
      !(lk.tum_length_L > 0.0)) {
    r.status = DesignStatus::kInvalidSpec;
    return r;
  }

  RadiusCheck rc;
  try {
    rc = check_radius_constraint(tum);
  } catch (const DomainError&) {
    r.status = DesignStatus::kRadiusDegenerate;
    return r;
  }

  const double stroke_theta = effective_theta_max(tum);
  const double stroke = contraction(tum, stroke_theta);

  FingerTravel travel;
  try {
    travel = finger_travel(lk, stroke, stroke / kTravelSteps);
  } catch (const DomainError&) {
    r.status = DesignStatus::kLinkageUnsolvable;
    return r;
  } catch (const ConvergenceError&) {
    r.status = DesignStatus::kLinkageUnsolvable;
    return r;
  }
  if (travel.samples_solved < kTravelSteps + 1) {
    // The loop closed at X = 0 but failed before the stroke end.
    r.status = DesignStatus::kLinkageUnsolvable;
    return r;
  }

  double grasp = 0.0;
  if (!(std::abs(reference_theta) < stroke_theta)) {
    r.status = DesignStatus::kReferenceBeyondStroke;
    return r;
  }
  try {
    grasp = grasp_torque(tum, lk, reference_theta, reference_tau_in);
  } catch (const SingularityError&) {
    r.status = DesignStatus::kReferenceBeyondStroke;
    return r;
  } catch (const DomainError&) {
    r.status = DesignStatus::kLinkageUnsolvable;
    return r;
  } catch (const ConvergenceError&) {
    r.status = DesignStatus::kLinkageUnsolvable;
    return r;
  }

  r.status = DesignStatus::kOk;
  r.constraint_pass = rc.pass;
  r.margin_mm = rc.margin;
  r.stroke_mm = stroke;
  r.finger_range_deg = rad_to_deg(travel.travel);
  r.required_holding_torque_Nmm = max_holding_torque(tum);
  r.grasp_torque_Nmm = grasp;
  return r;
}

std::vector<DesignReport> run_sweep(const SweepConfig& config, int jobs) {
  const std::uint64_t total = candidate_count(config.ranges);
  if (total > kMaxCandidates) {
    throw ConfigError("sweep: " + std::to_string(total) +
                      " candidates exceed the in-memory limit of " +
                      std::to_string(kMaxCandidates));
  }
  std::vector<DesignReport> reports(total);
  const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      reports[i] = evaluate(candidate_at(config, i), config.reference_tau_in,
                            config.reference_theta);
    }
  };

  const std::uint64_t threads =
      jobs <= 1 ? 1
                : std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs),
                                          total);
  if (threads <= 1) {
    worker(0, total);
    return reports;
  }
  // Contiguous chunks keep the output independent of the thread count.
  const std::uint64_t chunk = (total + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::uint64_t t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return reports;
}

double report_field(const DesignReport& report, const std::string& field) {
  if (field == "margin_mm") return report.margin_mm;
  if (field == "stroke_mm") return report.stroke_mm;
  if (field == "finger_range_deg") return report.finger_range_deg;
  if (field == "required_holding_torque_Nmm")
    return report.required_holding_torque_Nmm;
  if (field == "grasp_torque_Nmm") return report.grasp_torque_Nmm;
  throw ConfigError("unknown objective field '" + field + "'");
}

std::vector<std::size_t> pareto_front(const std::vector<DesignReport>& reports,
                                      const std::vector<Objective>& objectives) {
  if (objectives.empty()) {
    throw ConfigError("pareto_front: at least one objective required");
  }
  {
    DesignReport probe;
    for (const Objective& obj : objectives) {
      (void)report_field(probe, obj.field);  // rejects unknown names eagerly
    }
  }

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].status != DesignStatus::kOk) continue;
    bool finite = true;
    for (const Objective& obj : objectives) {
      if (!std::isfinite(report_field(reports[i], obj.field))) {
        finite = false;
        break;
      }
    }
    if (finite) eligible.push_back(i);
  }

  // Incremental front maintenance: each new row evicts the members it
  // dominates and joins unless something present dominates it.
  std::vector<std::size_t> front;
  for (const std::size_t i : eligible) {
    bool dominated = false;
    std::vector<std::size_t> kept;
    kept.reserve(front.size() + 1);
    for (const std::size_t j : front) {
      if (dominates(reports[j], reports[i], objectives)) {
        dominated = true;
        kept = front;
        break;
      }
      if (!dominates(reports[i], reports[j], objectives)) {
        kept.push_back(j);
      }
    }
    front = std::move(kept);
    if (!dominated) front.push_back(i);
  }
  std::sort(front.begin(), front.end());
  return front;
}

}  // namespace spinemech
