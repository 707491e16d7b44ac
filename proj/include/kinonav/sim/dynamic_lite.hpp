// Copyright 2026 The Kinonav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// "dynamic-lite": a substepped surrogate for a physics-simulated low-level
// controller. The realised body velocity follows the command through a
// first-order lag, the pose is integrated per substep, and contacts either
// slide along the free axis or hold position. It is not a rigid-body model.

#ifndef KINONAV_SIM_DYNAMIC_LITE_HPP_
#define KINONAV_SIM_DYNAMIC_LITE_HPP_

#include <algorithm>
#include <string>
#include <string_view>

#include "kinonav/common.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::sim {

struct DynamicLiteConfig {
  double tau = 0.30;               // velocity-tracking time constant, s
  int substeps = 240;              // per control step
  bool slide_on_contact = true;
  double fall_penetration = 0.002;  // m of penetration in one substep that topples the robot
};

inline void validate(const DynamicLiteConfig& c) {
  if (!(c.tau > 0.0)) throw InvalidArgument("dynamic-lite tau must be positive");
  if (c.substeps < 1) throw InvalidArgument("dynamic-lite substeps must be >= 1");
  if (!(c.fall_penetration >= 0.0))
    throw InvalidArgument("dynamic-lite fall_penetration must be non-negative");
}

// Two controller profiles: a responsive, compliant one and a sluggish one
// that stops dead on contact.
inline DynamicLiteConfig profile_a() { return {0.30, 240, true, 0.002}; }
inline DynamicLiteConfig profile_b() { return {0.60, 240, false, 0.002}; }

inline DynamicLiteConfig profile_by_name(std::string_view name) {
  if (name == "profile-A" || name == "a") return profile_a();
  if (name == "profile-B" || name == "b") return profile_b();
  throw InvalidArgument("unknown dynamic-lite profile '" + std::string(name) + "'");
}

struct DynamicEvents {
  int contact_substeps = 0;
  double max_penetration = 0.0;  // largest uncorrected penetration seen, m
  bool fell = false;
};

struct DynamicLiteResult {
  Pose pose;
  VelocityCommand actual;  // realised body velocity at the end of the step
  DynamicEvents events;
};

/// Advances one control step of length dt. A fall ends integration at the
/// substep where it happens; the returned pose is still collision-free.
inline DynamicLiteResult dynamic_lite_step(const world::OccupancyGrid& grid, const Pose& pose,
                                           const VelocityCommand& actual,
                                           const VelocityCommand& cmd, double dt,
                                           const DynamicLiteConfig& config,
                                           const RobotSpec& spec) {
  if (in_collision(grid, pose.position(), spec))
    throw InconsistentState("dynamic-lite step started in collision");
  const double delta = dt / config.substeps;
  const double gain = delta / config.tau;

  DynamicLiteResult r{pose, actual, {}};
  Pose& p = r.pose;
  VelocityCommand& v = r.actual;
  for (int k = 0; k < config.substeps; ++k) {
    v.vx += gain * (cmd.vx - v.vx);
    v.vy += gain * (cmd.vy - v.vy);
    v.w += gain * (cmd.w - v.w);

    const Vec2 d = body_to_world_displacement(v, p.theta, delta);
    const Vec2 candidate{p.x + d.x, p.y + d.y};
    p.theta = normalize_angle(p.theta + v.w * delta);
    if (!in_collision(grid, candidate, spec)) {
      p.x = candidate.x;
      p.y = candidate.y;
      continue;
    }

    ++r.events.contact_substeps;
    const double pen = world::disc_penetration(grid, candidate, spec.footprint_radius);
    r.events.max_penetration = std::max(r.events.max_penetration, pen);
    if (config.slide_on_contact) {
      if (!in_collision(grid, {candidate.x, p.y}, spec)) {
        p.x = candidate.x;
      } else if (!in_collision(grid, {p.x, candidate.y}, spec)) {
        p.y = candidate.y;
      }
    }
    if (pen > config.fall_penetration) {
      r.events.fell = true;
      break;
    }
  }
  return r;
}

}  // namespace kinonav::sim

#endif  // KINONAV_SIM_DYNAMIC_LITE_HPP_
