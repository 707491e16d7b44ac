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

// Kinematic backend: one Euler step per control step, teleport to the
// result, stay in place if the result would collide.

#ifndef KINONAV_SIM_KINEMATIC_HPP_
#define KINONAV_SIM_KINEMATIC_HPP_

#include <cmath>

#include "kinonav/common.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::sim {

struct KinematicOptions {
  // Reject moves whose straight-line sweep touches an obstacle, not just
  // the endpoint.
  bool swept_check = false;
};

struct KinematicResult {
  Pose pose;
  bool blocked = false;
};

/// World-frame displacement of a body-frame velocity held for dt at heading
/// theta.
inline Vec2 body_to_world_displacement(const VelocityCommand& cmd, double theta, double dt) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {(cmd.vx * c - cmd.vy * s) * dt, (cmd.vx * s + cmd.vy * c) * dt};
}

inline bool in_collision(const world::OccupancyGrid& grid, Vec2 p, const RobotSpec& spec) {
  return world::disc_overlaps(grid, p, spec.footprint_radius);
}

/// Teleports to the Euler-integrated pose (start-of-step heading). On
/// collision the position is kept and only the heading advances.
inline KinematicResult kinematic_step(const world::OccupancyGrid& grid, const Pose& pose,
                                      const VelocityCommand& cmd, double dt,
                                      const RobotSpec& spec, KinematicOptions opt = {}) {
  if (in_collision(grid, pose.position(), spec))
    throw InconsistentState("kinematic step started in collision");
  const Vec2 d = body_to_world_displacement(cmd, pose.theta, dt);
  const Vec2 target{pose.x + d.x, pose.y + d.y};
  const double theta = normalize_angle(pose.theta + cmd.w * dt);

  const bool hit = opt.swept_check
                       ? world::segment_overlaps(grid, pose.position(), target,
                                                 spec.footprint_radius)
                       : in_collision(grid, target, spec);
  if (hit) return {{pose.x, pose.y, theta}, true};
  return {{target.x, target.y, theta}, false};
}

}  // namespace kinonav::sim

#endif  // KINONAV_SIM_KINEMATIC_HPP_
