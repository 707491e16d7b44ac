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

// PointGoal episode vocabulary: episodes, observations, reward and SPL.

#ifndef KINONAV_TASK_METRICS_HPP_
#define KINONAV_TASK_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::task {

struct Episode {
  std::int64_t episode_id = 0;
  std::string scene_id;
  sim::Pose start;
  Vec2 goal;
  double geodesic_distance = 0.0;  // m, under the dataset's reference robot
};

struct SensorConfig {
  double fov = kPi / 2.0;  // rad, centred on the heading
  int n_rays = 64;
  double max_range = 10.0;  // m
};

/// Goal in polar body-frame coordinates.
struct GoalVector {
  double rho = 0.0;  // m
  double phi = 0.0;  // rad, (-pi, pi], positive to the left
};

struct Observation {
  std::vector<double> depth;  // ray distances, right-most ray first
  GoalVector goal;
};

/// Angular offset of ray k from the heading. Offsets come in exact
/// +/- pairs, so a mirrored world produces an exactly reversed scan.
inline double ray_offset(int k, const SensorConfig& cfg) {
  if (cfg.n_rays <= 1) return 0.0;
  const int m = cfg.n_rays - 1;
  return static_cast<double>(2 * k - m) / static_cast<double>(m) * (cfg.fov / 2.0);
}

inline GoalVector goal_vector(const sim::Pose& pose, Vec2 goal) {
  const double dx = goal.x - pose.x;
  const double dy = goal.y - pose.y;
  return {std::hypot(dx, dy), normalize_angle(std::atan2(dy, dx) - pose.theta)};
}

inline Observation observe(const world::OccupancyGrid& grid, const sim::Pose& pose, Vec2 goal,
                           const SensorConfig& cfg) {
  Observation obs;
  obs.depth.resize(static_cast<std::size_t>(std::max(cfg.n_rays, 0)));
  for (int k = 0; k < cfg.n_rays; ++k)
    obs.depth[static_cast<std::size_t>(k)] =
        world::raycast(grid, pose.position(), pose.theta + ray_offset(k, cfg), cfg.max_range);
  obs.goal = goal_vector(pose, goal);
  return obs;
}

// ---------------------------------------------------------------------------
// Reward

struct RewardConfig {
  double coll = -0.03;
  double fall = -5.0;
  double success = 10.0;
  double slack = -0.002;
  double backward = -0.03;
};

enum class Terminal { none, success, fall };

/// Sum of the six reward terms: geodesic progress, collision, fall,
/// success, slack and backward-motion penalty.
inline double reward(double prev_dgeo, double new_dgeo, bool blocked,
                     const sim::VelocityCommand& cmd, Terminal terminal,
                     const RewardConfig& cfg = {}) {
  double r = prev_dgeo - new_dgeo;
  if (blocked) r += cfg.coll;
  if (terminal == Terminal::fall) r += cfg.fall;
  if (terminal == Terminal::success) r += cfg.success;
  r += cfg.slack;
  if (cmd.vx < 0.0) r += cfg.backward;
  return r;
}

// ---------------------------------------------------------------------------
// Episode outcome

inline double compute_spl(bool success, double geodesic, double path_length) {
  if (!(geodesic > 0.0)) throw InvalidArgument("invalid episode: geodesic distance must be > 0");
  if (!(path_length >= 0.0)) throw InvalidArgument("path length must be non-negative");
  if (!success) return 0.0;
  return geodesic / std::max(path_length, geodesic);
}

enum class TerminationReason { none, success, step_budget, fall };

inline std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::success: return "success";
    case TerminationReason::step_budget: return "step_budget";
    case TerminationReason::fall: return "fall";
    case TerminationReason::none: break;
  }
  return "none";
}

inline TerminationReason parse_termination(std::string_view s) {
  if (s == "success") return TerminationReason::success;
  if (s == "step_budget") return TerminationReason::step_budget;
  if (s == "fall") return TerminationReason::fall;
  if (s == "none") return TerminationReason::none;
  throw InvalidArgument("unknown termination reason '" + std::string(s) + "'");
}

/// One row of the trajectory log. Step 0 is the reset state.
struct StepRecord {
  int step = 0;
  sim::Pose pose;
  sim::VelocityCommand cmd;
  sim::VelocityCommand applied;
  double dgeo = 0.0;
  double reward = 0.0;
  bool blocked = false;
  double clearance = 0.0;  // footprint clearance: nearest obstacle minus footprint radius
};

struct EpisodeResult {
  std::int64_t episode_id = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double spl = 0.0;
  int num_actions = 0;
  int num_collisions = 0;
  double path_length = 0.0;
  double total_reward = 0.0;
  double geodesic = 0.0;  // shortest-path length for the evaluated robot
  TerminationReason termination = TerminationReason::none;
  Vec2 goal;
  std::vector<StepRecord> trajectory;
};

}  // namespace kinonav::task

#endif  // KINONAV_TASK_METRICS_HPP_
