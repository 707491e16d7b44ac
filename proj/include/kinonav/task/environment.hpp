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

// The PointGoal episode loop. One control step is:
//
//   clamp -> optional actuation noise -> backend step -> geodesic update ->
//   reward -> termination -> metrics
//
// An Environment owns all mutable episode state and is used by one thread
// at a time.

#ifndef KINONAV_TASK_ENVIRONMENT_HPP_
#define KINONAV_TASK_ENVIRONMENT_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include "kinonav/common.hpp"
#include "kinonav/sim/dynamic_lite.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/noise.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/task/metrics.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::task {

class EpisodeFinished : public Error {
 public:
  EpisodeFinished() : Error("episode already finished") {}
};

enum class BackendKind { kinematic, dynamic_lite };

struct EnvConfig {
  BackendKind backend = BackendKind::kinematic;
  sim::DynamicLiteConfig dynamic = sim::profile_a();
  sim::KinematicOptions kinematic;
  std::optional<sim::NoiseModel> noise;
  RewardConfig reward;
  SensorConfig sensor;
  double dt = 1.0;                    // control period, s
  double proximity_threshold = 0.20;  // m of footprint clearance
  double stop_fraction = 0.1;         // "slow" command, as a fraction of the limits
  bool record_trajectory = true;
  bool render_depth = true;
};

struct StepInfo {
  bool blocked = false;
  double dgeo = 0.0;
  double geo_reward = 0.0;  // the progress term alone
  double clearance = 0.0;   // footprint clearance after the step
  sim::VelocityCommand commanded;
  sim::VelocityCommand applied;
  sim::DynamicEvents events;
  TerminationReason termination = TerminationReason::none;
};

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class Environment {
 public:
  Environment(std::shared_ptr<const world::OccupancyGrid> grid, sim::RobotSpec spec,
              EnvConfig config = {})
      : grid_(std::move(grid)), spec_(std::move(spec)), config_(std::move(config)) {
    if (!grid_) throw InvalidArgument("environment needs a grid");
    sim::validate(spec_);
    sim::validate(config_.dynamic);
    if (config_.noise) sim::validate(*config_.noise);
    if (!(config_.dt > 0.0)) throw InvalidArgument("dt must be positive");
  }

  /// Starts an episode. The distance field may be shared between
  /// environments; when absent it is built for this robot's footprint.
  Observation reset(const Episode& episode, std::uint64_t seed,
                    std::shared_ptr<const world::DistanceField> field = nullptr) {
    if (!field) {
      field = std::make_shared<const world::DistanceField>(
          world::distance_field(*grid_, episode.goal, spec_.footprint_radius));
    }
    if (!(field->goal() == episode.goal) || field->robot_radius() != spec_.footprint_radius)
      throw InvalidArgument("distance field does not match episode goal and robot footprint");
    if (sim::in_collision(*grid_, episode.start.position(), spec_))
      throw InvalidArgument("episode " + std::to_string(episode.episode_id) +
                            ": start collides for robot " + spec_.name);

    field_ = std::move(field);
    episode_ = episode;
    pose_ = episode.start;
    pose_.theta = normalize_angle(pose_.theta);
    actual_vel_ = {};
    rng_.seed(seed);
    done_ = false;

    dgeo_ = field_->lookup_wide(pose_.position()).distance;
    if (!std::isfinite(dgeo_))
      throw InvalidArgument("episode " + std::to_string(episode.episode_id) +
                            ": goal unreachable for robot " + spec_.name);

    result_ = {};
    result_.episode_id = episode.episode_id;
    result_.seed = seed;
    result_.geodesic = dgeo_;
    result_.goal = episode.goal;
    if (config_.record_trajectory) {
      StepRecord r;
      r.pose = pose_;
      r.dgeo = dgeo_;
      r.clearance = footprint_clearance();
      result_.trajectory.push_back(r);
    }
    return make_observation();
  }

  StepOutcome step(const sim::VelocityCommand& action, bool stop = false) {
    if (done_) throw EpisodeFinished();
    StepOutcome out;
    StepInfo& info = out.info;

    info.commanded = stop ? sim::VelocityCommand{} : sim::clamp_command(action, spec_);
    info.applied = config_.noise ? sim::apply_noise(info.commanded, *config_.noise, rng_)
                                 : info.commanded;

    const Vec2 before = pose_.position();
    if (config_.backend == BackendKind::kinematic) {
      const auto r = sim::kinematic_step(*grid_, pose_, info.applied, config_.dt, spec_,
                                         config_.kinematic);
      pose_ = r.pose;
      info.blocked = r.blocked;
    } else {
      const auto r = sim::dynamic_lite_step(*grid_, pose_, actual_vel_, info.applied, config_.dt,
                                            config_.dynamic, spec_);
      pose_ = r.pose;
      actual_vel_ = r.actual;
      info.events = r.events;
      info.blocked = r.events.contact_substeps > 0;
    }

    const double prev = dgeo_;
    dgeo_ = field_->lookup_wide(pose_.position()).distance;
    info.dgeo = dgeo_;
    info.geo_reward = prev - dgeo_;

    Terminal terminal = Terminal::none;
    if (info.events.fell) {
      terminal = Terminal::fall;
    } else if (distance(pose_.position(), episode_.goal) <= spec_.success_radius &&
               is_slow(info.commanded)) {
      terminal = Terminal::success;
    }
    out.reward = reward(prev, dgeo_, info.blocked, info.commanded, terminal, config_.reward);

    ++result_.num_actions;
    result_.path_length += distance(before, pose_.position());
    result_.total_reward += out.reward;
    info.clearance = footprint_clearance();
    if (info.clearance < config_.proximity_threshold) ++result_.num_collisions;

    if (terminal == Terminal::fall) {
      info.termination = TerminationReason::fall;
    } else if (terminal == Terminal::success) {
      info.termination = TerminationReason::success;
    } else if (result_.num_actions >= spec_.max_steps) {
      info.termination = TerminationReason::step_budget;
    }

    if (config_.record_trajectory) {
      StepRecord r;
      r.step = result_.num_actions;
      r.pose = pose_;
      r.cmd = info.commanded;
      r.applied = info.applied;
      r.dgeo = dgeo_;
      r.reward = out.reward;
      r.blocked = info.blocked;
      r.clearance = info.clearance;
      result_.trajectory.push_back(r);
    }

    if (info.termination != TerminationReason::none) {
      done_ = true;
      result_.termination = info.termination;
      result_.success = info.termination == TerminationReason::success;
      // An episode that starts on its goal has no meaningful path ratio.
      result_.spl = result_.geodesic > 0.0
                        ? compute_spl(result_.success, result_.geodesic, result_.path_length)
                        : (result_.success ? 1.0 : 0.0);
    }
    out.done = done_;
    out.observation = make_observation();
    return out;
  }

  bool done() const noexcept { return done_; }
  const EpisodeResult& result() const noexcept { return result_; }
  EpisodeResult take_result() { return std::move(result_); }

  // Ground truth, for the harness and privileged agents.
  const sim::Pose& pose() const noexcept { return pose_; }
  const sim::VelocityCommand& actual_velocity() const noexcept { return actual_vel_; }
  double dgeo() const noexcept { return dgeo_; }
  const world::DistanceField& field() const { return *field_; }
  std::shared_ptr<const world::DistanceField> shared_field() const { return field_; }
  const world::OccupancyGrid& grid() const noexcept { return *grid_; }
  const sim::RobotSpec& spec() const noexcept { return spec_; }
  const EnvConfig& config() const noexcept { return config_; }
  const Episode& episode() const noexcept { return episode_; }

 private:
  bool is_slow(const sim::VelocityCommand& c) const noexcept {
    const double f = config_.stop_fraction;
    return std::max(std::abs(c.vx), std::abs(c.vy)) / spec_.lin_limit < f &&
           std::abs(c.w) / spec_.ang_limit < f;
  }

  double footprint_clearance() const {
    return world::clearance(*grid_, pose_.position()) - spec_.footprint_radius;
  }

  Observation make_observation() const {
    if (config_.render_depth) return observe(*grid_, pose_, episode_.goal, config_.sensor);
    Observation obs;
    obs.goal = goal_vector(pose_, episode_.goal);
    return obs;
  }

  std::shared_ptr<const world::OccupancyGrid> grid_;
  sim::RobotSpec spec_;
  EnvConfig config_;

  std::shared_ptr<const world::DistanceField> field_;
  Episode episode_;
  sim::Pose pose_;
  sim::VelocityCommand actual_vel_;
  std::mt19937_64 rng_;
  double dgeo_ = 0.0;
  bool done_ = true;
  EpisodeResult result_;
};

}  // namespace kinonav::task

#endif  // KINONAV_TASK_ENVIRONMENT_HPP_
