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

// Agents and the policy interface the harness drives.
//
// A Policy only ever sees Observations. Anything else it knows comes from
// the Briefing handed over once per episode (map knowledge for privileged
// baselines, the goal, the initial heading). Recurrent state travels in an
// opaque Memory value that the harness passes back untouched.

#ifndef KINONAV_AGENTS_AGENTS_HPP_
#define KINONAV_AGENTS_AGENTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/task/metrics.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::agents {

struct AgentAction {
  sim::VelocityCommand cmd;
  bool stop = false;
};

using Memory = std::vector<double>;

struct Briefing {
  Vec2 goal;
  double start_heading = 0.0;
  sim::RobotSpec spec;
  double dt = 1.0;
  std::uint64_t seed = 0;
  // Map knowledge; only privileged agents look at these.
  std::shared_ptr<const world::OccupancyGrid> grid;
  std::shared_ptr<const world::DistanceField> field;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Memory initial_memory(const Briefing& briefing) = 0;
  virtual std::pair<AgentAction, Memory> act(const task::Observation& obs, Memory memory) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// ---------------------------------------------------------------------------
// Oracle

struct OracleOptions {
  int lookahead_cells = 16;           // how far down the descent chain to look for a shortcut
  double approach_fraction = 0.5;     // final approach lands this fraction of success_radius short
};

namespace detail {

// World-frame displacement -> body-frame command that covers `length`
// along it in dt, scaled uniformly so neither linear limit is exceeded.
inline sim::VelocityCommand command_toward(Vec2 delta, double length, double theta, double dt,
                                           const sim::RobotSpec& spec) {
  const double d = norm(delta);
  if (!(d > 0.0) || !(length > 0.0)) return {};
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double ux = (delta.x * c + delta.y * s) / d;
  const double uy = (-delta.x * s + delta.y * c) / d;
  const double vmax = spec.lin_limit / std::max(std::abs(ux), std::abs(uy));
  const double speed = std::min(vmax, length / dt);
  const double bearing = normalize_angle(std::atan2(delta.y, delta.x) - theta);
  const double w = std::clamp(bearing / dt, -spec.ang_limit, spec.ang_limit);
  return {speed * ux, speed * uy, w};
}

}  // namespace detail

/// Privileged shortest-path follower. Looks down the distance-field descent
/// chain for the farthest anchor with a collision-free straight line of
/// sight, heads for it at the largest admissible speed, and turns to face
/// the direction of travel. Every candidate is checked with a kinematic
/// look-ahead: it is only issued if it does not collide and strictly
/// lowers the geodesic distance. Stops inside the success radius.
inline AgentAction oracle_act(const world::OccupancyGrid& grid, const world::DistanceField& field,
                              const sim::Pose& pose, const sim::RobotSpec& spec, double dt = 1.0,
                              const OracleOptions& opt = {}) {
  const Vec2 p = pose.position();
  const Vec2 goal = field.goal();
  if (distance(p, goal) <= spec.success_radius) return {{}, true};

  const world::Cell own = field.cell_of(p);
  const auto here = field.lookup_wide(p);
  if (here.distance == world::kUnreachable ||
      (field.traversable(own) && field.value(own) == world::kUnreachable))
    throw Error("oracle: no path to goal from here");

  // Descent chain from the cell realising the current geodesic estimate.
  std::vector<world::Cell> chain{here.via};
  while (static_cast<int>(chain.size()) < opt.lookahead_cells) {
    auto next = field.descend(chain.back());
    if (!next) break;
    chain.push_back(*next);
  }

  auto step_length_for = [&](world::Cell target, double dist) {
    if (target == field.goal_cell())
      return std::max(0.0, dist - opt.approach_fraction * spec.success_radius);
    return dist;
  };

  auto try_target = [&](world::Cell target, bool need_sight) -> std::optional<AgentAction> {
    const Vec2 anchor = field.anchor(target);
    const Vec2 delta = anchor - p;
    const double dist = norm(delta);
    if (!(dist > 0.0)) return std::nullopt;
    if (need_sight && world::segment_overlaps(grid, p, anchor, spec.footprint_radius))
      return std::nullopt;
    double length = step_length_for(target, dist);
    if (!(length > 0.0)) return std::nullopt;
    for (int attempt = 0; attempt < 4; ++attempt, length *= 0.5) {
      const sim::VelocityCommand cmd =
          sim::clamp_command(detail::command_toward(delta, length, pose.theta, dt, spec), spec);
      const auto next = sim::kinematic_step(grid, pose, cmd, dt, spec);
      if (next.blocked) continue;
      if (field.lookup_wide(next.pose.position()).distance < here.distance)
        return AgentAction{cmd, false};
    }
    return std::nullopt;
  };

  for (std::size_t k = chain.size(); k-- > 1;)
    if (auto a = try_target(chain[k], true)) return *a;
  if (auto a = try_target(chain[0], false)) return *a;
  if (chain.size() > 1)
    if (auto a = try_target(chain[1], false)) return *a;

  // Nothing verifiable: fall back to the steepest-descent anchor.
  const world::Cell target = (distance(p, field.anchor(chain[0])) > 0.0 || chain.size() == 1)
                                 ? chain[0]
                                 : chain[1];
  const Vec2 delta = field.anchor(target) - p;
  return {sim::clamp_command(
              detail::command_toward(delta, step_length_for(target, norm(delta)), pose.theta,
                                     dt, spec),
              spec),
          false};
}

/// Oracle behind the Observation-only interface. Position is recovered from
/// the goal vector and a dead-reckoned heading (integrated from its own yaw
/// commands), so the agent is exact under the kinematic backend and drifts
/// when the realised motion deviates from the commands.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(OracleOptions opt = {}) : opt_(opt) {}

  Memory initial_memory(const Briefing& b) override {
    if (!b.grid || !b.field) throw InvalidArgument("oracle policy needs map knowledge");
    grid_ = b.grid;
    field_ = b.field;
    spec_ = b.spec;
    dt_ = b.dt;
    goal_ = b.goal;
    return {normalize_angle(b.start_heading)};
  }

  std::pair<AgentAction, Memory> act(const task::Observation& obs, Memory memory) override {
    const double theta = memory.at(0);
    const double bearing = obs.goal.phi + theta;
    sim::Pose belief{goal_.x - obs.goal.rho * std::cos(bearing),
                     goal_.y - obs.goal.rho * std::sin(bearing), theta};
    // A belief inside an obstacle or a pocket cut off from the goal (only
    // possible after drift) is pulled back to the best nearby anchor.
    auto lost = [&](Vec2 q) {
      const world::Cell c = field_->cell_of(q);
      return sim::in_collision(*grid_, q, spec_) ||
             (field_->traversable(c) && field_->value(c) == world::kUnreachable);
    };
    if (lost(belief.position())) {
      const auto l = field_->lookup_wide(belief.position());
      if (l.distance != world::kUnreachable) {
        const Vec2 a = field_->anchor(l.via);
        belief.x = a.x;
        belief.y = a.y;
      }
    }
    AgentAction a;
    if (lost(belief.position())) {
      a = {{}, false};
    } else {
      a = oracle_act(*grid_, *field_, belief, spec_, dt_, opt_);
    }
    memory[0] = normalize_angle(theta + a.cmd.w * dt_);
    return {a, std::move(memory)};
  }

 private:
  OracleOptions opt_;
  std::shared_ptr<const world::OccupancyGrid> grid_;
  std::shared_ptr<const world::DistanceField> field_;
  sim::RobotSpec spec_;
  double dt_ = 1.0;
  Vec2 goal_;
};

// ---------------------------------------------------------------------------
// Baselines

/// Each component uniform within its limits; never stops.
template <class Rng>
AgentAction random_act(Rng& rng, const sim::RobotSpec& spec) {
  std::uniform_real_distribution<double> lin(-spec.lin_limit, spec.lin_limit);
  std::uniform_real_distribution<double> ang(-spec.ang_limit, spec.ang_limit);
  const double vx = lin(rng);
  const double vy = lin(rng);
  const double w = ang(rng);
  return {{vx, vy, w}, false};
}

class RandomPolicy final : public Policy {
 public:
  Memory initial_memory(const Briefing& b) override {
    spec_ = b.spec;
    rng_.seed(b.seed);
    return {};
  }
  std::pair<AgentAction, Memory> act(const task::Observation&, Memory memory) override {
    return {random_act(rng_, spec_), std::move(memory)};
  }

 private:
  sim::RobotSpec spec_;
  std::mt19937_64 rng_;
};

/// Issues the same command every step.
class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(sim::VelocityCommand cmd) : cmd_(cmd) {}
  Memory initial_memory(const Briefing&) override { return {}; }
  std::pair<AgentAction, Memory> act(const task::Observation&, Memory memory) override {
    return {{cmd_, false}, std::move(memory)};
  }

 private:
  sim::VelocityCommand cmd_;
};

inline PolicyFactory policy_factory(std::string_view name) {
  if (name == "oracle") return [] { return std::make_unique<OraclePolicy>(); };
  if (name == "random") return [] { return std::make_unique<RandomPolicy>(); };
  throw InvalidArgument("unknown agent '" + std::string(name) + "'");
}

}  // namespace kinonav::agents

#endif  // KINONAV_AGENTS_AGENTS_HPP_
