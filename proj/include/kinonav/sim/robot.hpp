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

#ifndef KINONAV_SIM_ROBOT_HPP_
#define KINONAV_SIM_ROBOT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "kinonav/common.hpp"

namespace kinonav::sim {

/// Planar centre-of-mass state. theta is kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const noexcept { return {x, y}; }
  friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

/// Body-frame velocity command: forward, lateral (m/s) and yaw rate (rad/s).
struct VelocityCommand {
  double vx = 0.0;
  double vy = 0.0;
  double w = 0.0;

  friend constexpr bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

inline bool is_finite(const VelocityCommand& c) noexcept {
  return std::isfinite(c.vx) && std::isfinite(c.vy) && std::isfinite(c.w);
}

struct RobotSpec {
  std::string name;
  double leg_length = 0.0;       // m
  double lin_limit = 0.0;        // m/s, applies to vx and vy separately
  double ang_limit = 0.0;        // rad/s
  int max_steps = 0;             // control steps per episode
  double success_radius = 0.0;   // m
  double footprint_radius = 0.0; // m, circular body approximation
};

struct ScaledLimits {
  double lin_limit;
  double ang_limit;
  int max_steps;
};

namespace detail {
inline double round2(double v) { return std::round(v * 100.0) / 100.0; }
}  // namespace detail

// Reference robot: 0.44 m legs, 0.5 m/s, 0.3 rad/s, 150 steps.
inline constexpr double kReferenceLegLength = 0.44;
inline constexpr double kReferenceLinLimit = 0.5;
inline constexpr double kReferenceAngLimit = 0.3;
inline constexpr int kReferenceMaxSteps = 150;

/// Velocity limits scale linearly with leg length (rounded to 0.01); the
/// step budget scales inversely with the linear limit.
inline ScaledLimits derive_robot_params(double leg_length) {
  if (!(leg_length > 0.0) || !std::isfinite(leg_length))
    throw InvalidArgument("leg length must be positive");
  const double lin = detail::round2(kReferenceLinLimit * leg_length / kReferenceLegLength);
  const double ang = detail::round2(kReferenceAngLimit * leg_length / kReferenceLegLength);
  if (!(lin > 0.0) || !(ang > 0.0)) throw InvalidArgument("leg length too small to scale");
  const int steps =
      static_cast<int>(std::lround(kReferenceMaxSteps * kReferenceLinLimit / lin));
  return {lin, ang, steps};
}

inline void validate(const RobotSpec& s) {
  if (!(s.leg_length > 0.0 && s.lin_limit > 0.0 && s.ang_limit > 0.0 && s.success_radius > 0.0 &&
        s.footprint_radius > 0.0))
    throw InvalidArgument("robot spec '" + s.name + "': all parameters must be positive");
  if (s.lin_limit > 0.5) throw InvalidArgument("robot spec '" + s.name + "': lin_limit > 0.5");
  if (s.max_steps < 1) throw InvalidArgument("robot spec '" + s.name + "': max_steps < 1");
}

inline RobotSpec make_robot(std::string name, double leg_length, double success_radius,
                            double footprint_radius) {
  const ScaledLimits l = derive_robot_params(leg_length);
  RobotSpec s{std::move(name), leg_length, l.lin_limit, l.ang_limit,
              l.max_steps,     success_radius, footprint_radius};
  validate(s);
  return s;
}

inline RobotSpec a1() { return make_robot("a1", 0.20, 0.24, 0.12); }
inline RobotSpec aliengo() { return make_robot("aliengo", 0.25, 0.32, 0.15); }
inline RobotSpec spot() { return make_robot("spot", 0.44, 0.425, 0.25); }

inline RobotSpec robot_by_name(std::string_view name) {
  if (name == "a1") return a1();
  if (name == "aliengo") return aliengo();
  if (name == "spot") return spot();
  throw InvalidArgument("unknown robot '" + std::string(name) + "'");
}

/// Clips each component to its symmetric limit. Non-finite input is an error.
inline VelocityCommand clamp_command(const VelocityCommand& cmd, const RobotSpec& spec) {
  if (!is_finite(cmd)) throw InvalidArgument("invalid command: non-finite component");
  return {std::clamp(cmd.vx, -spec.lin_limit, spec.lin_limit),
          std::clamp(cmd.vy, -spec.lin_limit, spec.lin_limit),
          std::clamp(cmd.w, -spec.ang_limit, spec.ang_limit)};
}

}  // namespace kinonav::sim

#endif  // KINONAV_SIM_ROBOT_HPP_
