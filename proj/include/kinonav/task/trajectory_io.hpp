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

#ifndef KINONAV_TASK_TRAJECTORY_IO_HPP_
#define KINONAV_TASK_TRAJECTORY_IO_HPP_

#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/task/metrics.hpp"

namespace kinonav::task {

inline constexpr std::string_view kTrajectoryHeader =
    "step,x,y,theta,cmd_vx,cmd_vy,cmd_w,applied_vx,applied_vy,applied_w,dgeo,reward,blocked,"
    "clearance";

/// Trajectory log as comma-separated values, six significant digits. A
/// leading `#` line carries the episode id, goal and outcome so a log can be
/// plotted on its own.
inline std::string write_trajectory(const EpisodeResult& r) {
  std::string out = "# episode=" + std::to_string(r.episode_id) + " goal_x=" + fmt6(r.goal.x) +
                    " goal_y=" + fmt6(r.goal.y) + " success=" + (r.success ? "1" : "0") + "\n";
  out += kTrajectoryHeader;
  out += "\n";
  for (const StepRecord& s : r.trajectory) {
    out += std::to_string(s.step);
    for (double v : {s.pose.x, s.pose.y, s.pose.theta, s.cmd.vx, s.cmd.vy, s.cmd.w, s.applied.vx,
                     s.applied.vy, s.applied.w, s.dgeo, s.reward})
      out += "," + fmt6(v);
    out += s.blocked ? ",1," : ",0,";
    out += fmt6(s.clearance);
    out += "\n";
  }
  return out;
}

struct TrajectoryLog {
  std::int64_t episode_id = -1;
  bool has_goal = false;
  Vec2 goal;
  bool success = false;
  std::vector<StepRecord> records;
};

inline TrajectoryLog read_trajectory(std::string_view text) {
  TrajectoryLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string kv;
      while (ms >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "episode") log.episode_id = std::strtoll(val.c_str(), nullptr, 10);
        if (key == "goal_x") log.goal.x = std::strtod(val.c_str(), nullptr), log.has_goal = true;
        if (key == "goal_y") log.goal.y = std::strtod(val.c_str(), nullptr);
        if (key == "success") log.success = val == "1";
      }
      continue;
    }
    if (!saw_header) {
      if (line != kTrajectoryHeader) throw ParseError(lineno, "unexpected trajectory header");
      saw_header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 14) throw ParseError(lineno, "expected 14 fields");
    double v[14];
    for (std::size_t k = 0; k < 14; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(f[k].c_str(), &end);
      if (f[k].empty() || *end != '\0') throw ParseError(lineno, "invalid number '" + f[k] + "'");
    }
    StepRecord s;
    s.step = static_cast<int>(v[0]);
    s.pose = {v[1], v[2], v[3]};
    s.cmd = {v[4], v[5], v[6]};
    s.applied = {v[7], v[8], v[9]};
    s.dgeo = v[10];
    s.reward = v[11];
    s.blocked = v[12] != 0.0;
    s.clearance = v[13];
    log.records.push_back(s);
  }
  if (!saw_header) throw ParseError(lineno + 1, "missing trajectory header");
  return log;
}

}  // namespace kinonav::task

#endif  // KINONAV_TASK_TRAJECTORY_IO_HPP_
