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

// Control-step throughput of the physics backends.
//
// A random agent drives one robot around a map; each measured step is
// clamp + agent + backend. Sensors and reward are left out so the number
// reflects the backend. Works on private copies only.

#ifndef KINONAV_HARNESS_BENCH_HPP_
#define KINONAV_HARNESS_BENCH_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kinonav/agents/agents.hpp"
#include "kinonav/common.hpp"
#include "kinonav/sim/dynamic_lite.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/task/environment.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::harness {

struct BackendChoice {
  std::string name;
  task::BackendKind kind = task::BackendKind::kinematic;
  sim::DynamicLiteConfig dynamic = sim::profile_a();
};

inline BackendChoice backend_choice(const std::string& name) {
  if (name == "kinematic") return {name, task::BackendKind::kinematic, sim::profile_a()};
  if (name == "dynlite-a") return {name, task::BackendKind::dynamic_lite, sim::profile_a()};
  if (name == "dynlite-b") return {name, task::BackendKind::dynamic_lite, sim::profile_b()};
  throw InvalidArgument("unknown backend '" + name + "'");
}

struct BenchOptions {
  long steps = 20000;
  long warmup = 1000;
  int repeats = 3;  // best of
  std::uint64_t seed = 0;
};

struct BenchEntry {
  std::string backend;
  long steps = 0;
  double seconds = 0.0;
  double steps_per_second = 0.0;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  /// entries[0] throughput over entries[k]; 1 for k = 0.
  double ratio(std::size_t k) const {
    return entries.at(0).steps_per_second / entries.at(k).steps_per_second;
  }
};

namespace detail {

// Free cell centre nearest the grid middle; the bench robot starts there.
inline Vec2 bench_start(const world::OccupancyGrid& grid, const sim::RobotSpec& spec) {
  const Vec2 mid{grid.origin().x + 0.5 * grid.extent_x(), grid.origin().y + 0.5 * grid.extent_y()};
  double best = world::kUnreachable;
  Vec2 out{};
  for (std::size_t k = 0; k < grid.cell_count(); ++k) {
    const Vec2 c = grid.center(grid.cell_at(k));
    if (sim::in_collision(grid, c, spec)) continue;
    const double d = distance(c, mid);
    if (d < best) best = d, out = c;
  }
  if (best == world::kUnreachable) throw InvalidArgument("no free cell for the bench robot");
  return out;
}

class BenchRunner {
 public:
  BenchRunner(const world::OccupancyGrid& grid, const sim::RobotSpec& spec, BackendChoice backend,
              std::uint64_t seed)
      : grid_(grid), spec_(spec), backend_(std::move(backend)), rng_(seed) {
    const Vec2 s = bench_start(grid, spec);
    start_ = {s.x, s.y, 0.0};
    pose_ = start_;
  }

  void run(long n) {
    for (long k = 0; k < n; ++k) {
      const auto cmd = sim::clamp_command(agents::random_act(rng_, spec_).cmd, spec_);
      if (backend_.kind == task::BackendKind::kinematic) {
        pose_ = sim::kinematic_step(grid_, pose_, cmd, 1.0, spec_).pose;
      } else {
        const auto r = sim::dynamic_lite_step(grid_, pose_, vel_, cmd, 1.0, backend_.dynamic, spec_);
        pose_ = r.pose;
        vel_ = r.actual;
        if (r.events.fell) pose_ = start_, vel_ = {};
      }
    }
  }

  const sim::Pose& pose() const { return pose_; }

 private:
  const world::OccupancyGrid& grid_;
  sim::RobotSpec spec_;
  BackendChoice backend_;
  std::mt19937_64 rng_;
  sim::Pose start_;
  sim::Pose pose_;
  sim::VelocityCommand vel_;
};

}  // namespace detail

inline BenchEntry bench_backend(const world::OccupancyGrid& grid, const sim::RobotSpec& spec,
                                const BackendChoice& backend, const BenchOptions& opt = {}) {
  if (opt.steps < 1) throw InvalidArgument("bench needs at least one step");
  BenchEntry e{backend.name, opt.steps, 0.0, 0.0};
  double best = 0.0;
  for (int rep = 0; rep < std::max(1, opt.repeats); ++rep) {
    detail::BenchRunner runner(grid, spec, backend, opt.seed);
    runner.run(opt.warmup);
    const auto t0 = std::chrono::steady_clock::now();
    runner.run(opt.steps);
    const auto t1 = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(t1 - t0).count();
    if (rep == 0 || s < best) best = s;
  }
  e.seconds = best;
  e.steps_per_second = best > 0.0 ? static_cast<double>(opt.steps) / best : 0.0;
  return e;
}

inline BenchReport bench_throughput(const world::OccupancyGrid& grid, const sim::RobotSpec& spec,
                                    const std::vector<BackendChoice>& backends,
                                    const BenchOptions& opt = {}) {
  BenchReport r;
  for (const auto& b : backends) r.entries.push_back(bench_backend(grid, spec, b, opt));
  return r;
}

inline std::string write_bench_report(const BenchReport& r) {
  std::string out = "backend,steps,seconds,steps_per_second,ratio_vs_first\n";
  for (std::size_t k = 0; k < r.entries.size(); ++k) {
    const auto& e = r.entries[k];
    out += e.backend + "," + std::to_string(e.steps) + "," + fmt6(e.seconds) + "," +
           fmt6(e.steps_per_second) + "," + fmt6(r.ratio(k)) + "\n";
  }
  return out;
}

}  // namespace kinonav::harness

#endif  // KINONAV_HARNESS_BENCH_HPP_
