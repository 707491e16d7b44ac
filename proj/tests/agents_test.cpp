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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "kinonav/agents/agents.hpp"
#include "kinonav/epgen/episodes.hpp"
#include "kinonav/harness/batch.hpp"
#include "kinonav/task/environment.hpp"
#include "kinonav/world/generators.hpp"

namespace kinonav::agents {
namespace {

TEST(Oracle, StopsAtGoal) {
  const world::OccupancyGrid g(20, 20, 0.5);
  const auto field = world::distance_field(g, {3.25, 3.25}, sim::spot().footprint_radius);
  const auto a = oracle_act(g, field, {3.25, 3.25, 1.0}, sim::spot());
  EXPECT_TRUE(a.stop);
  EXPECT_EQ(a.cmd, (sim::VelocityCommand{}));
}

TEST(Oracle, OneMetreStraightAhead) {
  const world::OccupancyGrid g(20, 20, 0.5);
  const auto spot = sim::spot();
  const auto field = world::distance_field(g, {3.25, 2.25}, spot.footprint_radius);
  sim::Pose p{2.25, 2.25, 0.0};

  const auto a1 = oracle_act(g, field, p, spot);
  EXPECT_FALSE(a1.stop);
  EXPECT_NEAR(a1.cmd.vx, 0.5, 1e-12);
  EXPECT_NEAR(a1.cmd.vy, 0.0, 1e-12);
  EXPECT_NEAR(a1.cmd.w, 0.0, 1e-12);
  p = sim::kinematic_step(g, p, a1.cmd, 1.0, spot).pose;

  const auto a2 = oracle_act(g, field, p, spot);
  EXPECT_FALSE(a2.stop);
  EXPECT_GT(a2.cmd.vx, 0.0);
  EXPECT_LT(a2.cmd.vx, 0.5);
  p = sim::kinematic_step(g, p, a2.cmd, 1.0, spot).pose;
  EXPECT_LE(distance(p.position(), {3.25, 2.25}), spot.success_radius);

  EXPECT_TRUE(oracle_act(g, field, p, spot).stop);
}

TEST(Oracle, NoPathThrows) {
  const auto g = world::load_world(
      "cell_size 0.5\n"
      "##########\n"
      "#...#....#\n"
      "#...#....#\n"
      "#...#....#\n"
      "##########\n");
  const auto field = world::distance_field(g, {3.25, 1.25}, sim::spot().footprint_radius);
  EXPECT_THROW(oracle_act(g, field, {1.25, 1.25, 0.0}, sim::spot()), Error);
}

TEST(Oracle, CommandsWithinLimits) {
  const auto g = world::maze_grid(48, 48, 0.2, 8);
  const auto ds = epgen::sample_episodes(g, 20, 3, sim::spot());
  for (const auto& spec : {sim::a1(), sim::aliengo(), sim::spot()}) {
    for (const auto& e : ds.episodes) {
      const auto field = world::distance_field(g, e.goal, spec.footprint_radius);
      const auto a = oracle_act(g, field, e.start, spec);
      EXPECT_LE(std::abs(a.cmd.vx), spec.lin_limit + 1e-12);
      EXPECT_LE(std::abs(a.cmd.vy), spec.lin_limit + 1e-12);
      EXPECT_LE(std::abs(a.cmd.w), spec.ang_limit + 1e-12);
    }
  }
}

TEST(Oracle, GeodesicStrictlyDecreasesOnRollout) {
  auto g = std::make_shared<const world::OccupancyGrid>(world::maze_grid(64, 64, 0.2, 12));
  const auto spot = sim::spot();
  const auto ds = epgen::sample_episodes(*g, 40, 5, spot);
  task::EnvConfig cfg;
  cfg.render_depth = false;
  task::Environment env(g, spot, cfg);
  OraclePolicy policy;
  int successes = 0;
  for (const auto& e : ds.episodes) {
    auto obs = env.reset(e, 0);
    Briefing b;
    b.goal = e.goal;
    b.start_heading = e.start.theta;
    b.spec = spot;
    b.grid = g;
    b.field = env.shared_field();
    auto memory = policy.initial_memory(b);
    double prev = env.dgeo();
    while (!env.done()) {
      auto [a, m] = policy.act(obs, std::move(memory));
      memory = std::move(m);
      const auto o = env.step(a.cmd, a.stop);
      obs = o.observation;
      if (!a.stop) {
        EXPECT_LT(env.dgeo(), prev) << "episode " << e.episode_id;
      }
      EXPECT_FALSE(o.info.blocked);
      prev = env.dgeo();
    }
    successes += env.result().success;
    EXPECT_GE(env.result().spl, 0.9) << "episode " << e.episode_id;
  }
  EXPECT_EQ(successes, 40);
}

TEST(Oracle, PolicyNeedsMapKnowledge) {
  OraclePolicy p;
  Briefing b;
  EXPECT_THROW(p.initial_memory(b), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Random baseline

TEST(Random, WithinLimitsNeverStops) {
  std::mt19937_64 rng(4);
  const auto spec = sim::a1();
  for (int k = 0; k < 100000; ++k) {
    const auto a = random_act(rng, spec);
    ASSERT_FALSE(a.stop);
    ASSERT_LE(std::abs(a.cmd.vx), spec.lin_limit);
    ASSERT_LE(std::abs(a.cmd.vy), spec.lin_limit);
    ASSERT_LE(std::abs(a.cmd.w), spec.ang_limit);
  }
}

TEST(Random, DeterministicForSeed) {
  std::mt19937_64 r1(17);
  std::mt19937_64 r2(17);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_act(r1, sim::spot());
    const auto b = random_act(r2, sim::spot());
    ASSERT_EQ(a.cmd, b.cmd);
  }
}

TEST(Random, MeansNearZero) {
  std::mt19937_64 rng(99);
  const auto spec = sim::spot();
  const int n = 100000;
  double sx = 0, sy = 0, sw = 0;
  for (int k = 0; k < n; ++k) {
    const auto a = random_act(rng, spec);
    sx += a.cmd.vx;
    sy += a.cmd.vy;
    sw += a.cmd.w;
  }
  // Uniform on [-L, L] has sigma L / sqrt(3).
  const double lin_bound = 3.0 * spec.lin_limit / std::sqrt(3.0) / std::sqrt(double(n));
  const double ang_bound = 3.0 * spec.ang_limit / std::sqrt(3.0) / std::sqrt(double(n));
  EXPECT_LE(std::abs(sx / n), lin_bound);
  EXPECT_LE(std::abs(sy / n), lin_bound);
  EXPECT_LE(std::abs(sw / n), ang_bound);
}

// ---------------------------------------------------------------------------
// Policy interface under the harness

/// Keeps a step counter in memory and checks it comes back unchanged.
class ProbePolicy final : public Policy {
 public:
  Memory initial_memory(const Briefing&) override { return {0.0}; }
  std::pair<AgentAction, Memory> act(const task::Observation&, Memory memory) override {
    EXPECT_EQ(memory.size(), 1u);
    EXPECT_EQ(memory[0], static_cast<double>(calls_));
    ++calls_;
    memory[0] += 1.0;
    return {{{0.1, 0.0, 0.2}, false}, std::move(memory)};
  }
  int calls() const { return calls_; }

 private:
  int calls_ = 0;
};

TEST(Interface, MemoryRoundTripsUntouched) {
  auto g = std::make_shared<const world::OccupancyGrid>(20, 20, 0.5);
  task::Environment env(g, sim::a1());
  task::Episode e;
  e.start = {2.25, 2.25, 0.0};
  e.goal = {8.25, 8.25};
  ProbePolicy probe;
  const auto r = harness::run_episode(env, e, nullptr, probe, 0);
  EXPECT_EQ(probe.calls(), sim::a1().max_steps);
  EXPECT_EQ(r.num_actions, probe.calls());
}

TEST(Interface, ConstantAndOracleRunUnchanged) {
  auto g = std::make_shared<const world::OccupancyGrid>(world::maze_grid(32, 32, 0.2, 2));
  const auto ds = epgen::sample_episodes(*g, 5, 1, sim::spot());
  harness::EvalConfig cfg;
  cfg.seeds = {0};
  const auto constant = harness::run_batch(
      g, ds, cfg, [] { return std::make_unique<ConstantPolicy>(sim::VelocityCommand{0.2, 0, 0}); });
  EXPECT_EQ(constant.results.size(), 5u);
  const auto oracle = harness::run_batch(g, ds, cfg, policy_factory("oracle"));
  EXPECT_EQ(oracle.aggregate.success_rate, 1.0);
  EXPECT_THROW(policy_factory("nope"), InvalidArgument);
}

}  // namespace
}  // namespace kinonav::agents
