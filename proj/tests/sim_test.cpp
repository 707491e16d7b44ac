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
#include <limits>
#include <random>
#include <vector>

#include "kinonav/sim/dynamic_lite.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/noise.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/generators.hpp"
#include "oracles.hpp"

namespace kinonav::sim {
namespace {

// 10 m x 10 m open square centred on the origin.
world::OccupancyGrid open_square() { return world::OccupancyGrid(20, 20, 0.5, Vec2{-5.0, -5.0}); }

// Open square with a wall whose face is at x = wall_x.
world::OccupancyGrid wall_at(double wall_x) {
  std::vector<std::uint8_t> cells(40 * 40, 0);
  const int i = static_cast<int>(std::lround((wall_x + 5.0) / 0.25));
  for (int j = 0; j < 40; ++j) cells[j * 40 + i] = 1;
  return world::OccupancyGrid(40, 40, 0.25, cells, Vec2{-5.0, -5.0});
}

// ---------------------------------------------------------------------------
// Robot parameters

TEST(RobotParams, Table) {
  const auto spot = derive_robot_params(0.44);
  EXPECT_EQ(spot.lin_limit, 0.50);
  EXPECT_EQ(spot.ang_limit, 0.30);
  EXPECT_EQ(spot.max_steps, 150);
  const auto a1 = derive_robot_params(0.20);
  EXPECT_EQ(a1.lin_limit, 0.23);
  EXPECT_EQ(a1.ang_limit, 0.14);
  EXPECT_EQ(a1.max_steps, 326);
  const auto aliengo = derive_robot_params(0.25);
  EXPECT_EQ(aliengo.lin_limit, 0.28);
  EXPECT_EQ(aliengo.ang_limit, 0.17);
  EXPECT_EQ(aliengo.max_steps, 268);
}

TEST(RobotParams, RejectsNonPositive) {
  EXPECT_THROW(derive_robot_params(0.0), InvalidArgument);
  EXPECT_THROW(derive_robot_params(-0.3), InvalidArgument);
  EXPECT_THROW(derive_robot_params(std::nan("")), InvalidArgument);
}

TEST(RobotParams, NamedRobots) {
  EXPECT_EQ(robot_by_name("spot").success_radius, 0.425);
  EXPECT_EQ(robot_by_name("a1").success_radius, 0.24);
  EXPECT_EQ(robot_by_name("aliengo").success_radius, 0.32);
  EXPECT_THROW(robot_by_name("anymal"), InvalidArgument);
  for (const auto& s : {a1(), aliengo(), spot()}) EXPECT_NO_THROW(validate(s));
}

// ---------------------------------------------------------------------------
// Clamping

TEST(Clamp, Examples) {
  EXPECT_EQ(clamp_command({0.8, 0.0, 0.0}, spot()), (VelocityCommand{0.5, 0.0, 0.0}));
  EXPECT_EQ(clamp_command({0.2, -0.1, 0.1}, spot()), (VelocityCommand{0.2, -0.1, 0.1}));
  EXPECT_EQ(clamp_command({-3.0, 3.0, -1.0}, a1()), (VelocityCommand{-0.23, 0.23, -0.14}));
}

TEST(Clamp, IdempotentAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto s = aliengo();
  for (int k = 0; k < 1000; ++k) {
    const VelocityCommand c{u(rng), u(rng), u(rng)};
    const auto once = clamp_command(c, s);
    EXPECT_EQ(clamp_command(once, s), once);
    EXPECT_LE(std::abs(once.vx), s.lin_limit);
    EXPECT_LE(std::abs(once.vy), s.lin_limit);
    EXPECT_LE(std::abs(once.w), s.ang_limit);
  }
}

TEST(Clamp, NonFiniteThrows) {
  EXPECT_THROW(clamp_command({std::nan(""), 0, 0}, spot()), InvalidArgument);
  EXPECT_THROW(clamp_command({0, std::numeric_limits<double>::infinity(), 0}, spot()),
               InvalidArgument);
}

// ---------------------------------------------------------------------------
// Kinematic backend

TEST(Kinematic, AxisAlignedEuler) {
  const auto r = kinematic_step(open_square(), {0, 0, 0}, {0.5, 0, 0}, 1.0, spot());
  EXPECT_FALSE(r.blocked);
  EXPECT_EQ(r.pose, (Pose{0.5, 0.0, 0.0}));
}

TEST(Kinematic, StartOfStepHeading) {
  const auto r = kinematic_step(open_square(), {0, 0, kPi / 2}, {0.5, 0, 0.3}, 1.0, spot());
  EXPECT_FALSE(r.blocked);
  EXPECT_NEAR(r.pose.x, 0.0, 1e-12);
  EXPECT_NEAR(r.pose.y, 0.5, 1e-12);
  EXPECT_NEAR(r.pose.theta, kPi / 2 + 0.3, 1e-12);
}

TEST(Kinematic, BlockedInFrontOfWall) {
  const auto g = wall_at(0.3);
  const auto r = kinematic_step(g, {0, 0, 0}, {0.5, 0, 0.2}, 1.0, spot());
  EXPECT_TRUE(r.blocked);
  EXPECT_EQ(r.pose.x, 0.0);
  EXPECT_EQ(r.pose.y, 0.0);
  EXPECT_DOUBLE_EQ(r.pose.theta, 0.2);  // heading still turns
}

TEST(Kinematic, StartingInCollisionThrows) {
  const auto g = wall_at(0.1);
  EXPECT_THROW(kinematic_step(g, {0, 0, 0}, {0, 0, 0}, 1.0, spot()), InconsistentState);
}

TEST(Kinematic, EndpointOnlyUnlessSwept) {
  // A one-cell pillar between start and target; the endpoint is clear.
  std::vector<std::uint8_t> cells(40 * 40, 0);
  cells[20 * 40 + 21] = 1;  // x in [0.25, 0.5], y in [0, 0.25]
  const world::OccupancyGrid g(40, 40, 0.25, cells, Vec2{-5.0, -5.0});
  const Pose start{-0.2, 0.1, 0.0};
  const VelocityCommand cmd{0.5, 0.0, 0.0};
  const RobotSpec small = a1();
  auto far = kinematic_step(g, start, {1.0, 0, 0}, 1.0, small);
  EXPECT_FALSE(far.blocked);  // endpoint (0.8, 0.1) is clear of the pillar
  KinematicOptions swept;
  swept.swept_check = true;
  EXPECT_TRUE(kinematic_step(g, start, {1.0, 0, 0}, 1.0, small, swept).blocked);
  (void)cmd;
}

TEST(Kinematic, MatchesClosedFormInOpenSpace) {
  const auto g = open_square();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> lin(-0.5, 0.5);
  std::uniform_real_distribution<double> rot(-0.3, 0.3);
  for (int k = 0; k < 1000; ++k) {
    const Pose p{pos(rng), pos(rng), ang(rng)};
    const VelocityCommand c{lin(rng), lin(rng), rot(rng)};
    const auto r = kinematic_step(g, p, c, 1.0, spot());
    ASSERT_FALSE(r.blocked);
    const double ex = p.x + c.vx * std::cos(p.theta) - c.vy * std::sin(p.theta);
    const double ey = p.y + c.vx * std::sin(p.theta) + c.vy * std::cos(p.theta);
    EXPECT_NEAR(r.pose.x, ex, 1e-12);
    EXPECT_NEAR(r.pose.y, ey, 1e-12);
    EXPECT_NEAR(std::remainder(r.pose.theta - (p.theta + c.w), 2 * kPi), 0.0, 1e-12);
    // Displacement equals |v| dt in open space.
    EXPECT_NEAR(distance(p.position(), r.pose.position()), std::hypot(c.vx, c.vy), 1e-12);
  }
}

TEST(Kinematic, Deterministic) {
  const auto g = world::random_grid(30, 30, 0.3, 0.1, 2);
  const Pose p{4.5, 4.5, 0.3};
  if (in_collision(g, p.position(), a1())) GTEST_SKIP();
  const auto a = kinematic_step(g, p, {0.2, 0.1, 0.1}, 1.0, a1());
  const auto b = kinematic_step(g, p, {0.2, 0.1, 0.1}, 1.0, a1());
  EXPECT_EQ(a.pose, b.pose);
}

// Random walks on cluttered maps: never inside an obstacle, heading always
// normalised, displacement never exceeds |v| dt.
TEST(Kinematic, SafetyAndNormalisationProperty) {
  const RobotSpec s = aliengo();
  for (int map = 0; map < 5; ++map) {
    const auto g = world::random_grid(30, 30, 0.3, 0.12, 40 + map);
    std::mt19937_64 rng(map);
    const auto free = world::inflate(g, s.footprint_radius);
    std::size_t idx = 0;
    while (idx < free.size() && !free[idx]) ++idx;
    ASSERT_LT(idx, free.size());
    Pose p{g.center(g.cell_at(idx)).x, g.center(g.cell_at(idx)).y, 0.0};
    std::uniform_real_distribution<double> lin(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
      const auto c = clamp_command({lin(rng), lin(rng), lin(rng)}, s);
      const auto r = kinematic_step(g, p, c, 1.0, s);
      EXPECT_FALSE(in_collision(g, r.pose.position(), s));
      EXPECT_GT(r.pose.theta, -kPi);
      EXPECT_LE(r.pose.theta, kPi);
      EXPECT_LE(distance(p.position(), r.pose.position()), std::hypot(c.vx, c.vy) + 1e-12);
      p = r.pose;
    }
  }
}

// ---------------------------------------------------------------------------
// Dynamic-lite backend

TEST(DynamicLite, ClosedFormLag) {
  DynamicLiteConfig cfg{1.0, 240, true, 0.002};
  const auto r =
      dynamic_lite_step(open_square(), {0, 0, 0}, {}, {0.5, 0, 0}, 1.0, cfg, spot());
  const double expect = 0.5 * (1.0 - std::pow(1.0 - 1.0 / 240.0, 240));
  EXPECT_NEAR(r.actual.vx, expect, 1e-12);
  EXPECT_NEAR(r.actual.vx, 0.316444, 1e-6);
  const auto [v, x] = oracle::lag_1d(0.0, 0.5, 1.0, 1.0, 240);
  EXPECT_NEAR(r.actual.vx, v, 1e-12);
  EXPECT_NEAR(r.pose.x, x, 1e-9);
  EXPECT_EQ(r.events.contact_substeps, 0);
}

TEST(DynamicLite, FastLagLimitEqualsKinematic) {
  const auto g = open_square();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lin(-0.5, 0.5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int k = 0; k < 200; ++k) {
    const Pose p{lin(rng), lin(rng), ang(rng)};
    const VelocityCommand c{lin(rng), lin(rng), 0.0};
    DynamicLiteConfig cfg{1.0 / 240.0, 240, true, 0.002};
    const auto d = dynamic_lite_step(g, p, {}, c, 1.0, cfg, spot());
    const auto e = kinematic_step(g, p, c, 1.0, spot());
    EXPECT_NEAR(d.pose.x, e.pose.x, 1e-6);
    EXPECT_NEAR(d.pose.y, e.pose.y, 1e-6);
    EXPECT_NEAR(d.pose.theta, e.pose.theta, 1e-12);
  }
}

TEST(DynamicLite, SlideAlongWall) {
  // Moving diagonally into a wall at x = 0.3: profile-A slides in y,
  // profile-B holds.
  const auto g = wall_at(0.3);
  const Pose p{0.0, 0.0, 0.0};
  const VelocityCommand c{0.2, 0.2, 0.0};
  auto a = dynamic_lite_step(g, p, c, c, 1.0, profile_a(), spot());
  auto b = dynamic_lite_step(g, p, c, c, 1.0, profile_b(), spot());
  EXPECT_GT(a.events.contact_substeps, 0);
  EXPECT_GT(b.events.contact_substeps, 0);
  EXPECT_GT(a.pose.y, b.pose.y + 0.05);
  EXPECT_LE(a.pose.x, 0.3 - spot().footprint_radius + 1e-12);
  EXPECT_FALSE(a.events.fell);
  EXPECT_FALSE(b.events.fell);
}

TEST(DynamicLite, HardImpactFalls) {
  const auto g = wall_at(0.6);
  const VelocityCommand fast{0.5, 0.0, 0.0};
  const auto r = dynamic_lite_step(g, {0.0, 0.0, 0.0}, fast, fast, 1.0, profile_b(), spot());
  EXPECT_TRUE(r.events.fell);
  EXPECT_GT(r.events.max_penetration, profile_b().fall_penetration);
  EXPECT_FALSE(in_collision(g, r.pose.position(), spot()));
  // A gentle approach only touches.
  const VelocityCommand slow{0.2, 0.0, 0.0};
  auto s = dynamic_lite_step(g, {0.2, 0.0, 0.0}, slow, slow, 1.0, profile_b(), spot());
  EXPECT_FALSE(s.events.fell);
  EXPECT_GT(s.events.contact_substeps, 0);
}

TEST(DynamicLite, SafetyProperty) {
  const RobotSpec s = spot();
  for (const auto& cfg : {profile_a(), profile_b()}) {
    const auto g = world::random_grid(30, 30, 0.3, 0.08, 61);
    const auto free = world::inflate(g, s.footprint_radius);
    std::size_t idx = 0;
    while (idx < free.size() && !free[idx]) ++idx;
    ASSERT_LT(idx, free.size());
    Pose p{g.center(g.cell_at(idx)).x, g.center(g.cell_at(idx)).y, 0.0};
    VelocityCommand v{};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
      const auto c = clamp_command({u(rng), u(rng), u(rng)}, s);
      const auto r = dynamic_lite_step(g, p, v, c, 1.0, cfg, s);
      EXPECT_FALSE(in_collision(g, r.pose.position(), s));
      EXPECT_GT(r.pose.theta, -kPi);
      EXPECT_LE(r.pose.theta, kPi);
      p = r.pose;
      v = r.events.fell ? VelocityCommand{} : r.actual;
    }
  }
}

TEST(DynamicLite, ConfigValidation) {
  EXPECT_THROW(validate(DynamicLiteConfig{0.0, 240, true, 0.002}), InvalidArgument);
  EXPECT_THROW(validate(DynamicLiteConfig{0.3, 0, true, 0.002}), InvalidArgument);
  EXPECT_EQ(profile_by_name("profile-B").tau, 0.60);
  EXPECT_FALSE(profile_by_name("b").slide_on_contact);
  EXPECT_THROW(profile_by_name("c"), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Noise

TEST(Noise, CoupledMeanOnly) {
  NoiseModel m = spot_coupled_noise();
  m.sigma = {0, 0, 0};
  std::mt19937_64 rng(0);
  const auto out = apply_noise({0.2, 0.0, 0.1}, m, rng);
  EXPECT_NEAR(out.vx, 0.202, 1e-15);
  EXPECT_NEAR(out.vy, -0.004, 1e-15);
  EXPECT_NEAR(out.w, 0.1 + 0.081 * kPi / 180.0, 1e-15);
  EXPECT_NEAR(out.w, 0.101414, 1e-6);
}

TEST(Noise, ZeroModelIsIdentity) {
  std::mt19937_64 rng(0);
  const VelocityCommand c{0.31, -0.2, 0.05};
  EXPECT_EQ(apply_noise(c, NoiseModel{}, rng), c);
  // and draws nothing from the generator
  std::mt19937_64 fresh(0);
  EXPECT_EQ(rng(), fresh());
}

TEST(Noise, NotReclamped) {
  NoiseModel m;
  m.mu = {0.3, 0.0, 0.0};
  std::mt19937_64 rng(0);
  EXPECT_DOUBLE_EQ(apply_noise({0.5, 0, 0}, m, rng).vx, 0.8);
}

TEST(Noise, EmpiricalMeanWithinThreeSigma) {
  const NoiseModel m = spot_coupled_noise();
  std::mt19937_64 rng(2024);
  const int n = 100000;
  double sum[3] = {0, 0, 0};
  for (int k = 0; k < n; ++k) {
    const auto e = apply_noise({}, m, rng);
    sum[0] += e.vx;
    sum[1] += e.vy;
    sum[2] += e.w;
  }
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(sum[a] / n, m.mu[a], 3.0 * m.sigma[a] / std::sqrt(double(n))) << a;
}

TEST(NoiseFit, ConstantResidual) {
  std::vector<NoiseSample> log;
  for (int k = 0; k < 5; ++k) {
    const VelocityCommand c{0.1 * k, -0.05 * k, 0.02 * k};
    log.push_back({ExcitedAxis::all, c, {c.vx + 0.01, c.vy + 0.01, c.w + 0.01}});
  }
  const auto m = fit_noise_model(log, NoiseMode::coupled);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(m.mu[a], 0.01, 1e-15);
    EXPECT_NEAR(m.sigma[a], 0.0, 1e-15);
  }
  EXPECT_EQ(m.sample_count, 5u);
}

TEST(NoiseFit, UnbiasedSigma) {
  // Residuals 1, 2, 3, 4 on x: mean 2.5, sample sd sqrt(5/3).
  std::vector<NoiseSample> log;
  for (int k = 1; k <= 4; ++k) log.push_back({ExcitedAxis::all, {}, {double(k), 0, 0}});
  const auto m = fit_noise_model(log, NoiseMode::coupled);
  EXPECT_DOUBLE_EQ(m.mu[0], 2.5);
  EXPECT_NEAR(m.sigma[0], std::sqrt(5.0 / 3.0), 1e-15);
}

TEST(NoiseFit, InsufficientSamples) {
  std::vector<NoiseSample> log{{ExcitedAxis::all, {}, {}}};
  EXPECT_THROW(fit_noise_model(log, NoiseMode::coupled), Error);
  // Decoupled: only x is excited.
  std::vector<NoiseSample> xs(10, NoiseSample{ExcitedAxis::x, {}, {}});
  EXPECT_THROW(fit_noise_model(xs, NoiseMode::decoupled), Error);
}

TEST(NoiseFit, RecoversCoupledTable) {
  const NoiseModel truth = spot_coupled_noise();
  std::mt19937_64 rng(11);
  const auto log = synthesize_noise_log(truth, NoiseMode::coupled, 6000, rng);
  const auto m = fit_noise_model(log, NoiseMode::coupled);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(m.mu[a], truth.mu[a], 0.005);
    EXPECT_NEAR(m.sigma[a], truth.sigma[a], 0.10 * truth.sigma[a]);
  }
}

TEST(NoiseFit, RecoversDecoupledTable) {
  const NoiseModel truth = spot_decoupled_noise();
  std::mt19937_64 rng(12);
  const auto log = synthesize_noise_log(truth, NoiseMode::decoupled, 6000, rng);
  const auto m = fit_noise_model(log, NoiseMode::decoupled);
  EXPECT_EQ(m.mode, NoiseMode::decoupled);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(m.mu[a], truth.mu[a], 0.005);
    EXPECT_NEAR(m.sigma[a], truth.sigma[a], 0.10 * truth.sigma[a]);
  }
}

TEST(NoiseFile, TableLoadsWithDegreeConversion) {
  const auto m = read_noise_model(
      "# coupled\nmode coupled\nunits deg_per_s\nmu 0.002 -0.004 0.081\n"
      "sigma 0.054 0.065 2.599\nsample_count 6000\n");
  const auto ref = spot_coupled_noise();
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(m.mu[a], ref.mu[a], 1e-9);
    EXPECT_NEAR(m.sigma[a], ref.sigma[a], 1e-9);
  }
  EXPECT_NEAR(m.mu[2], 0.081 * kPi / 180.0, 1e-9);
  EXPECT_EQ(m.sample_count, 6000u);
}

TEST(NoiseFile, RoundTripBothUnits) {
  for (const auto& m : {spot_coupled_noise(), spot_decoupled_noise()}) {
    for (auto units : {AngularUnits::deg_per_s, AngularUnits::rad_per_s}) {
      const std::string doc = write_noise_model(m, units);
      const auto back = read_noise_model(doc);
      EXPECT_EQ(back.mode, m.mode);
      // The table values are exact in degrees; radians go through six
      // significant digits.
      const bool deg = units == AngularUnits::deg_per_s;
      for (int a = 0; a < 3; ++a) {
        EXPECT_NEAR(back.mu[a], m.mu[a], deg ? 1e-9 : 5e-6 * std::abs(m.mu[a]));
        EXPECT_NEAR(back.sigma[a], m.sigma[a], deg ? 1e-9 : 5e-6 * m.sigma[a]);
      }
      EXPECT_EQ(write_noise_model(back, units), doc);
    }
  }
  EXPECT_EQ(write_noise_model(spot_coupled_noise(), AngularUnits::deg_per_s),
            "mode coupled\nunits deg_per_s\nmu 0.002 -0.004 0.081\nsigma 0.054 0.065 2.599\n"
            "sample_count 6000\n");
}

TEST(NoiseFile, Errors) {
  EXPECT_THROW(read_noise_model("mode coupled\nunits deg_per_s\nmu 0 0 0\nsample_count 1\n"),
               ParseError);
  EXPECT_THROW(read_noise_model("mode sideways\n"), ParseError);
  EXPECT_THROW(read_noise_model("mode coupled\nunits deg_per_s\nmu 0 0 0\nsigma 0 -1 0\n"
                                "sample_count 1\n"),
               ParseError);
  try {
    read_noise_model("mode coupled\nunits furlongs\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(NoiseLog, RoundTrip) {
  std::mt19937_64 rng(4);
  const auto log = synthesize_noise_log(spot_decoupled_noise(), NoiseMode::decoupled, 30, rng);
  const auto back = read_noise_log(write_noise_log(log));
  ASSERT_EQ(back.size(), log.size());
  const auto a = fit_noise_model(log, NoiseMode::decoupled);
  const auto b = fit_noise_model(back, NoiseMode::decoupled);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.mu[k], b.mu[k], 1e-5);
  EXPECT_EQ(back[0].axis, log[0].axis);
  EXPECT_EQ(back[29].axis, log[29].axis);
}

}  // namespace
}  // namespace kinonav::sim
