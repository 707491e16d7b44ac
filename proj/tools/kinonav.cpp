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

// kinonav command-line front end.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinonav/kinonav.hpp"

namespace fs = std::filesystem;
using namespace kinonav;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

// Empty path or "-" means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

world::OccupancyGrid load_map(const std::string& path) {
  try {
    return world::load_world(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

struct GenMapArgs {
  std::string kind = "maze";
  int width = 64;
  int height = 64;
  double cell_size = 0.2;
  double density = 0.2;
  std::uint64_t seed = 0;
  std::string out;
};

struct GenEpisodesArgs {
  std::string map;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double ratio_min = epgen::kDefaultRatioMin;
  std::string robot = "spot";
  std::string scene;
  std::string out;
};

struct RunArgs {
  std::string map;
  std::string dataset;
  std::string robot = "spot";
  std::string backend = "kinematic";
  std::string noise = "none";
  std::string agent = "oracle";
  std::string seeds = "0,1,2";
  int workers = 1;
  std::string label;
  std::string train_label = "kinematic";
  bool trajectories = false;
  std::string out;
};

struct GapArgs {
  std::string results;
  std::string out;
};

struct BenchArgs {
  std::string map;
  std::vector<std::string> backends;
  long steps = 20000;
  long warmup = 1000;
  int substeps = 0;
  std::string robot = "spot";
  std::string out;
};

struct FitNoiseArgs {
  std::string log;
  std::string mode = "coupled";
  std::string units = "deg";
  std::string out;
};

struct SynthNoiseArgs {
  std::string model;
  std::string mode = "coupled";
  std::size_t n = 6000;
  std::uint64_t seed = 0;
  std::string out;
};

struct PlotArgs {
  std::string map;
  std::vector<std::string> traj;
  double scale = 40.0;
  std::string out;
};

void cmd_gen_map(const GenMapArgs& a) {
  world::OccupancyGrid g = a.kind == "maze"
                               ? world::maze_grid(a.width, a.height, a.cell_size, a.seed)
                               : world::random_grid(a.width, a.height, a.cell_size, a.density, a.seed);
  emit(a.out, world::save_world(g));
}

void cmd_gen_episodes(const GenEpisodesArgs& a) {
  const auto grid = load_map(a.map);
  epgen::SampleOptions opt;
  opt.ratio_min = a.ratio_min;
  opt.scene_id = a.scene.empty() ? fs::path(a.map).stem().string() : a.scene;
  const auto ds = epgen::sample_episodes(grid, a.n, a.seed, sim::robot_by_name(a.robot), opt);
  emit(a.out, epgen::write_dataset(ds));
}

void cmd_run(const RunArgs& a) {
  auto grid = std::make_shared<const world::OccupancyGrid>(load_map(a.map));
  const std::string dataset_text = read_file(a.dataset);
  epgen::EpisodeDataset ds;
  try {
    ds = epgen::read_dataset(dataset_text);
  } catch (const ParseError& e) {
    throw Error(a.dataset + ": " + e.what());
  }

  harness::EvalConfig cfg;
  harness::set_backend(cfg, a.backend);
  cfg.robot = sim::robot_by_name(a.robot);
  cfg.agent_name = a.agent;
  cfg.seeds = harness::parse_seeds(a.seeds);
  if (cfg.seeds.empty()) throw InvalidArgument("--seeds must list at least one seed");
  cfg.workers = a.workers;
  cfg.train_label = a.train_label;
  cfg.env.render_depth = a.agent != "oracle";
  cfg.env.record_trajectory = a.trajectories;
  if (a.noise != "none") {
    cfg.env.noise = sim::read_noise_model(read_file(a.noise));
    cfg.noise_name = fs::path(a.noise).stem().string();
  }
  cfg.label = !a.label.empty() ? a.label
              : cfg.env.noise  ? a.backend + "+" + cfg.noise_name
                               : a.backend;

  const auto result = harness::run_batch(grid, ds, cfg, agents::policy_factory(a.agent),
                                         harness::hash_text(dataset_text));
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "summary.txt", harness::write_summary(harness::summarize(result)));
  write_file(dir / "episodes.csv", harness::write_episode_results(result.results));
  if (a.trajectories) {
    for (const auto& r : result.results) {
      write_file(dir / "trajectories" /
                     ("ep" + std::to_string(r.episode_id) + "_s" + std::to_string(r.seed) + ".csv"),
                 task::write_trajectory(r));
    }
  }
  std::cout << harness::write_summary(harness::summarize(result));
}

bool is_run_dir(const fs::path& p) {
  return fs::is_regular_file(p / "summary.txt") && fs::is_regular_file(p / "episodes.csv");
}

void cmd_gap(const GapArgs& a) {
  const fs::path root(a.results);
  if (!fs::is_directory(root)) throw Error("'" + a.results + "' is not a directory");
  std::vector<fs::path> dirs;
  if (is_run_dir(root)) dirs.push_back(root);
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && is_run_dir(entry.path())) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw Error("no run directories (summary.txt + episodes.csv) under '" +
                                a.results + "'");
  std::vector<harness::RunRecord> runs;
  for (const auto& d : dirs) {
    try {
      runs.push_back({harness::read_summary(read_file((d / "summary.txt").string())),
                      harness::read_episode_results(read_file((d / "episodes.csv").string()))});
    } catch (const ParseError& e) {
      throw Error(d.string() + ": " + e.what());
    }
  }
  emit(a.out, harness::write_gap_table(harness::sim2sim_gap(runs)));
}

void cmd_bench(const BenchArgs& a) {
  const auto grid = load_map(a.map);
  std::vector<harness::BackendChoice> backends;
  const std::vector<std::string> names =
      a.backends.empty() ? std::vector<std::string>{"kinematic", "dynlite-a"} : a.backends;
  for (const auto& n : names) {
    auto b = harness::backend_choice(n);
    if (a.substeps > 0 && b.kind == task::BackendKind::dynamic_lite) {
      b.dynamic.substeps = a.substeps;
      b.name += "@" + std::to_string(a.substeps);
    }
    backends.push_back(b);
  }
  harness::BenchOptions opt;
  opt.steps = a.steps;
  opt.warmup = a.warmup;
  const auto report = harness::bench_throughput(grid, sim::robot_by_name(a.robot), backends, opt);
  emit(a.out, harness::write_bench_report(report));
}

void cmd_fit_noise(const FitNoiseArgs& a) {
  const auto samples = sim::read_noise_log(read_file(a.log));
  const auto model = sim::fit_noise_model(samples, sim::parse_noise_mode(a.mode));
  emit(a.out, sim::write_noise_model(model, a.units == "rad" ? sim::AngularUnits::rad_per_s
                                                             : sim::AngularUnits::deg_per_s));
}

void cmd_synth_noise(const SynthNoiseArgs& a) {
  const auto truth = sim::read_noise_model(read_file(a.model));
  std::mt19937_64 rng(a.seed);
  emit(a.out, sim::write_noise_log(
                  sim::synthesize_noise_log(truth, sim::parse_noise_mode(a.mode), a.n, rng)));
}

void cmd_plot(const PlotArgs& a) {
  const auto grid = load_map(a.map);
  std::vector<task::TrajectoryLog> logs;
  for (const auto& f : a.traj) {
    try {
      logs.push_back(task::read_trajectory(read_file(f)));
    } catch (const ParseError& e) {
      throw Error(f + ": " + e.what());
    }
  }
  harness::PlotOptions opt;
  opt.pixels_per_meter = a.scale;
  emit(a.out, harness::emit_plot(grid, logs, opt));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinonav: 2D PointGoal navigation simulator and evaluation harness"};
  app.require_subcommand(1);

  GenMapArgs gm;
  auto* gen_map = app.add_subcommand("gen-map", "Generate a maze or random occupancy map");
  gen_map->add_option("--kind", gm.kind)->check(CLI::IsMember({"maze", "random"}));
  gen_map->add_option("--width", gm.width)->check(CLI::PositiveNumber);
  gen_map->add_option("--height", gm.height)->check(CLI::PositiveNumber);
  gen_map->add_option("--cell-size", gm.cell_size)->check(CLI::PositiveNumber);
  gen_map->add_option("--density", gm.density)->check(CLI::Range(0.0, 1.0));
  gen_map->add_option("--seed", gm.seed);
  gen_map->add_option("--out", gm.out);
  gen_map->callback([&] { cmd_gen_map(gm); });

  GenEpisodesArgs ge;
  auto* gen_ep = app.add_subcommand("gen-episodes", "Sample a validated episode dataset");
  gen_ep->add_option("--map", ge.map)->required()->check(CLI::ExistingFile);
  gen_ep->add_option("--n", ge.n)->required();
  gen_ep->add_option("--seed", ge.seed);
  gen_ep->add_option("--ratio-min", ge.ratio_min);
  gen_ep->add_option("--robot", ge.robot, "reference (largest) robot")
      ->check(CLI::IsMember({"a1", "aliengo", "spot"}));
  gen_ep->add_option("--scene", ge.scene);
  gen_ep->add_option("--out", ge.out);
  gen_ep->callback([&] { cmd_gen_episodes(ge); });

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Evaluate an agent on a dataset");
  run->add_option("--map", ra.map)->required()->check(CLI::ExistingFile);
  run->add_option("--dataset", ra.dataset)->required()->check(CLI::ExistingFile);
  run->add_option("--robot", ra.robot)->check(CLI::IsMember({"a1", "aliengo", "spot"}));
  run->add_option("--backend", ra.backend)
      ->check(CLI::IsMember({"kinematic", "dynlite-a", "dynlite-b"}));
  run->add_option("--noise", ra.noise, "noise model file or 'none'");
  run->add_option("--agent", ra.agent)->check(CLI::IsMember({"oracle", "random"}));
  run->add_option("--seeds", ra.seeds, "comma-separated base seeds");
  run->add_option("--workers", ra.workers)->check(CLI::PositiveNumber);
  run->add_option("--label", ra.label, "evaluation label (default: backend[+noise])");
  run->add_option("--train-label", ra.train_label, "condition the agent was built for");
  run->add_flag("--trajectories", ra.trajectories, "also write per-run trajectory logs");
  run->add_option("--out", ra.out)->required();
  run->callback([&] { cmd_run(ra); });

  GapArgs ga;
  auto* gap = app.add_subcommand("gap", "Cross-configuration success-rate table");
  gap->add_option("--results", ga.results)->required();
  gap->add_option("--out", ga.out);
  gap->callback([&] { cmd_gap(ga); });

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Backend control-step throughput");
  bench->add_option("--map", ba.map)->required()->check(CLI::ExistingFile);
  bench->add_option("--backend", ba.backends, "repeatable; first entry is the ratio baseline")
      ->check(CLI::IsMember({"kinematic", "dynlite-a", "dynlite-b"}));
  bench->add_option("--steps", ba.steps)->check(CLI::PositiveNumber);
  bench->add_option("--warmup", ba.warmup)->check(CLI::NonNegativeNumber);
  bench->add_option("--substeps", ba.substeps, "override dynamic-lite substeps")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--robot", ba.robot)->check(CLI::IsMember({"a1", "aliengo", "spot"}));
  bench->add_option("--out", ba.out);
  bench->callback([&] { cmd_bench(ba); });

  FitNoiseArgs fa;
  auto* fit = app.add_subcommand("fit-noise", "Fit a Gaussian actuation-noise model");
  fit->add_option("--log", fa.log)->required()->check(CLI::ExistingFile);
  fit->add_option("--mode", fa.mode)->check(CLI::IsMember({"coupled", "decoupled"}));
  fit->add_option("--units", fa.units, "angular units of the output")
      ->check(CLI::IsMember({"deg", "rad"}));
  fit->add_option("--out", fa.out);
  fit->callback([&] { cmd_fit_noise(fa); });

  SynthNoiseArgs sa;
  auto* synth = app.add_subcommand("synth-noise-log", "Sample a command/measurement log");
  synth->add_option("--model", sa.model)->required()->check(CLI::ExistingFile);
  synth->add_option("--mode", sa.mode)->check(CLI::IsMember({"coupled", "decoupled"}));
  synth->add_option("--n", sa.n);
  synth->add_option("--seed", sa.seed);
  synth->add_option("--out", sa.out);
  synth->callback([&] { cmd_synth_noise(sa); });

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Render trajectories over a map as SVG");
  plot->add_option("--map", pa.map)->required()->check(CLI::ExistingFile);
  plot->add_option("--traj", pa.traj)->check(CLI::ExistingFile);
  plot->add_option("--scale", pa.scale, "pixels per metre")->check(CLI::PositiveNumber);
  plot->add_option("--out", pa.out);
  plot->callback([&] { cmd_plot(pa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
