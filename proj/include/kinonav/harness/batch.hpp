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

// Batch evaluation over (episode x seed). Every source of randomness is
// keyed by (base seed, episode id, purpose), each worker owns its
// environment for a whole episode, and results land in a slot fixed by
// their index, so output does not depend on the worker count.

#ifndef KINONAV_HARNESS_BATCH_HPP_
#define KINONAV_HARNESS_BATCH_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "kinonav/agents/agents.hpp"
#include "kinonav/common.hpp"
#include "kinonav/epgen/episodes.hpp"
#include "kinonav/sim/dynamic_lite.hpp"
#include "kinonav/sim/noise.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/task/environment.hpp"
#include "kinonav/task/metrics.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::harness {

struct EvalConfig {
  std::string label = "kinematic";        // evaluation condition
  std::string train_label = "kinematic";  // condition the agent was built/tuned for
  std::string agent_name = "oracle";
  sim::RobotSpec robot = sim::spot();
  task::EnvConfig env;
  std::string noise_name = "none";
  std::vector<std::uint64_t> seeds{0, 1, 2};
  int workers = 1;
};

/// Parses the backend names accepted on the command line.
inline void set_backend(EvalConfig& cfg, std::string_view backend) {
  if (backend == "kinematic") {
    cfg.env.backend = task::BackendKind::kinematic;
  } else if (backend == "dynlite-a") {
    cfg.env.backend = task::BackendKind::dynamic_lite;
    cfg.env.dynamic = sim::profile_a();
  } else if (backend == "dynlite-b") {
    cfg.env.backend = task::BackendKind::dynamic_lite;
    cfg.env.dynamic = sim::profile_b();
  } else {
    throw InvalidArgument("unknown backend '" + std::string(backend) + "'");
  }
  cfg.label = std::string(backend);
}

struct Aggregate {
  bool defined = false;  // false when nothing was run
  std::size_t runs = 0;
  double success_rate = 0.0;  // fraction in [0, 1]
  double spl = 0.0;
  double mean_actions = 0.0;
  double mean_collisions = 0.0;
};

struct BatchResult {
  EvalConfig config;
  std::uint64_t dataset_hash = 0;
  std::size_t episode_count = 0;
  std::vector<task::EpisodeResult> results;  // ordered by (episode, seed)
  Aggregate aggregate;
};

inline Aggregate aggregate(const std::vector<task::EpisodeResult>& results) {
  Aggregate a;
  a.runs = results.size();
  if (results.empty()) return a;
  a.defined = true;
  std::size_t successes = 0;
  for (const auto& r : results) {
    successes += r.success ? 1 : 0;
    a.spl += r.spl;
    a.mean_actions += r.num_actions;
    a.mean_collisions += r.num_collisions;
  }
  const double n = static_cast<double>(results.size());
  a.success_rate = static_cast<double>(successes) / n;
  a.spl /= n;
  a.mean_actions /= n;
  a.mean_collisions /= n;
  return a;
}

inline std::uint64_t hash_text(std::string_view text) { return tag_hash(text); }

/// Runs one episode to termination with a fresh policy instance.
inline task::EpisodeResult run_episode(task::Environment& env, const task::Episode& episode,
                                       std::shared_ptr<const world::DistanceField> field,
                                       agents::Policy& policy, std::uint64_t base_seed) {
  const auto id = static_cast<std::uint64_t>(episode.episode_id);
  task::Observation obs = env.reset(episode, derive_seed(base_seed, id, "actuation-noise"), field);
  agents::Briefing b;
  b.goal = episode.goal;
  b.start_heading = episode.start.theta;
  b.spec = env.spec();
  b.dt = env.config().dt;
  b.seed = derive_seed(base_seed, id, "agent");
  b.grid = std::shared_ptr<const world::OccupancyGrid>(std::shared_ptr<void>(), &env.grid());
  b.field = env.shared_field();
  agents::Memory memory = policy.initial_memory(b);
  while (!env.done()) {
    auto [action, next_memory] = policy.act(obs, std::move(memory));
    memory = std::move(next_memory);
    obs = env.step(action.cmd, action.stop).observation;
  }
  return env.take_result();
}

/// Evaluates every (episode, seed) pair. Throws on the first (lowest-index)
/// failure, naming the offending episode.
inline BatchResult run_batch(std::shared_ptr<const world::OccupancyGrid> grid,
                             const epgen::EpisodeDataset& dataset, const EvalConfig& config,
                             const agents::PolicyFactory& make_policy,
                             std::uint64_t dataset_hash = 0) {
  if (config.workers < 1) throw InvalidArgument("workers must be >= 1");
  BatchResult out;
  out.config = config;
  out.dataset_hash = dataset_hash;
  out.episode_count = dataset.episodes.size();
  const std::size_t n_ep = dataset.episodes.size();
  const std::size_t n_seed = config.seeds.size();
  out.results.resize(n_ep * n_seed);
  if (n_ep == 0 || n_seed == 0) {
    out.results.clear();
    out.aggregate = aggregate(out.results);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::optional<std::size_t> err_index;
  std::exception_ptr err;

  auto worker = [&] {
    task::Environment env(grid, config.robot, config.env);
    while (true) {
      const std::size_t e = next.fetch_add(1);
      if (e >= n_ep) return;
      const task::Episode& ep = dataset.episodes[e];
      try {
        std::shared_ptr<const world::DistanceField> field;
        try {
          field = std::make_shared<const world::DistanceField>(
              world::distance_field(*grid, ep.goal, config.robot.footprint_radius));
        } catch (const Error& ex) {
          throw InvalidArgument("episode " + std::to_string(ep.episode_id) + ": " + ex.what());
        }
        for (std::size_t s = 0; s < n_seed; ++s) {
          auto policy = make_policy();
          out.results[e * n_seed + s] = run_episode(env, ep, field, *policy, config.seeds[s]);
          out.results[e * n_seed + s].seed = config.seeds[s];
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err_index || e < *err_index) {
          err_index = e;
          err = std::current_exception();
        }
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::size_t>(config.workers, n_ep));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  out.aggregate = aggregate(out.results);
  return out;
}

// ---------------------------------------------------------------------------
// Result files

inline constexpr std::string_view kEpisodeResultsHeader =
    "episode_id,seed,success,spl,num_actions,num_collisions,path_length,total_reward,geodesic,"
    "termination";

inline std::string write_episode_results(const std::vector<task::EpisodeResult>& results) {
  std::string out(kEpisodeResultsHeader);
  out += "\n";
  for (const auto& r : results) {
    out += std::to_string(r.episode_id) + "," + std::to_string(r.seed) + "," +
           (r.success ? "1" : "0") + "," + fmt6(r.spl) + "," + std::to_string(r.num_actions) +
           "," + std::to_string(r.num_collisions) + "," + fmt6(r.path_length) + "," +
           fmt6(r.total_reward) + "," + fmt6(r.geodesic) + "," +
           std::string(task::to_string(r.termination)) + "\n";
  }
  return out;
}

inline std::vector<task::EpisodeResult> read_episode_results(std::string_view text) {
  std::vector<task::EpisodeResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kEpisodeResultsHeader) throw ParseError(lineno, "unexpected results header");
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 10) throw ParseError(lineno, "expected 10 fields");
    try {
      task::EpisodeResult r;
      r.episode_id = std::stoll(f[0]);
      r.seed = std::stoull(f[1]);
      r.success = f[2] == "1";
      r.spl = std::stod(f[3]);
      r.num_actions = std::stoi(f[4]);
      r.num_collisions = std::stoi(f[5]);
      r.path_length = std::stod(f[6]);
      r.total_reward = std::stod(f[7]);
      r.geodesic = std::stod(f[8]);
      r.termination = task::parse_termination(f[9]);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError(lineno, std::string("invalid field: ") + e.what());
    }
  }
  return out;
}

inline std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t k = 0; k < seeds.size(); ++k) s += (k ? "," : "") + std::to_string(seeds[k]);
  return s;
}

inline std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss{std::string(text)};
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw InvalidArgument("invalid seed '" + tok + "'");
    seeds.push_back(v);
  }
  return seeds;
}

/// Run summary: one `key value` pair per line, fixed key order.
struct RunSummary {
  std::string label;
  std::string train_label;
  std::string robot;
  std::string agent;
  std::string noise;
  std::uint64_t dataset_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t episodes = 0;
  Aggregate aggregate;
};

inline RunSummary summarize(const BatchResult& b) {
  return {b.config.label,
          b.config.train_label,
          b.config.robot.name,
          b.config.agent_name,
          b.config.noise_name,
          b.dataset_hash,
          b.config.seeds,
          b.episode_count,
          b.aggregate};
}

inline std::string write_summary(const RunSummary& s) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.dataset_hash));
  std::string out;
  out += "label " + s.label + "\n";
  out += "train_label " + s.train_label + "\n";
  out += "robot " + s.robot + "\n";
  out += "agent " + s.agent + "\n";
  out += "noise " + s.noise + "\n";
  out += std::string("dataset_hash ") + hash + "\n";
  out += "seeds " + join_seeds(s.seeds) + "\n";
  out += "episodes " + std::to_string(s.episodes) + "\n";
  out += "runs " + std::to_string(s.aggregate.runs) + "\n";
  if (s.aggregate.defined) {
    out += "success_rate " + fmt6(s.aggregate.success_rate) + "\n";
    out += "spl " + fmt6(s.aggregate.spl) + "\n";
    out += "mean_actions " + fmt6(s.aggregate.mean_actions) + "\n";
    out += "mean_collisions " + fmt6(s.aggregate.mean_collisions) + "\n";
  } else {
    for (const char* k : {"success_rate", "spl", "mean_actions", "mean_collisions"})
      out += std::string(k) + " undefined\n";
  }
  return out;
}

inline RunSummary read_summary(std::string_view text) {
  RunSummary s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_label = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    ls >> value;
    auto num = [&](double& dst) {
      if (value == "undefined") return;
      try {
        dst = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(lineno, "invalid number for " + key);
      }
      s.aggregate.defined = true;
    };
    try {
      if (key == "label") s.label = value, have_label = true;
      else if (key == "train_label") s.train_label = value;
      else if (key == "robot") s.robot = value;
      else if (key == "agent") s.agent = value;
      else if (key == "noise") s.noise = value;
      else if (key == "dataset_hash") s.dataset_hash = std::stoull(value, nullptr, 16);
      else if (key == "seeds") s.seeds = parse_seeds(value);
      else if (key == "episodes") s.episodes = std::stoull(value);
      else if (key == "runs") s.aggregate.runs = std::stoull(value);
      else if (key == "success_rate") num(s.aggregate.success_rate);
      else if (key == "spl") num(s.aggregate.spl);
      else if (key == "mean_actions") num(s.aggregate.mean_actions);
      else if (key == "mean_collisions") num(s.aggregate.mean_collisions);
      else throw ParseError(lineno, "unknown key '" + key + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineno, "invalid value for " + key + ": " + e.what());
    }
  }
  if (!have_label) throw ParseError(lineno + 1, "summary missing label");
  return s;
}

}  // namespace kinonav::harness

#endif  // KINONAV_HARNESS_BATCH_HPP_
