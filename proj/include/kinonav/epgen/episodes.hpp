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

// Episode datasets: rejection sampling of (start, goal, heading) triples and
// JSON-lines persistence.

#ifndef KINONAV_EPGEN_EPISODES_HPP_
#define KINONAV_EPGEN_EPISODES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kinonav/common.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/task/metrics.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::epgen {

inline constexpr double kMinGeodesic = 1.0;   // m
inline constexpr double kMaxGeodesic = 30.0;  // m
inline constexpr double kDefaultRatioMin = 1.1;

enum class Verdict {
  accept,
  start_blocked,
  goal_blocked,
  unreachable,
  too_short,
  too_long,
  near_straight,
  path_blocked,
};
inline constexpr std::size_t kVerdictCount = 8;

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::start_blocked: return "start_blocked";
    case Verdict::goal_blocked: return "goal_blocked";
    case Verdict::unreachable: return "unreachable";
    case Verdict::too_short: return "too_short";
    case Verdict::too_long: return "too_long";
    case Verdict::near_straight: return "near_straight";
    case Verdict::path_blocked: return "path_blocked";
  }
  return "?";
}

struct Validation {
  Verdict verdict = Verdict::accept;
  double geodesic = world::kUnreachable;
  double euclidean = 0.0;
  double ratio = 0.0;

  bool accepted() const noexcept { return verdict == Verdict::accept; }
};

/// Re-walks the shortest grid path from start to goal and checks that the
/// swept footprint never touches an obstacle.
inline bool path_is_clear(const world::OccupancyGrid& grid, const world::DistanceField& field,
                          Vec2 start, double radius) {
  const auto cells = field.path_from(field.cell_of(start));
  if (cells.empty() || !(cells.back() == field.goal_cell())) return false;
  Vec2 prev = start;
  for (const world::Cell& c : cells) {
    const Vec2 next = field.anchor(c);
    if (world::segment_overlaps(grid, prev, next, radius)) return false;
    prev = next;
  }
  return true;
}

/// Checks with an already-built field for `goal` (inflated by the
/// reference robot's footprint).
inline Validation validate_episode(const world::OccupancyGrid& grid,
                                   const world::DistanceField& field, Vec2 start,
                                   const sim::RobotSpec& largest, double ratio_min) {
  Validation v;
  const Vec2 goal = field.goal();
  v.euclidean = distance(start, goal);
  if (sim::in_collision(grid, start, largest)) {
    v.verdict = Verdict::start_blocked;
    return v;
  }
  if (sim::in_collision(grid, goal, largest)) {
    v.verdict = Verdict::goal_blocked;
    return v;
  }
  v.geodesic = field.geodesic(start);
  if (v.geodesic == world::kUnreachable) {
    v.verdict = Verdict::unreachable;
    return v;
  }
  v.ratio = v.euclidean > 0.0 ? v.geodesic / v.euclidean : world::kUnreachable;
  if (v.geodesic < kMinGeodesic) {
    v.verdict = Verdict::too_short;
  } else if (v.geodesic > kMaxGeodesic) {
    v.verdict = Verdict::too_long;
  } else if (v.ratio < ratio_min) {
    v.verdict = Verdict::near_straight;
  } else if (!path_is_clear(grid, field, start, largest.footprint_radius)) {
    v.verdict = Verdict::path_blocked;
  }
  return v;
}

inline Validation validate_episode(const world::OccupancyGrid& grid, Vec2 start, Vec2 goal,
                                   const sim::RobotSpec& largest, double ratio_min) {
  world::DistanceField field;
  try {
    field = world::distance_field(grid, goal, largest.footprint_radius);
  } catch (const InvalidGoal&) {
    Validation v;
    v.verdict = Verdict::goal_blocked;
    v.euclidean = distance(start, goal);
    return v;
  }
  return validate_episode(grid, field, start, largest, ratio_min);
}

struct EpisodeDataset {
  std::string scene_id;
  std::string spec_name;  // reference robot used for validation
  std::uint64_t seed = 0;
  double ratio_min = kDefaultRatioMin;
  std::vector<task::Episode> episodes;
};

class GenerationFailure : public Error {
 public:
  GenerationFailure(const std::string& what, std::array<std::size_t, kVerdictCount> counts)
      : Error(what), counts_(counts) {}
  const std::array<std::size_t, kVerdictCount>& verdict_counts() const noexcept { return counts_; }

 private:
  std::array<std::size_t, kVerdictCount> counts_;
};

struct SampleOptions {
  double ratio_min = kDefaultRatioMin;
  std::size_t max_attempts = 0;  // 0: 1000 per requested episode
  std::string scene_id = "scene";
};

/// Samples start and goal uniformly over the centres of cells that are
/// free for the reference robot, heading uniform in (-pi, pi], and keeps
/// the first n triples that validate. Fully determined by (grid, n, seed).
/// Stored floats are rounded to six significant digits so a dataset read
/// back from disk is the dataset that was generated.
inline EpisodeDataset sample_episodes(const world::OccupancyGrid& grid, std::size_t n,
                                      std::uint64_t seed, const sim::RobotSpec& largest,
                                      const SampleOptions& opt = {}) {
  EpisodeDataset ds;
  ds.scene_id = opt.scene_id;
  ds.spec_name = largest.name;
  ds.seed = seed;
  ds.ratio_min = opt.ratio_min;
  if (n == 0) return ds;

  const auto free_mask = world::inflate(grid, largest.footprint_radius);
  std::vector<world::Cell> free_cells;
  for (std::size_t idx = 0; idx < free_mask.size(); ++idx)
    if (free_mask[idx]) free_cells.push_back(grid.cell_at(idx));
  if (free_cells.size() < 2)
    throw GenerationFailure("map has fewer than 2 free cells for robot " + largest.name, {});

  const std::size_t budget = opt.max_attempts ? opt.max_attempts : 1000 * n;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  std::array<std::size_t, kVerdictCount> counts{};
  auto round6 = [](double v) { return std::strtod(fmt6(v).c_str(), nullptr); };

  for (std::size_t attempt = 0; attempt < budget && ds.episodes.size() < n; ++attempt) {
    const world::Cell sc = free_cells[pick(rng)];
    const world::Cell gc = free_cells[pick(rng)];
    const double theta = normalize_angle(heading(rng));
    const Vec2 start{round6(grid.center(sc).x), round6(grid.center(sc).y)};
    const Vec2 goal{round6(grid.center(gc).x), round6(grid.center(gc).y)};
    if (distance(start, goal) > kMaxGeodesic) {
      ++counts[static_cast<std::size_t>(Verdict::too_long)];
      continue;
    }
    const Validation v = validate_episode(grid, start, goal, largest, opt.ratio_min);
    ++counts[static_cast<std::size_t>(v.verdict)];
    if (!v.accepted()) continue;
    task::Episode ep;
    ep.episode_id = static_cast<std::int64_t>(ds.episodes.size());
    ep.scene_id = ds.scene_id;
    ep.start = {start.x, start.y, round6(theta)};
    ep.goal = goal;
    ep.geodesic_distance = round6(v.geodesic);
    ds.episodes.push_back(std::move(ep));
  }

  if (ds.episodes.size() < n) {
    std::ostringstream msg;
    std::size_t total = 0;
    for (auto c : counts) total += c;
    msg << "episode generation exhausted " << budget << " attempts with " << ds.episodes.size()
        << "/" << n << " accepted (acceptance rate "
        << fmt6(total ? static_cast<double>(counts[0]) / static_cast<double>(total) : 0.0)
        << ");";
    for (std::size_t k = 1; k < kVerdictCount; ++k)
      msg << " " << to_string(static_cast<Verdict>(k)) << "=" << counts[k];
    throw GenerationFailure(msg.str(), counts);
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Persistence: one JSON object per line; the first line is the header.

inline constexpr std::string_view kDatasetFormat = "kinonav-episodes/1";

inline std::string write_dataset(const EpisodeDataset& ds) {
  using nlohmann::ordered_json;
  auto r6 = [](double v) { return std::strtod(fmt6(v).c_str(), nullptr); };
  std::string out;
  ordered_json header = {{"format", kDatasetFormat},
                         {"scene_id", ds.scene_id},
                         {"seed", ds.seed},
                         {"ratio_min", r6(ds.ratio_min)},
                         {"spec", ds.spec_name},
                         {"count", ds.episodes.size()}};
  out += header.dump() + "\n";
  for (const task::Episode& e : ds.episodes) {
    ordered_json rec = {{"episode_id", e.episode_id},
                        {"scene_id", e.scene_id},
                        {"start", {r6(e.start.x), r6(e.start.y)}},
                        {"start_heading", r6(e.start.theta)},
                        {"goal", {r6(e.goal.x), r6(e.goal.y)}},
                        {"geodesic_distance", r6(e.geodesic_distance)}};
    out += rec.dump() + "\n";
  }
  return out;
}

inline EpisodeDataset read_dataset(std::string_view text) {
  using nlohmann::json;
  EpisodeDataset ds;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  std::size_t expected = 0;
  auto pair_of = [](const json& j, const char* key) -> Vec2 {
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string(key));
    return {v.at(0).get<double>(), v.at(1).get<double>()};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(lineno, std::string("malformed record: ") + e.what());
    }
    try {
      if (!saw_header) {
        if (j.at("format").get<std::string>() != kDatasetFormat)
          throw ParseError(lineno, "unsupported dataset format");
        ds.scene_id = j.at("scene_id").get<std::string>();
        ds.seed = j.at("seed").get<std::uint64_t>();
        ds.ratio_min = j.at("ratio_min").get<double>();
        ds.spec_name = j.at("spec").get<std::string>();
        expected = j.at("count").get<std::size_t>();
        saw_header = true;
        continue;
      }
      task::Episode e;
      e.episode_id = j.at("episode_id").get<std::int64_t>();
      e.scene_id = j.at("scene_id").get<std::string>();
      const Vec2 s = pair_of(j, "start");
      e.start = {s.x, s.y, j.at("start_heading").get<double>()};
      e.goal = pair_of(j, "goal");
      e.geodesic_distance = j.at("geodesic_distance").get<double>();
      if (e.episode_id != static_cast<std::int64_t>(ds.episodes.size()))
        throw ParseError(lineno, "episode ids must be dense and start at 0");
      ds.episodes.push_back(std::move(e));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(lineno, std::string("missing or invalid field: ") + e.what());
    }
  }
  if (!saw_header) throw ParseError(lineno + 1, "missing dataset header");
  if (ds.episodes.size() != expected)
    throw ParseError(lineno + 1, "header declares " + std::to_string(expected) +
                                     " episodes, found " + std::to_string(ds.episodes.size()));
  return ds;
}

}  // namespace kinonav::epgen

#endif  // KINONAV_EPGEN_EPISODES_HPP_
