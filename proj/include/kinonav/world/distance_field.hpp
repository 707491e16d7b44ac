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

// Goal-anchored geodesic distance fields over a radius-inflated grid.
//
// A cell is traversable when a disc of robot_radius centred on the cell
// centre does not overlap any obstacle. Moves go to the 8 neighbours;
// straight moves cost cell_size and diagonal moves sqrt(2)*cell_size. A
// diagonal move is only legal when both cells it cuts past are traversable,
// which keeps every move's swept disc collision-free.

#ifndef KINONAV_WORLD_DISTANCE_FIELD_HPP_
#define KINONAV_WORLD_DISTANCE_FIELD_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::world {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct Move {
  int di;
  int dj;
  bool diagonal;
};

inline constexpr std::array<Move, 8> kMoves{{{1, 0, false},
                                            {-1, 0, false},
                                            {0, 1, false},
                                            {0, -1, false},
                                            {1, 1, true},
                                            {-1, 1, true},
                                            {1, -1, true},
                                            {-1, -1, true}}};

/// Traversability mask: cell centre clearance >= radius.
inline std::vector<std::uint8_t> inflate(const OccupancyGrid& grid, double radius) {
  std::vector<std::uint8_t> free(grid.cell_count(), 0);
  for (std::size_t idx = 0; idx < grid.cell_count(); ++idx) {
    const Cell c = grid.cell_at(idx);
    if (grid.occupied(c)) continue;
    free[idx] = disc_overlaps(grid, grid.center(c), radius) ? 0 : 1;
  }
  return free;
}

class DistanceField {
 public:
  Vec2 goal() const noexcept { return goal_; }
  Cell goal_cell() const noexcept { return goal_cell_; }
  double robot_radius() const noexcept { return robot_radius_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double cell_size() const noexcept { return cell_size_; }

  bool contains(Cell c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.i);
  }
  bool traversable(Cell c) const noexcept { return contains(c) && traversable_[index(c)] != 0; }

  /// Geodesic distance from the centre of c to the goal; +inf when
  /// unreachable or out of range.
  double value(Cell c) const noexcept {
    return contains(c) ? values_[index(c)] : kUnreachable;
  }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Reference point of a cell: its centre, except the goal cell whose
  /// reference is the goal itself.
  Vec2 anchor(Cell c) const noexcept {
    if (c == goal_cell_) return goal_;
    return {origin_.x + (c.i + 0.5) * cell_size_, origin_.y + (c.j + 0.5) * cell_size_};
  }

  Cell cell_of(Vec2 p) const noexcept {
    int i = static_cast<int>(std::floor((p.x - origin_.x) / cell_size_));
    int j = static_cast<int>(std::floor((p.y - origin_.y) / cell_size_));
    if (i == width_) i = width_ - 1;
    if (j == height_) j = height_ - 1;
    return {i, j};
  }

  /// True when the move from c by m is legal (both ends traversable, and no
  /// corner cutting on diagonals).
  bool legal(Cell c, Move m) const noexcept {
    const Cell n{c.i + m.di, c.j + m.dj};
    if (!traversable(c) || !traversable(n)) return false;
    if (!m.diagonal) return true;
    return traversable({c.i + m.di, c.j}) && traversable({c.i, c.j + m.dj});
  }

  double move_cost(Move m) const noexcept {
    return m.diagonal ? std::sqrt(2.0) * cell_size_ : cell_size_;
  }

  struct Lookup {
    double distance = kUnreachable;
    Cell via{};  // cell whose anchor realises the minimum
  };

  /// Continuous geodesic estimate at an arbitrary point: the best
  /// |p - anchor(n)| + value(n) over the containing cell and its neighbours.
  /// Diagonal neighbours only count when both cells they cut past are
  /// traversable.
  Lookup lookup(Vec2 p) const noexcept {
    Lookup best;
    const Cell c = cell_of(p);
    if (!contains(c)) return best;
    auto consider = [&](Cell n) {
      const double v = value(n);
      if (v == kUnreachable) return;
      const double d = distance(p, anchor(n)) + v;
      if (d < best.distance) best = {d, n};
    };
    consider(c);
    for (const Move& m : kMoves) {
      const Cell n{c.i + m.di, c.j + m.dj};
      if (m.diagonal &&
          !(traversable({c.i + m.di, c.j}) && traversable({c.i, c.j + m.dj})))
        continue;
      consider(n);
    }
    return best;
  }

  double geodesic(Vec2 p) const noexcept { return lookup(p).distance; }

  /// Like lookup(), but when no neighbouring anchor is reachable it widens
  /// the search ring by ring (ignoring move legality). Positions reached by
  /// sliding into narrow spots still get a finite estimate this way.
  Lookup lookup_wide(Vec2 p) const noexcept {
    Lookup best = lookup(p);
    if (best.distance != kUnreachable) return best;
    const Cell c = cell_of(p);
    const int max_ring = std::max(width_, height_);
    for (int k = 2; k <= max_ring && best.distance == kUnreachable; ++k) {
      for (int dj = -k; dj <= k; ++dj) {
        const bool edge_row = (dj == -k || dj == k);
        for (int di = -k; di <= k; di += (edge_row ? 1 : 2 * k)) {
          const Cell n{c.i + di, c.j + dj};
          const double v = value(n);
          if (v == kUnreachable) continue;
          const double d = distance(p, anchor(n)) + v;
          if (d < best.distance) best = {d, n};
        }
      }
    }
    return best;
  }

  /// Next cell on a shortest path from c toward the goal, or nothing at the
  /// goal cell or when c is unreachable.
  std::optional<Cell> descend(Cell c) const noexcept {
    const double v = value(c);
    if (v == kUnreachable || c == goal_cell_) return std::nullopt;
    std::optional<Cell> best;
    double best_v = v;
    for (const Move& m : kMoves) {
      if (!legal(c, m)) continue;
      const Cell n{c.i + m.di, c.j + m.dj};
      const double through = value(n) + move_cost(m);
      if (through <= best_v + 1e-9 * (1.0 + v) && (!best || value(n) < value(*best))) {
        best = n;
      }
    }
    return best;
  }

  /// Cell sequence of a shortest path from c to the goal cell, inclusive.
  /// Empty when c is unreachable.
  std::vector<Cell> path_from(Cell c) const {
    std::vector<Cell> path;
    if (value(c) == kUnreachable) return path;
    path.push_back(c);
    while (!(path.back() == goal_cell_)) {
      auto next = descend(path.back());
      if (!next) break;
      path.push_back(*next);
    }
    return path;
  }

 private:
  friend DistanceField distance_field(const OccupancyGrid&, Vec2, double);

  int width_ = 0;
  int height_ = 0;
  double cell_size_ = 1.0;
  Vec2 origin_{};
  Vec2 goal_{};
  Cell goal_cell_{};
  double robot_radius_ = 0.0;
  std::vector<std::uint8_t> traversable_;
  std::vector<double> values_;
};

/// 8-connected Dijkstra from the goal over the grid inflated by
/// robot_radius. Throws InvalidGoal when the goal cell is occupied or
/// inflated.
inline DistanceField distance_field(const OccupancyGrid& grid, Vec2 goal, double robot_radius) {
  if (!(robot_radius >= 0.0)) throw InvalidArgument("robot_radius must be non-negative");
  if (!grid.in_bounds(goal)) throw InvalidGoal("goal outside grid bounds");

  DistanceField f;
  f.width_ = grid.width();
  f.height_ = grid.height();
  f.cell_size_ = grid.cell_size();
  f.origin_ = grid.origin();
  f.goal_ = goal;
  f.goal_cell_ = grid.cell_of(goal);
  f.robot_radius_ = robot_radius;
  f.traversable_ = inflate(grid, robot_radius);
  f.values_.assign(grid.cell_count(), kUnreachable);

  if (!f.traversable(f.goal_cell_))
    throw InvalidGoal("goal lies inside an obstacle or its inflation zone");

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const std::size_t g = f.index(f.goal_cell_);
  f.values_[g] = 0.0;
  open.emplace(0.0, g);
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (d > f.values_[idx]) continue;
    const Cell c = grid.cell_at(idx);
    for (const Move& m : kMoves) {
      if (!f.legal(c, m)) continue;
      const std::size_t n = f.index({c.i + m.di, c.j + m.dj});
      const double nd = d + f.move_cost(m);
      if (nd < f.values_[n]) {
        f.values_[n] = nd;
        open.emplace(nd, n);
      }
    }
  }
  return f;
}

}  // namespace kinonav::world

#endif  // KINONAV_WORLD_DISTANCE_FIELD_HPP_
