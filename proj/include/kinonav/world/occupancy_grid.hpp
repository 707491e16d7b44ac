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

#ifndef KINONAV_WORLD_OCCUPANCY_GRID_HPP_
#define KINONAV_WORLD_OCCUPANCY_GRID_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinonav/common.hpp"

namespace kinonav::world {

struct Cell {
  int i = 0;  // column, grows with x
  int j = 0;  // row, grows with y
  friend constexpr bool operator==(Cell, Cell) = default;
};

/// Static 2D occupancy map. Cell (i, j) covers
/// [origin.x + i*cs, origin.x + (i+1)*cs] x [origin.y + j*cs, origin.y + (j+1)*cs].
/// Everything outside the grid rectangle counts as occupied, so the world is
/// closed. Immutable after construction.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double cell_size, std::vector<std::uint8_t> cells,
                Vec2 origin = {})
      : width_(width), height_(height), cell_size_(cell_size), origin_(origin),
        cells_(std::move(cells)) {
    if (width < 1 || height < 1) throw InvalidArgument("grid must be at least 1x1");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
      throw InvalidArgument("cell_size must be positive");
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw InvalidArgument("cell array size does not match grid dimensions");
  }

  /// All-free grid.
  OccupancyGrid(int width, int height, double cell_size, Vec2 origin = {})
      : OccupancyGrid(width, height, cell_size,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                                static_cast<std::size_t>(std::max(height, 0))),
                      origin) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double cell_size() const noexcept { return cell_size_; }
  Vec2 origin() const noexcept { return origin_; }
  double extent_x() const noexcept { return width_ * cell_size_; }
  double extent_y() const noexcept { return height_ * cell_size_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  bool contains(Cell c) const noexcept {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.i);
  }
  Cell cell_at(std::size_t idx) const noexcept {
    return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
            static_cast<int>(idx / static_cast<std::size_t>(width_))};
  }

  /// Out-of-grid cells report occupied.
  bool occupied(Cell c) const noexcept { return !contains(c) || cells_[index(c)] != 0; }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

  bool in_bounds(Vec2 p) const noexcept {
    const double lx = p.x - origin_.x;
    const double ly = p.y - origin_.y;
    return lx >= 0.0 && ly >= 0.0 && lx <= extent_x() && ly <= extent_y();
  }

  /// Cell containing p. Points on a shared edge belong to the higher cell;
  /// points on the far grid edge are clamped into the last row/column.
  Cell cell_of(Vec2 p) const noexcept {
    int i = static_cast<int>(std::floor((p.x - origin_.x) / cell_size_));
    int j = static_cast<int>(std::floor((p.y - origin_.y) / cell_size_));
    if (i == width_ && p.x - origin_.x <= extent_x()) i = width_ - 1;
    if (j == height_ && p.y - origin_.y <= extent_y()) j = height_ - 1;
    return {i, j};
  }

  Vec2 center(Cell c) const noexcept {
    return {origin_.x + (c.i + 0.5) * cell_size_, origin_.y + (c.j + 0.5) * cell_size_};
  }

  /// Euclidean distance from p to the closed rectangle of cell c.
  double distance_to_cell(Vec2 p, Cell c) const noexcept {
    const double x0 = origin_.x + c.i * cell_size_;
    const double y0 = origin_.y + c.j * cell_size_;
    const double gx = std::max({0.0, x0 - p.x, p.x - (x0 + cell_size_)});
    const double gy = std::max({0.0, y0 - p.y, p.y - (y0 + cell_size_)});
    return std::hypot(gx, gy);
  }

  /// Distance from an in-bounds point to the closed outside region.
  double distance_to_boundary(Vec2 p) const noexcept {
    const double lx = p.x - origin_.x;
    const double ly = p.y - origin_.y;
    return std::max(0.0, std::min({lx, extent_x() - lx, ly, extent_y() - ly}));
  }

 private:
  int width_;
  int height_;
  double cell_size_;
  Vec2 origin_;
  std::vector<std::uint8_t> cells_;
};

// ---------------------------------------------------------------------------
// Map documents

/// Parses the line-oriented map format:
///
///     cell_size 0.5
///     ..
///     .#
///
/// `#` is occupied, `.` is free; the first row is j = 0.
inline OccupancyGrid load_world(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      std::string line(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    // A terminating newline does not open a new row.
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw ParseError(1, "missing header");

  double cell_size = 0.0;
  {
    std::istringstream hs(lines[0]);
    std::string key, extra;
    if (!(hs >> key) || key != "cell_size" || !(hs >> cell_size) || (hs >> extra))
      throw ParseError(1, "missing or invalid header");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
      throw ParseError(1, "cell_size must be positive");
  }
  if (lines.size() < 2) throw ParseError(2, "zero-area map");

  const std::size_t width = lines[1].size();
  if (width == 0) throw ParseError(2, "zero-area map");
  const std::size_t height = lines.size() - 1;
  std::vector<std::uint8_t> cells;
  cells.reserve(width * height);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string& row = lines[r];
    if (row.size() != width) throw ParseError(r + 1, "ragged row");
    for (char ch : row) {
      if (ch == '#') {
        cells.push_back(1);
      } else if (ch == '.') {
        cells.push_back(0);
      } else {
        throw ParseError(r + 1, std::string("unknown character '") + ch + "'");
      }
    }
  }
  return OccupancyGrid(static_cast<int>(width), static_cast<int>(height), cell_size,
                       std::move(cells));
}

/// Canonical form: header, then one row per line, each `\n`-terminated.
inline std::string save_world(const OccupancyGrid& grid) {
  std::string out = "cell_size " + fmt_shortest(grid.cell_size()) + "\n";
  out.reserve(out.size() + grid.cell_count() + static_cast<std::size_t>(grid.height()));
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) out.push_back(grid.occupied({i, j}) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geometric queries

/// Distance from p to the nearest occupied cell or the outside region.
inline double clearance(const OccupancyGrid& grid, Vec2 p) {
  if (!grid.in_bounds(p)) throw OutOfBounds("clearance query outside grid bounds");
  double best = grid.distance_to_boundary(p);
  const Cell c = grid.cell_of(p);
  const double cs = grid.cell_size();
  const int max_ring = std::max(grid.width(), grid.height());
  // A cell k rings away is at least (k - 1) cells from any point of c.
  for (int k = 0; k <= max_ring && (k - 1) * cs < best; ++k) {
    for (int dj = -k; dj <= k; ++dj) {
      const bool edge_row = (dj == -k || dj == k);
      for (int di = -k; di <= k; di += (edge_row ? 1 : 2 * k)) {
        const Cell n{c.i + di, c.j + dj};
        if (grid.contains(n) && grid.occupied(n))
          best = std::min(best, grid.distance_to_cell(p, n));
        if (k == 0) break;
      }
    }
  }
  return best;
}

/// True when a disc of `radius` centred at p overlaps an occupied cell or the
/// outside region. Touching counts as free.
inline bool disc_overlaps(const OccupancyGrid& grid, Vec2 p, double radius) {
  if (!grid.in_bounds(p)) return true;
  if (grid.distance_to_boundary(p) < radius) return true;
  const double cs = grid.cell_size();
  const Vec2 o = grid.origin();
  const int i0 = std::max(0, static_cast<int>(std::floor((p.x - radius - o.x) / cs)));
  const int i1 = std::min(grid.width() - 1, static_cast<int>(std::floor((p.x + radius - o.x) / cs)));
  const int j0 = std::max(0, static_cast<int>(std::floor((p.y - radius - o.y) / cs)));
  const int j1 = std::min(grid.height() - 1, static_cast<int>(std::floor((p.y + radius - o.y) / cs)));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (grid.occupied({i, j}) && grid.distance_to_cell(p, {i, j}) < radius) return true;
  return false;
}

/// Depth by which a disc at p intrudes into the nearest obstacle
/// (radius - clearance), or 0 when it does not overlap.
inline double disc_penetration(const OccupancyGrid& grid, Vec2 p, double radius) {
  if (!grid.in_bounds(p)) return radius;
  return std::max(0.0, radius - clearance(grid, p));
}

namespace detail {

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

// Liang-Barsky test of segment ab against the closed box [lo, hi].
inline bool segment_hits_box(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double d[2] = {b.x - a.x, b.y - a.y};
  const double s[2] = {a.x, a.y};
  const double l[2] = {lo.x, lo.y};
  const double h[2] = {hi.x, hi.y};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (s[k] < l[k] || s[k] > h[k]) return false;
      continue;
    }
    double ta = (l[k] - s[k]) / d[k];
    double tb = (h[k] - s[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace detail

/// Distance between segment ab and the rectangle of cell c.
inline double segment_cell_distance(const OccupancyGrid& grid, Vec2 a, Vec2 b, Cell c) {
  const double cs = grid.cell_size();
  const Vec2 lo{grid.origin().x + c.i * cs, grid.origin().y + c.j * cs};
  const Vec2 hi{lo.x + cs, lo.y + cs};
  if (detail::segment_hits_box(a, b, lo, hi)) return 0.0;
  double best = std::min(grid.distance_to_cell(a, c), grid.distance_to_cell(b, c));
  for (Vec2 corner : {lo, hi, Vec2{lo.x, hi.y}, Vec2{hi.x, lo.y}})
    best = std::min(best, detail::point_segment_distance(corner, a, b));
  return best;
}

/// Swept-disc test: true when a disc moving along ab overlaps any obstacle.
inline bool segment_overlaps(const OccupancyGrid& grid, Vec2 a, Vec2 b, double radius) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b)) return true;
  // The outside region is a union of half-planes; the minimum over a segment
  // is at an endpoint.
  if (std::min(grid.distance_to_boundary(a), grid.distance_to_boundary(b)) < radius) return true;
  const double cs = grid.cell_size();
  const Vec2 o = grid.origin();
  const int i0 = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - radius - o.x) / cs)));
  const int i1 = std::min(grid.width() - 1,
                          static_cast<int>(std::floor((std::max(a.x, b.x) + radius - o.x) / cs)));
  const int j0 = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - radius - o.y) / cs)));
  const int j1 = std::min(grid.height() - 1,
                          static_cast<int>(std::floor((std::max(a.y, b.y) + radius - o.y) / cs)));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (grid.occupied({i, j}) && segment_cell_distance(grid, a, b, {i, j}) < radius) return true;
  return false;
}

/// Distance along a ray to the first occupied-cell boundary (or the grid
/// edge), capped at max_range. Exact cell traversal; a ray that grazes a
/// cell corner stops there if any cell meeting at that corner is occupied.
inline double raycast(const OccupancyGrid& grid, Vec2 origin, double angle, double max_range) {
  if (!(max_range > 0.0)) return 0.0;
  if (!grid.in_bounds(origin)) return 0.0;
  Cell c = grid.cell_of(origin);
  if (grid.occupied(c)) return 0.0;

  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double cs = grid.cell_size();
  const Vec2 o = grid.origin();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const int step_i = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_j = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  double t_max_x = kInf;
  double t_max_y = kInf;
  if (step_i > 0) t_max_x = (o.x + (c.i + 1) * cs - origin.x) / dx;
  if (step_i < 0) t_max_x = (origin.x - (o.x + c.i * cs)) / -dx;
  if (step_j > 0) t_max_y = (o.y + (c.j + 1) * cs - origin.y) / dy;
  if (step_j < 0) t_max_y = (origin.y - (o.y + c.j * cs)) / -dy;
  const double t_delta_x = step_i != 0 ? cs / std::abs(dx) : kInf;
  const double t_delta_y = step_j != 0 ? cs / std::abs(dy) : kInf;

  while (true) {
    const double t = std::min(t_max_x, t_max_y);
    if (t >= max_range) return max_range;
    if (t_max_x == t_max_y) {
      const Cell nx{c.i + step_i, c.j};
      const Cell ny{c.i, c.j + step_j};
      const Cell nd{c.i + step_i, c.j + step_j};
      if (grid.occupied(nx) || grid.occupied(ny) || grid.occupied(nd)) return t;
      c = nd;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      c.i += step_i;
      if (grid.occupied(c)) return t;
      t_max_x += t_delta_x;
    } else {
      c.j += step_j;
      if (grid.occupied(c)) return t;
      t_max_y += t_delta_y;
    }
  }
}

}  // namespace kinonav::world

#endif  // KINONAV_WORLD_OCCUPANCY_GRID_HPP_
