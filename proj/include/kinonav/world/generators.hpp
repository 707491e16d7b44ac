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

// Procedural maps for fixtures, benchmarks and the CLI.

#ifndef KINONAV_WORLD_GENERATORS_HPP_
#define KINONAV_WORLD_GENERATORS_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::world {

/// Independent Bernoulli obstacles.
inline OccupancyGrid random_grid(int width, int height, double cell_size, double density,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution occ(density);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) *
                                  static_cast<std::size_t>(height));
  for (auto& c : cells) c = occ(rng) ? 1 : 0;
  return OccupancyGrid(width, height, cell_size, std::move(cells));
}

struct MazeOptions {
  int corridor_cells = 5;     // corridor width in grid cells
  int wall_cells = 1;         // wall thickness in grid cells
  double loop_fraction = 0.15;  // share of remaining walls knocked out to add loops
};

/// Recursive-backtracker maze with extra openings, rasterised onto a
/// width x height grid. Cells that do not fit a whole maze unit are walls.
inline OccupancyGrid maze_grid(int width, int height, double cell_size, std::uint64_t seed,
                               MazeOptions opt = {}) {
  const int unit = opt.corridor_cells + opt.wall_cells;
  const int mw = std::max(1, (width - opt.wall_cells) / unit);
  const int mh = std::max(1, (height - opt.wall_cells) / unit);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) *
                                      static_cast<std::size_t>(height),
                                  1);
  auto set_free = [&](int i0, int j0, int w, int h) {
    for (int j = j0; j < std::min(height, j0 + h); ++j)
      for (int i = i0; i < std::min(width, i0 + w); ++i)
        cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(i)] = 0;
  };
  auto room_x = [&](int mx) { return opt.wall_cells + mx * unit; };
  auto room_y = [&](int my) { return opt.wall_cells + my * unit; };

  for (int my = 0; my < mh; ++my)
    for (int mx = 0; mx < mw; ++mx)
      set_free(room_x(mx), room_y(my), opt.corridor_cells, opt.corridor_cells);

  // Openings: east[mx,my] joins (mx,my)-(mx+1,my); south joins (mx,my)-(mx,my+1).
  std::vector<std::uint8_t> east(static_cast<std::size_t>(mw * mh), 0);
  std::vector<std::uint8_t> south(static_cast<std::size_t>(mw * mh), 0);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(mw * mh), 0);
  std::mt19937_64 rng(seed);

  std::vector<std::pair<int, int>> stack{{0, 0}};
  seen[0] = 1;
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    std::vector<std::pair<int, int>> next;
    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : dirs) {
      const int nx = x + d[0];
      const int ny = y + d[1];
      if (nx < 0 || ny < 0 || nx >= mw || ny >= mh) continue;
      if (!seen[static_cast<std::size_t>(ny * mw + nx)]) next.emplace_back(nx, ny);
    }
    if (next.empty()) {
      stack.pop_back();
      continue;
    }
    const auto [nx, ny] =
        next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    if (nx != x)
      east[static_cast<std::size_t>(y * mw + std::min(x, nx))] = 1;
    else
      south[static_cast<std::size_t>(std::min(y, ny) * mw + x)] = 1;
    seen[static_cast<std::size_t>(ny * mw + nx)] = 1;
    stack.emplace_back(nx, ny);
  }

  std::bernoulli_distribution extra(opt.loop_fraction);
  for (int my = 0; my < mh; ++my) {
    for (int mx = 0; mx < mw; ++mx) {
      const auto k = static_cast<std::size_t>(my * mw + mx);
      if (mx + 1 < mw && (east[k] || extra(rng)))
        set_free(room_x(mx) + opt.corridor_cells, room_y(my), opt.wall_cells,
                 opt.corridor_cells);
      if (my + 1 < mh && (south[k] || extra(rng)))
        set_free(room_x(mx), room_y(my) + opt.corridor_cells, opt.corridor_cells,
                 opt.wall_cells);
    }
  }
  return OccupancyGrid(width, height, cell_size, std::move(cells));
}

}  // namespace kinonav::world

#endif  // KINONAV_WORLD_GENERATORS_HPP_
