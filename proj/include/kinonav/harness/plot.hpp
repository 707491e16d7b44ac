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

// SVG rendering of a map with trajectories drawn over it. Output depends
// only on the inputs: fixed number formatting, no timestamps.

#ifndef KINONAV_HARNESS_PLOT_HPP_
#define KINONAV_HARNESS_PLOT_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/task/trajectory_io.hpp"
#include "kinonav/world/occupancy_grid.hpp"

namespace kinonav::harness {

struct PlotOptions {
  double pixels_per_meter = 40.0;
};

/// One <polyline> per log, with as many vertices as the log has records.
/// Successful runs are drawn solid green, failures dashed red. World y
/// points up; the SVG is flipped accordingly.
inline std::string emit_plot(const world::OccupancyGrid& grid,
                             const std::vector<task::TrajectoryLog>& logs,
                             const PlotOptions& opt = {}) {
  const double k = opt.pixels_per_meter;
  const double w = grid.extent_x() * k;
  const double h = grid.extent_y() * k;
  auto sx = [&](double x) { return fmt6((x - grid.origin().x) * k); };
  auto sy = [&](double y) { return fmt6(h - (y - grid.origin().y) * k); };

  for (std::size_t n = 0; n < logs.size(); ++n) {
    for (const auto& r : logs[n].records) {
      if (!grid.in_bounds(r.pose.position()))
        throw InvalidArgument("trajectory " + std::to_string(n) + " leaves the map");
    }
    if (logs[n].has_goal && !grid.in_bounds(logs[n].goal))
      throw InvalidArgument("trajectory " + std::to_string(n) + " has its goal off the map");
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt6(w) + "\" height=\"" +
         fmt6(h) + "\" viewBox=\"0 0 " + fmt6(w) + " " + fmt6(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fmt6(w) + "\" height=\"" + fmt6(h) +
         "\" fill=\"#ffffff\"/>\n";

  // Occupied cells, merged into horizontal runs.
  out += "<g fill=\"#404040\">\n";
  const double cs = grid.cell_size();
  for (int j = 0; j < grid.height(); ++j) {
    int i = 0;
    while (i < grid.width()) {
      if (!grid.occupied({i, j})) {
        ++i;
        continue;
      }
      const int i0 = i;
      while (i < grid.width() && grid.occupied({i, j})) ++i;
      const double x0 = grid.origin().x + i0 * cs;
      const double y1 = grid.origin().y + (j + 1) * cs;
      out += "<rect x=\"" + sx(x0) + "\" y=\"" + sy(y1) + "\" width=\"" + fmt6((i - i0) * cs * k) +
             "\" height=\"" + fmt6(cs * k) + "\"/>\n";
    }
  }
  out += "</g>\n";

  const double marker = std::max(2.0, 0.15 * k);
  for (const auto& log : logs) {
    if (log.records.empty() && !log.has_goal) continue;
    const char* stroke = log.success ? "#1a9850" : "#d73027";
    out += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"2\"";
    if (!log.success) out += " stroke-dasharray=\"6 3\"";
    out += " points=\"";
    for (std::size_t n = 0; n < log.records.size(); ++n) {
      if (n) out += " ";
      out += sx(log.records[n].pose.x) + "," + sy(log.records[n].pose.y);
    }
    out += "\"/>\n";
    if (!log.records.empty()) {
      const auto& s = log.records.front().pose;
      out += "<circle class=\"start\" cx=\"" + sx(s.x) + "\" cy=\"" + sy(s.y) + "\" r=\"" +
             fmt6(marker) + "\" fill=\"#2166ac\"/>\n";
    }
    if (log.has_goal) {
      out += "<rect class=\"goal\" x=\"" + fmt6((log.goal.x - grid.origin().x) * k - marker) +
             "\" y=\"" + fmt6(h - (log.goal.y - grid.origin().y) * k - marker) + "\" width=\"" +
             fmt6(2 * marker) + "\" height=\"" + fmt6(2 * marker) + "\" fill=\"#fdae61\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace kinonav::harness

#endif  // KINONAV_HARNESS_PLOT_HPP_
