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

// Builds a maze, samples episodes, evaluates the oracle under each backend
// and prints the success-rate table.

#include <iostream>
#include <memory>
#include <vector>

#include "kinonav/kinonav.hpp"

using namespace kinonav;

int main() {
  auto grid = std::make_shared<const world::OccupancyGrid>(world::maze_grid(64, 64, 0.2, 1));
  const auto dataset = epgen::sample_episodes(*grid, 40, 1, sim::spot());
  const auto hash = harness::hash_text(epgen::write_dataset(dataset));

  std::vector<harness::RunRecord> runs;
  for (const char* backend : {"kinematic", "dynlite-a", "dynlite-b"}) {
    harness::EvalConfig cfg;
    harness::set_backend(cfg, backend);
    cfg.env.render_depth = false;
    cfg.env.record_trajectory = false;
    const auto batch =
        harness::run_batch(grid, dataset, cfg, agents::policy_factory("oracle"), hash);
    std::cout << backend << ": SR " << fmt6(100.0 * batch.aggregate.success_rate) << "%  SPL "
              << fmt6(batch.aggregate.spl) << "  collisions "
              << fmt6(batch.aggregate.mean_collisions) << "\n";
    runs.push_back({harness::summarize(batch), batch.results});
  }
  std::cout << "\n" << harness::write_gap_table(harness::sim2sim_gap(runs));
  return 0;
}
