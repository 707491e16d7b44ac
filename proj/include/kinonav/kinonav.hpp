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

#ifndef KINONAV_KINONAV_HPP_
#define KINONAV_KINONAV_HPP_

#include "kinonav/common.hpp"
#include "kinonav/world/occupancy_grid.hpp"
#include "kinonav/world/distance_field.hpp"
#include "kinonav/world/generators.hpp"
#include "kinonav/sim/robot.hpp"
#include "kinonav/sim/kinematic.hpp"
#include "kinonav/sim/dynamic_lite.hpp"
#include "kinonav/sim/noise.hpp"
#include "kinonav/task/metrics.hpp"
#include "kinonav/task/environment.hpp"
#include "kinonav/task/trajectory_io.hpp"
#include "kinonav/epgen/episodes.hpp"
#include "kinonav/agents/agents.hpp"
#include "kinonav/harness/batch.hpp"
#include "kinonav/harness/gap.hpp"
#include "kinonav/harness/bench.hpp"
#include "kinonav/harness/plot.hpp"

#endif  // KINONAV_KINONAV_HPP_
