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

// Cross-configuration success-rate matrix.
//
// Rows are the condition an agent was built for (train label), columns the
// condition it was evaluated under. The gap of a cell is the row's
// in-distribution success rate minus the cell's.

#ifndef KINONAV_HARNESS_GAP_HPP_
#define KINONAV_HARNESS_GAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/harness/batch.hpp"
#include "kinonav/task/metrics.hpp"

namespace kinonav::harness {

/// A persisted run: its summary plus the per-episode rows it was built from.
struct RunRecord {
  RunSummary summary;
  std::vector<task::EpisodeResult> episodes;
};

struct GapTable {
  std::vector<std::string> rows;  // train labels
  std::vector<std::string> cols;  // eval labels
  std::vector<std::vector<double>> success;  // percent, NaN where not evaluated
  std::vector<std::vector<double>> gap;      // NaN where either cell is missing

  double cell(const std::string& row, const std::string& col) const {
    const auto r = std::find(rows.begin(), rows.end(), row);
    const auto c = std::find(cols.begin(), cols.end(), col);
    if (r == rows.end() || c == cols.end()) return std::numeric_limits<double>::quiet_NaN();
    return success[static_cast<std::size_t>(r - rows.begin())]
                  [static_cast<std::size_t>(c - cols.begin())];
  }
  double gap_of(const std::string& row, const std::string& col) const {
    const auto r = std::find(rows.begin(), rows.end(), row);
    const auto c = std::find(cols.begin(), cols.end(), col);
    if (r == rows.end() || c == cols.end()) return std::numeric_limits<double>::quiet_NaN();
    return gap[static_cast<std::size_t>(r - rows.begin())]
              [static_cast<std::size_t>(c - cols.begin())];
  }
};

/// Success rate in percent, recomputed from per-episode indicators.
inline double success_percent(const std::vector<task::EpisodeResult>& episodes) {
  if (episodes.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t s = 0;
  for (const auto& e : episodes) s += e.success ? 1 : 0;
  return 100.0 * static_cast<double>(s) / static_cast<double>(episodes.size());
}

inline GapTable sim2sim_gap(const std::vector<RunRecord>& runs) {
  GapTable t;
  if (runs.empty()) return t;
  const RunSummary& ref = runs.front().summary;
  for (const auto& run : runs) {
    if (run.summary.dataset_hash != ref.dataset_hash)
      throw InvalidArgument("refusing to compare runs on different datasets ('" + ref.label +
                            "' vs '" + run.summary.label + "')");
    if (run.summary.seeds != ref.seeds)
      throw InvalidArgument("refusing to compare runs with different seeds ('" + ref.label +
                            "' vs '" + run.summary.label + "')");
    if (std::find(t.rows.begin(), t.rows.end(), run.summary.train_label) == t.rows.end())
      t.rows.push_back(run.summary.train_label);
    if (std::find(t.cols.begin(), t.cols.end(), run.summary.label) == t.cols.end())
      t.cols.push_back(run.summary.label);
  }
  // Training conditions first, in the same order on both axes.
  std::vector<std::string> cols;
  for (const auto& r : t.rows)
    if (std::find(t.cols.begin(), t.cols.end(), r) != t.cols.end()) cols.push_back(r);
  for (const auto& c : t.cols)
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  t.cols = std::move(cols);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.success.assign(t.rows.size(), std::vector<double>(t.cols.size(), nan));
  t.gap.assign(t.rows.size(), std::vector<double>(t.cols.size(), nan));
  for (const auto& run : runs) {
    const auto r = static_cast<std::size_t>(
        std::find(t.rows.begin(), t.rows.end(), run.summary.train_label) - t.rows.begin());
    const auto c = static_cast<std::size_t>(
        std::find(t.cols.begin(), t.cols.end(), run.summary.label) - t.cols.begin());
    if (!std::isnan(t.success[r][c]))
      throw InvalidArgument("duplicate run for (" + t.rows[r] + ", " + t.cols[c] + ")");
    t.success[r][c] = success_percent(run.episodes);
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto home = std::find(t.cols.begin(), t.cols.end(), t.rows[r]);
    if (home == t.cols.end()) continue;
    const double in_dist = t.success[r][static_cast<std::size_t>(home - t.cols.begin())];
    for (std::size_t c = 0; c < t.cols.size(); ++c) t.gap[r][c] = in_dist - t.success[r][c];
  }
  return t;
}

/// Plain-text table: an SR block and a gap block, tab separated.
inline std::string write_gap_table(const GapTable& t) {
  auto num = [](double v) { return std::isnan(v) ? std::string("-") : fmt6(v); };
  auto block = [&](const char* title, const std::vector<std::vector<double>>& m) {
    std::string out = std::string(title) + "\ntrain\\eval";
    for (const auto& c : t.cols) out += "\t" + c;
    out += "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out += t.rows[r];
      for (std::size_t c = 0; c < t.cols.size(); ++c) out += "\t" + num(m[r][c]);
      out += "\n";
    }
    return out;
  };
  return block("# success_rate_percent", t.success) + "\n" + block("# gap_percent", t.gap);
}

}  // namespace kinonav::harness

#endif  // KINONAV_HARNESS_GAP_HPP_
