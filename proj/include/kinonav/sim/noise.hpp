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

// Actuation noise: independent per-axis Gaussians on the (vx, vy, w)
// residual between commanded and realised velocity.

#ifndef KINONAV_SIM_NOISE_HPP_
#define KINONAV_SIM_NOISE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kinonav/common.hpp"
#include "kinonav/sim/robot.hpp"

namespace kinonav::sim {

enum class NoiseMode { coupled, decoupled };

inline std::string_view to_string(NoiseMode m) {
  return m == NoiseMode::coupled ? "coupled" : "decoupled";
}

inline NoiseMode parse_noise_mode(std::string_view s) {
  if (s == "coupled") return NoiseMode::coupled;
  if (s == "decoupled") return NoiseMode::decoupled;
  throw InvalidArgument("unknown noise mode '" + std::string(s) + "'");
}

enum class AngularUnits { rad_per_s, deg_per_s };

inline constexpr double kDegToRad = kPi / 180.0;

/// Means and standard deviations in (m/s, m/s, rad/s).
struct NoiseModel {
  NoiseMode mode = NoiseMode::coupled;
  std::array<double, 3> mu{};
  std::array<double, 3> sigma{};
  std::size_t sample_count = 0;

  bool is_zero() const noexcept {
    for (int k = 0; k < 3; ++k)
      if (mu[k] != 0.0 || sigma[k] != 0.0) return false;
    return true;
  }
};

inline void validate(const NoiseModel& m) {
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(m.mu[k]) || !std::isfinite(m.sigma[k]))
      throw InvalidArgument("noise model parameters must be finite");
    if (m.sigma[k] < 0.0) throw InvalidArgument("noise model sigma must be non-negative");
  }
}

// Spot actuation-noise fits, 6000 samples each. Tabulated in deg/s for the
// angular axis, converted here.
inline NoiseModel spot_coupled_noise() {
  return {NoiseMode::coupled,
          {0.002, -0.004, 0.081 * kDegToRad},
          {0.054, 0.065, 2.599 * kDegToRad},
          6000};
}

inline NoiseModel spot_decoupled_noise() {
  return {NoiseMode::decoupled,
          {0.002, -0.001, -0.029 * kDegToRad},
          {0.036, 0.044, 1.468 * kDegToRad},
          6000};
}

/// Adds one Gaussian draw per axis to an already clamped command. The
/// result is deliberately not re-clamped.
template <class Rng>
VelocityCommand apply_noise(const VelocityCommand& cmd, const NoiseModel& model, Rng& rng) {
  if (model.is_zero()) return cmd;
  std::normal_distribution<double> unit(0.0, 1.0);
  const double e0 = model.mu[0] + model.sigma[0] * unit(rng);
  const double e1 = model.mu[1] + model.sigma[1] * unit(rng);
  const double e2 = model.mu[2] + model.sigma[2] * unit(rng);
  return {cmd.vx + e0, cmd.vy + e1, cmd.w + e2};
}

// ---------------------------------------------------------------------------
// Fitting

/// Which axis a logged sample excited. Coupled logs use `all`.
enum class ExcitedAxis { x, y, w, all };

struct NoiseSample {
  ExcitedAxis axis = ExcitedAxis::all;
  VelocityCommand commanded;
  VelocityCommand measured;
};

/// Per-axis mean and unbiased standard deviation of (measured - commanded).
/// Coupled mode uses every sample for every axis; decoupled mode uses, for
/// each axis, only the samples that excited that axis.
inline NoiseModel fit_noise_model(const std::vector<NoiseSample>& log, NoiseMode mode) {
  NoiseModel m;
  m.mode = mode;
  m.sample_count = log.size();
  static constexpr ExcitedAxis kAxes[3] = {ExcitedAxis::x, ExcitedAxis::y, ExcitedAxis::w};
  static constexpr const char* kNames[3] = {"x", "y", "w"};
  for (int k = 0; k < 3; ++k) {
    std::vector<double> r;
    for (const NoiseSample& s : log) {
      if (mode == NoiseMode::decoupled && s.axis != kAxes[k]) continue;
      const double c = k == 0 ? s.commanded.vx : (k == 1 ? s.commanded.vy : s.commanded.w);
      const double v = k == 0 ? s.measured.vx : (k == 1 ? s.measured.vy : s.measured.w);
      r.push_back(v - c);
    }
    if (r.size() < 2)
      throw Error(std::string("noise fit: fewer than 2 samples for axis ") + kNames[k]);
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    double ss = 0.0;
    for (double x : r) ss += (x - mean) * (x - mean);
    m.mu[k] = mean;
    m.sigma[k] = std::sqrt(ss / static_cast<double>(r.size() - 1));
  }
  return m;
}

/// Synthetic collection run: commands drawn from U(-0.5, 0.5) (all axes at
/// once for coupled, one axis at a time in equal thirds for decoupled), the
/// response perturbed by `truth`.
template <class Rng>
std::vector<NoiseSample> synthesize_noise_log(const NoiseModel& truth, NoiseMode mode,
                                              std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<NoiseSample> log;
  log.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    NoiseSample s;
    if (mode == NoiseMode::coupled) {
      s.axis = ExcitedAxis::all;
      s.commanded = {u(rng), u(rng), u(rng)};
    } else {
      const std::size_t third = (n + 2) / 3;
      const std::size_t a = std::min<std::size_t>(2, k / third);
      s.axis = static_cast<ExcitedAxis>(a);
      const double v = u(rng);
      s.commanded = {a == 0 ? v : 0.0, a == 1 ? v : 0.0, a == 2 ? v : 0.0};
    }
    s.measured = apply_noise(s.commanded, truth, rng);
    log.push_back(s);
  }
  return log;
}

// ---------------------------------------------------------------------------
// Files

/// Flat key/value document, fixed key order, six significant digits:
///
///     mode coupled
///     units deg_per_s
///     mu 0.002 -0.004 0.081
///     sigma 0.054 0.065 2.599
///     sample_count 6000
///
/// `units` applies to the angular component only.
inline std::string write_noise_model(const NoiseModel& m,
                                     AngularUnits units = AngularUnits::rad_per_s) {
  const double scale = units == AngularUnits::deg_per_s ? 1.0 / kDegToRad : 1.0;
  std::string out;
  out += "mode " + std::string(to_string(m.mode)) + "\n";
  out += std::string("units ") +
         (units == AngularUnits::deg_per_s ? "deg_per_s" : "rad_per_s") + "\n";
  out += "mu " + fmt6(m.mu[0]) + " " + fmt6(m.mu[1]) + " " + fmt6(m.mu[2] * scale) + "\n";
  out += "sigma " + fmt6(m.sigma[0]) + " " + fmt6(m.sigma[1]) + " " + fmt6(m.sigma[2] * scale) +
         "\n";
  out += "sample_count " + std::to_string(m.sample_count) + "\n";
  return out;
}

inline NoiseModel read_noise_model(std::string_view text) {
  NoiseModel m;
  bool have_mode = false, have_units = false, have_mu = false, have_sigma = false,
       have_count = false;
  AngularUnits units = AngularUnits::rad_per_s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    auto read3 = [&](std::array<double, 3>& v) {
      if (!(ls >> v[0] >> v[1] >> v[2])) throw ParseError(lineno, "expected 3 numbers for " + key);
    };
    if (key == "mode") {
      std::string v;
      if (!(ls >> v)) throw ParseError(lineno, "missing mode value");
      try {
        m.mode = parse_noise_mode(v);
      } catch (const InvalidArgument& e) {
        throw ParseError(lineno, e.what());
      }
      have_mode = true;
    } else if (key == "units") {
      std::string v;
      ls >> v;
      if (v == "deg_per_s") {
        units = AngularUnits::deg_per_s;
      } else if (v == "rad_per_s") {
        units = AngularUnits::rad_per_s;
      } else {
        throw ParseError(lineno, "unknown units '" + v + "'");
      }
      have_units = true;
    } else if (key == "mu") {
      read3(m.mu);
      have_mu = true;
    } else if (key == "sigma") {
      read3(m.sigma);
      have_sigma = true;
    } else if (key == "sample_count") {
      long long n = -1;
      if (!(ls >> n) || n < 0) throw ParseError(lineno, "invalid sample_count");
      m.sample_count = static_cast<std::size_t>(n);
      have_count = true;
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing data after " + key);
  }
  if (!(have_mode && have_units && have_mu && have_sigma && have_count))
    throw ParseError(lineno + 1, "noise model missing required keys");
  if (units == AngularUnits::deg_per_s) {
    m.mu[2] *= kDegToRad;
    m.sigma[2] *= kDegToRad;
  }
  try {
    validate(m);
  } catch (const InvalidArgument& e) {
    throw ParseError(lineno, e.what());
  }
  return m;
}

/// Command/response log, rad/s, one sample per row:
/// `axis,cmd_vx,cmd_vy,cmd_w,meas_vx,meas_vy,meas_w` with axis in {x,y,w,all}.
inline std::string write_noise_log(const std::vector<NoiseSample>& log) {
  static constexpr const char* kAxis[4] = {"x", "y", "w", "all"};
  std::string out = "axis,cmd_vx,cmd_vy,cmd_w,meas_vx,meas_vy,meas_w\n";
  for (const NoiseSample& s : log) {
    out += kAxis[static_cast<int>(s.axis)];
    for (double v : {s.commanded.vx, s.commanded.vy, s.commanded.w, s.measured.vx, s.measured.vy,
                     s.measured.w})
      out += "," + fmt_shortest(v);
    out += "\n";
  }
  return out;
}

inline std::vector<NoiseSample> read_noise_log(std::string_view text) {
  std::vector<NoiseSample> log;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("axis", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 7) throw ParseError(lineno, "expected 7 fields");
    NoiseSample s;
    if (f[0] == "x") {
      s.axis = ExcitedAxis::x;
    } else if (f[0] == "y") {
      s.axis = ExcitedAxis::y;
    } else if (f[0] == "w") {
      s.axis = ExcitedAxis::w;
    } else if (f[0] == "all") {
      s.axis = ExcitedAxis::all;
    } else {
      throw ParseError(lineno, "unknown axis tag '" + f[0] + "'");
    }
    double v[6];
    for (int k = 0; k < 6; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(f[k + 1].c_str(), &end);
      if (f[k + 1].empty() || *end != '\0' || !std::isfinite(v[k]))
        throw ParseError(lineno, "invalid number '" + f[k + 1] + "'");
    }
    s.commanded = {v[0], v[1], v[2]};
    s.measured = {v[3], v[4], v[5]};
    log.push_back(s);
  }
  return log;
}

}  // namespace kinonav::sim

#endif  // KINONAV_SIM_NOISE_HPP_
