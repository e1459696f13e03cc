/* Copyright 2026 The coop-pulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coop/grape.hpp"
#include "coop/grid.hpp"
#include "coop/pulse.hpp"
#include "coop/ramsey.hpp"
#include "coop/transforms.hpp"

namespace coop::wb {

/// What a sweep cell optimizes and how the Ramsey pair is formed from it.
enum class Family {
  Coop,        ///< pair, symmetry-adapted quality; S2 optimized
  CoopFilter,  ///< pair, filter-based quality at tau = -delta
  PP,          ///< S - tau - S^tr_ip
  UR,          ///< S - tau - S^tr_ip, R = 0
  Sat,         ///< S - tau - S^tr_ps
  ST,          ///< S - tau - S^tr_ps, R optional (absent: regressed each iteration)
  Rect,        ///< constant 90 degree y pulse, no optimization, S - tau - S^tr_ip
};

std::string_view family_name(Family f);
/// Accepts coop, coop-filter, pp, ur, sat, st, rect.
Family parse_family(std::string_view name);
bool is_pair_family(Family f);
/// Transform forming the second pulse of single-pulse families.
TransformKind construction_for(Family f);

/// One optimization (or reference) cell. Units follow the JSON keys.
struct RunConfig {
  Family family = Family::Coop;
  double T_us = 75.0;
  std::optional<double> R;         // absent: 0, or a regressed slope for ST
  std::optional<double> delta_us;  // absent: 2 R T
  bool fit_delta = false;          // delta from the Euler slopes of the final pair
  double numax_khz = 35.0;
  std::size_t n_offsets = 141;
  std::vector<double> scales{0.95, 1.0, 1.05};
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  std::size_t max_iters = 3000;
  double tol = 1e-10;
  double dt_us = 0.5;
  double umax_hz = 10e3;
  UpdateRule rule = UpdateRule::SteepestAscent;
  unsigned threads = 0;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
  OffsetGrid grid() const;
  OptimizerConfig optimizer() const;
  std::size_t num_steps() const;
  double slope() const { return R.value_or(0.0); }
};

/// Parses the JSON document; unknown keys are rejected. Throws ValidationError.
RunConfig parse_config(std::string_view json_text);
std::string config_to_json(const RunConfig& cfg);

struct CellResult {
  RunConfig config;
  RamseyTask task;       // the evaluated pair with its delta
  double phi = 0.0;      // Ramsey quality of task
  double objective = 0.0;
  double R = 0.0;        // slope used for delta (converged value for ST)
  std::uint64_t seed = 0;
  std::size_t restart_index = 0;
  std::size_t iterations = 0;
  std::string stop_reason;
  double symmetry = -1.0;  // pair families: RMS distance of S2 to S1^tr_ps over umax
  double wall_s = 0.0;
};

/// Runs the optimization (best of restarts) and scores the resulting pair.
CellResult run_cell(const RunConfig& cfg);

/// Reference rectangular pair of the rect family for the given config.
PulseShape rect_pulse(const RunConfig& cfg);

}  // namespace coop::wb
