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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coop/workbench/scenario.hpp"

namespace coop::wb {

inline const std::vector<double> kDefaultSweepDurationsUs{25.0, 50.0, 75.0, 100.0, 150.0, 200.0};

/// Cells are the product T_us x R over one base configuration.
struct SweepSpec {
  RunConfig base;
  std::vector<double> T_us = kDefaultSweepDurationsUs;
  /// nullopt entries leave R unset (regressed for ST).
  std::vector<std::optional<double>> R{std::optional<double>(0.0)};
  /// Adds the unoptimized rectangular reference cell (T = 25 us, R = 2/pi).
  bool rect_reference = false;

  void validate() const;
  std::vector<RunConfig> cells() const;
};

/// Same keys as a run config, except that T_us and R may also be arrays, plus
/// "rect_reference": bool.
SweepSpec parse_sweep(std::string_view json_text);

struct SweepSummary {
  std::size_t cells = 0;
  std::size_t failed = 0;
};

/// Writes results.csv, manifest.json (both deterministic for a fixed spec),
/// timing.csv and one pulse file per pulse under pulses/. A failing cell is
/// recorded with its error and the sweep continues.
SweepSummary run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir);

/// Rebuilds every successful cell of a manifest from its pulse files and
/// returns the largest |phi_stored - quality_scan(...).phi|.
double reevaluate_manifest(const std::filesystem::path& out_dir);

/// Ramsey task of one manifest cell.
RamseyTask task_from_manifest_cell(const std::filesystem::path& out_dir, std::size_t index);

}  // namespace coop::wb
