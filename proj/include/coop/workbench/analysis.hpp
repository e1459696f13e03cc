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

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "coop/ramsey.hpp"

namespace coop::wb {

struct ScalingPoint {
  double T = 0.0;  // s
  double phi = 0.0;
};

/// Least-squares line -ln(1 - phi) = a T + b, i.e. phi ~ 1 - c exp(-a T).
struct ScalingFit {
  double a = 0.0;  // 1/s
  double b = 0.0;
  double c = 1.0;  // exp(-b)
  double residual = 0.0;  // RMS of the line fit
  std::size_t used = 0;
};

/// Points with phi >= 1 - 1e-12 are excluded; fewer than two remaining (or all
/// at one T) throws ValidationError.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

inline constexpr double kDefaultFringeTime = 95e-6;

/// Columns nu_hz, mz, target at the nominal amplitude scale (the grid scale
/// closest to 1), with tau = t_eff - delta and target s_R cos(2 pi nu t_eff).
void export_fringe(std::ostream& os, const RamseyTask& task, double t_eff = kDefaultFringeTime);

/// Per-point quality table laid out [scale][offset].
void write_quality_csv(std::ostream& os, const QualityReport& report);

}  // namespace coop::wb
