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

#include "coop/workbench/analysis.hpp"

#include <cmath>
#include <ostream>

#include "coop/errors.hpp"
#include "coop/workbench/io.hpp"

namespace coop::wb {

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : points) {
    if (!std::isfinite(p.T) || !std::isfinite(p.phi)) throw ValidationError("scaling points must be finite");
    if (p.phi >= 1.0 - 1e-12) continue;
    xy.emplace_back(p.T, -std::log(1.0 - p.phi));
  }
  if (xy.size() < 2) throw ValidationError("scaling fit needs at least two points with phi < 1");
  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("scaling fit needs at least two distinct durations");
  ScalingFit f;
  f.a = sxy / sxx;
  f.b = my - f.a * mx;
  f.c = std::exp(-f.b);
  double ss = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (f.a * x + f.b);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.used = xy.size();
  return f;
}

void export_fringe(std::ostream& os, const RamseyTask& task, double t_eff) {
  task.validate();
  const auto& grid = task.grid;
  double nominal = grid.scales()[0];
  for (double s : grid.scales())
    if (std::abs(s - 1.0) < std::abs(nominal - 1.0)) nominal = s;
  const double tau = t_eff - task.delta;
  CsvWriter csv(os);
  csv.header({"nu_hz", "mz", "target"});
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid.omega(j);
    const double mz = fringe_point(propagate(task.pulse1, w, nominal), propagate(task.pulse2, w, nominal), w, tau);
    csv.cell(grid.nu(j)).cell(mz).cell(task.s_R * std::cos(w * t_eff));
    csv.end_row();
  }
}

void write_quality_csv(std::ostream& os, const QualityReport& rep) {
  CsvWriter csv(os);
  csv.header({"scale", "nu_hz", "A", "dphi", "phi_d", "phi_a", "phi_b", "phi_e", "phi_sat", "gimbal"});
  for (std::size_t s = 0; s < rep.scales.size(); ++s) {
    for (std::size_t j = 0; j < rep.nus.size(); ++j) {
      const auto& q = rep.at(s, j);
      csv.cell(rep.scales[s]).cell(rep.nus[j]).cell(q.A).cell(q.dphi).cell(q.phi_d).cell(q.phi_a).cell(q.phi_b);
      csv.cell(q.phi_e).cell(q.phi_sat).cell(static_cast<long long>(q.gimbal));
      csv.end_row();
    }
  }
}

}  // namespace coop::wb
