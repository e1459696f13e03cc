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

#include "coop/grid.hpp"

#include <algorithm>
#include <cmath>

#include "coop/errors.hpp"
#include "coop/rotation.hpp"

namespace coop {

OffsetGrid::OffsetGrid(std::vector<double> nus_hz, std::vector<double> scales)
    : nus_(std::move(nus_hz)), scales_(std::move(scales)) {
  if (nus_.empty()) throw ValidationError("offset grid must contain at least one offset");
  if (scales_.empty()) throw ValidationError("offset grid needs at least one amplitude scale");
  for (std::size_t j = 0; j < nus_.size(); ++j) {
    if (!std::isfinite(nus_[j])) throw ValidationError("offsets must be finite");
    if (j > 0 && !(nus_[j] > nus_[j - 1])) throw ValidationError("offsets must be strictly increasing");
  }
  for (double s : scales_)
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("amplitude scales must be positive");
  omegas_.reserve(nus_.size());
  for (double nu : nus_) omegas_.push_back(kTwoPi * nu);
}

OffsetGrid OffsetGrid::symmetric(double nu_max_hz, std::size_t n, std::vector<double> scales) {
  if (n == 0) throw ValidationError("offset grid needs at least one point");
  if (n == 1) return OffsetGrid({0.0}, std::move(scales));
  if (!(nu_max_hz > 0.0)) throw ValidationError("nu_max must be positive");
  std::vector<double> nus(n);
  const double step = 2.0 * nu_max_hz / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < (n + 1) / 2; ++j) nus[n - 1 - j] = nu_max_hz - step * static_cast<double>(j);
  for (std::size_t j = 0; j < n / 2; ++j) nus[j] = -nus[n - 1 - j];
  if (n % 2 == 1) nus[n / 2] = 0.0;
  return OffsetGrid(std::move(nus), std::move(scales));
}

OffsetGrid OffsetGrid::standard() { return symmetric(35e3, 141, {0.95, 1.0, 1.05}); }

bool OffsetGrid::is_symmetric() const {
  const std::size_t n = nus_.size();
  for (std::size_t j = 0; j < n; ++j)
    if (nus_[j] != -nus_[n - 1 - j]) return false;
  return true;
}

double OffsetGrid::max_spacing_hz() const {
  double m = 0.0;
  for (std::size_t j = 1; j < nus_.size(); ++j) m = std::max(m, nus_[j] - nus_[j - 1]);
  return m;
}

bool OffsetGrid::spacing_ok_for(double duration_s) const {
  if (!(duration_s > 0.0)) return true;
  return max_spacing_hz() <= 1.0 / (4.0 * duration_s) * (1.0 + 1e-12);
}

}  // namespace coop
