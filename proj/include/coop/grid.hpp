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
#include <span>
#include <vector>

namespace coop {

/// Offsets (stored in Hz and rad/s) and control-amplitude scale factors over
/// which pulses are evaluated. Offsets are strictly increasing.
class OffsetGrid {
 public:
  OffsetGrid(std::vector<double> nus_hz, std::vector<double> scales);

  /// `n` points evenly spaced over [-nu_max, nu_max]. The negative half is the
  /// exact negation of the positive half so that mirror lookups are bit-exact.
  static OffsetGrid symmetric(double nu_max_hz, std::size_t n, std::vector<double> scales = {1.0});

  /// Default production grid: +-35 kHz, 141 points, scales {0.95, 1, 1.05}.
  static OffsetGrid standard();

  std::size_t size() const { return nus_.size(); }
  std::size_t num_scales() const { return scales_.size(); }
  /// Number of (offset, scale) evaluation points.
  std::size_t num_points() const { return nus_.size() * scales_.size(); }

  std::span<const double> nus() const { return nus_; }
  std::span<const double> omegas() const { return omegas_; }
  std::span<const double> scales() const { return scales_; }
  double nu(std::size_t j) const { return nus_[j]; }
  double omega(std::size_t j) const { return omegas_[j]; }

  /// True when nu[j] == -nu[n-1-j] exactly for all j.
  bool is_symmetric() const;
  std::size_t mirror_index(std::size_t j) const { return nus_.size() - 1 - j; }

  /// Largest spacing between adjacent offsets, in Hz.
  double max_spacing_hz() const;
  /// Unwrapping condition |d nu| <= 1/(4T) for a pulse of duration T.
  bool spacing_ok_for(double duration_s) const;

 private:
  std::vector<double> nus_;
  std::vector<double> omegas_;
  std::vector<double> scales_;
};

}  // namespace coop
