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

#include "coop/rotation.hpp"

namespace coop {

/// Control amplitudes of one step in Hz (Rabi-frequency units).
struct Control {
  double ux = 0.0;
  double uy = 0.0;

  bool operator==(const Control&) const = default;
};

/// Relative slack on the amplitude bound.
inline constexpr double kAmplitudeSlack = 1e-9;

/// Piecewise-constant control waveform.
///
/// Invariants (checked on construction): dt > 0, umax > 0, every step finite
/// with sqrt(ux^2 + uy^2) <= umax * (1 + 1e-9). A pulse with zero steps is
/// allowed and propagates as the identity.
class PulseShape {
 public:
  PulseShape(double dt, double umax, std::vector<Control> steps);

  /// Constant-amplitude, constant-phase pulse of `n` steps.
  static PulseShape rectangular(double dt, double umax, std::size_t n, double amplitude, double phase);

  double dt() const { return dt_; }
  double umax() const { return umax_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  double duration() const { return dt_ * static_cast<double>(steps_.size()); }

  std::span<const Control> steps() const { return steps_; }
  const Control& operator[](std::size_t k) const { return steps_[k]; }

  bool operator==(const PulseShape&) const = default;

 private:
  double dt_;
  double umax_;
  std::vector<Control> steps_;
};

/// Ordered step product at offset `omega` with the controls multiplied by `scale`.
/// Later steps act after earlier ones. Throws ValidationError unless scale > 0.
Rotation propagate(const PulseShape& pulse, double omega, double scale = 1.0);

}  // namespace coop
