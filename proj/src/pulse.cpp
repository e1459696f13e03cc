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

#include "coop/pulse.hpp"

#include <cmath>
#include <string>

#include "coop/errors.hpp"

namespace coop {

PulseShape::PulseShape(double dt, double umax, std::vector<Control> steps)
    : dt_(dt), umax_(umax), steps_(std::move(steps)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("pulse step duration must be positive and finite");
  if (!(umax_ > 0.0) || !std::isfinite(umax_)) throw ValidationError("pulse umax must be positive and finite");
  const double bound = umax_ * (1.0 + kAmplitudeSlack);
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const auto& c = steps_[k];
    if (!std::isfinite(c.ux) || !std::isfinite(c.uy))
      throw ValidationError("pulse step " + std::to_string(k) + " is not finite");
    if (std::hypot(c.ux, c.uy) > bound)
      throw ValidationError("pulse step " + std::to_string(k) + " exceeds umax");
  }
}

PulseShape PulseShape::rectangular(double dt, double umax, std::size_t n, double amplitude, double phase) {
  return PulseShape(dt, umax,
                    std::vector<Control>(n, Control{amplitude * std::cos(phase), amplitude * std::sin(phase)}));
}

Rotation propagate(const PulseShape& pulse, double omega, double scale) {
  if (!(scale > 0.0)) throw ValidationError("amplitude scale must be positive");
  Rotation r;
  std::size_t since_norm = 0;
  for (const auto& c : pulse.steps()) {
    r = Rotation::from_rotation_vector(step_rotation_vector(scale * c.ux, scale * c.uy, omega, pulse.dt())) * r;
    if (++since_norm == 64) {
      r = r.normalized();
      since_norm = 0;
    }
  }
  return r;
}

}  // namespace coop
