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
#include <span>
#include <vector>

#include "coop/grid.hpp"
#include "coop/pulse.hpp"
#include "coop/rotation.hpp"
#include "coop/vec3.hpp"

namespace coop {

/// ZYZ Euler angles: S = Rz(alpha) Ry(beta) Rz(gamma); gamma acts first.
struct EulerAngles {
  double gamma = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

/// |sin(beta)| at or below this marks gimbal lock (only alpha +- gamma observable).
inline constexpr double kGimbalThreshold = 1e-6;

Mat3 euler_matrix(const EulerAngles& e);

struct EulerExtraction {
  EulerAngles angles;  // beta in [0, pi]
  bool gimbal = false;
};

/// Extracts angles with beta in [0, pi]. At gimbal lock gamma is set to 0 and
/// alpha carries the observable combination (alpha + gamma near beta = 0,
/// alpha - gamma near beta = pi).
EulerExtraction euler_from_matrix(const Mat3& r);

struct Unwrapped {
  std::vector<double> angles;
  /// Set when some adjacent raw jump was exactly +-pi (within 1e-12); such
  /// ties are resolved toward +pi.
  bool tie = false;
};

/// Adds integer multiples of 2*pi so that adjacent differences lie in (-pi, pi].
Unwrapped unwrap(std::span<const double> track);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Sign convention for the beta track of a profile.
enum class BetaBranch {
  Positive,    ///< beta in [0, pi] (class target +pi/2)
  Negative,    ///< beta in [-pi, 0] (class target -pi/2)
  Continuous,  ///< start positive, then follow the branch that keeps beta smooth
};

/// Offset-resolved Euler angles of a pulse at one amplitude scale.
struct EulerProfile {
  std::vector<double> nus;     // Hz
  std::vector<double> omegas;  // rad/s
  double scale = 1.0;
  double duration = 0.0;  // s, duration of the pulse the profile belongs to

  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<std::uint8_t> gimbal;

  bool gamma_unwrap_ok = true;
  bool alpha_unwrap_ok = true;

  std::size_t size() const { return nus.size(); }
  EulerAngles at(std::size_t j) const { return {gamma[j], beta[j], alpha[j]}; }
  Mat3 rotation_at(std::size_t j) const { return euler_matrix(at(j)); }
  bool is_symmetric() const;
  std::size_t mirror_index(std::size_t j) const { return nus.size() - 1 - j; }
};

/// Builds a profile directly from angle tracks (no unwrapping is applied).
EulerProfile make_profile(std::span<const double> nus_hz, double duration, std::vector<double> gamma,
                          std::vector<double> beta, std::vector<double> alpha, double scale = 1.0);

/// Profile of precomputed propagators, one per offset (alpha/gamma unwrapped).
EulerProfile profile_from_rotations(std::span<const double> nus_hz, std::span<const Rotation> rotations,
                                    double duration, double scale = 1.0, BetaBranch branch = BetaBranch::Positive);

/// Euler profile of `pulse` over the offsets of `grid` at amplitude `scale`.
/// Alpha and gamma are unwrapped along the offset axis. Throws ValidationError
/// when the grid spacing exceeds 1/(4T).
EulerProfile extract_euler(const PulseShape& pulse, const OffsetGrid& grid, double scale = 1.0,
                           BetaBranch branch = BetaBranch::Positive);

}  // namespace coop
