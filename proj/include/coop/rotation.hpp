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

#include <numbers>

#include "coop/vec3.hpp"

namespace coop {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Proper rotation of R^3, stored as a unit quaternion (w, x, y, z).
///
/// Composition follows operator order: (a * b).apply(v) == a.apply(b.apply(v)),
/// i.e. b acts first.
class Rotation {
 public:
  constexpr Rotation() = default;

  static constexpr Rotation identity() { return Rotation{}; }

  /// Builds from raw quaternion components; normalizes.
  static Rotation from_quaternion(double w, double x, double y, double z);

  /// Rotation by `angle` about the axis `v` scaled to length `angle`
  /// (the rotation vector). Zero vector gives the identity.
  static Rotation from_rotation_vector(const Vec3& v);

  Rotation operator*(const Rotation& o) const;
  Rotation inverse() const { return Rotation{w_, -x_, -y_, -z_}; }

  Vec3 apply(const Vec3& v) const;
  Mat3 matrix() const;

  Rotation normalized() const;

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }

 private:
  constexpr Rotation(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Right-handed rotation about a unit axis. Throws ValidationError when
/// | |axis| - 1 | > 1e-12.
Rotation rot_axis(const Vec3& axis, double angle);

inline Rotation rot_x(double angle) { return rot_axis(kUnitX, angle); }
inline Rotation rot_y(double angle) { return rot_axis(kUnitY, angle); }
inline Rotation rot_z(double angle) { return rot_axis(kUnitZ, angle); }

/// Propagator of one piecewise-constant step: rotation vector
/// (2*pi*ux, 2*pi*uy, omega) * dt. Amplitudes in Hz, omega in rad/s, dt in s.
Rotation step_rotation(double ux, double uy, double omega, double dt);

/// Rotation vector of a step, as used by step_rotation.
inline Vec3 step_rotation_vector(double ux, double uy, double omega, double dt) {
  return {kTwoPi * ux * dt, kTwoPi * uy * dt, omega * dt};
}

}  // namespace coop
