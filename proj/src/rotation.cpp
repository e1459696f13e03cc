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

#include "coop/rotation.hpp"

#include <cmath>

#include "coop/detail/rodrigues.hpp"
#include "coop/errors.hpp"

namespace coop {

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("quaternion must be finite and non-zero");
  return Rotation{w / n, x / n, y / n, z / n};
}

Rotation Rotation::from_rotation_vector(const Vec3& v) {
  const double theta2 = dot(v, v);
  const double half2 = 0.25 * theta2;
  // sin(theta/2)/theta = 0.5 * sinc(theta/2)
  double s;
  if (half2 < detail::kSeriesLimit2) {
    s = 0.5 * detail::horner(detail::kF1Series, half2);
  } else {
    const double h = std::sqrt(half2);
    s = 0.5 * std::sin(h) / h;
  }
  return Rotation{std::cos(std::sqrt(half2)), v.x * s, v.y * s, v.z * s};
}

Rotation Rotation::operator*(const Rotation& o) const {
  return Rotation{w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_,
                  w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_,
                  w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_,
                  w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_};
}

Vec3 Rotation::apply(const Vec3& v) const {
  const Vec3 q{x_, y_, z_};
  const Vec3 t = cross(q, v) * 2.0;
  return v + t * w_ + cross(q, t);
}

Mat3 Rotation::matrix() const {
  const double xx = x_ * x_, yy = y_ * y_, zz = z_ * z_;
  const double xy = x_ * y_, xz = x_ * z_, yz = y_ * z_;
  const double wx = w_ * x_, wy = w_ * y_, wz = w_ * z_;
  Mat3 r;
  r.m = {{{1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)},
          {2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)},
          {2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)}}};
  return r;
}

Rotation Rotation::normalized() const { return from_quaternion(w_, x_, y_, z_); }

Rotation rot_axis(const Vec3& axis, double angle) {
  if (std::abs(norm(axis) - 1.0) > 1e-12) throw ValidationError("rotation axis must be a unit vector");
  return Rotation::from_rotation_vector(axis * angle);
}

Rotation step_rotation(double ux, double uy, double omega, double dt) {
  if (!(dt > 0.0)) throw ValidationError("step duration must be positive");
  return Rotation::from_rotation_vector(step_rotation_vector(ux, uy, omega, dt));
}

}  // namespace coop
