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

#include "coop/detail/rodrigues.hpp"
#include "coop/kernels.hpp"
#include "coop/rotation.hpp"

namespace coop::kernels {

namespace {

// M <- M + sign*f1 (v x M) + f2 v x (v x M)
inline void rotate(double vx, double vy, double vz, double f1s, double f2, double& x, double& y, double& z) {
  const double cx = vy * z - vz * y;
  const double cy = vz * x - vx * z;
  const double cz = vx * y - vy * x;
  const double ccx = vy * cz - vz * cy;
  const double ccy = vz * cx - vx * cz;
  const double ccz = vx * cy - vy * cx;
  x += f1s * cx + f2 * ccx;
  y += f1s * cy + f2 * ccy;
  z += f1s * cz + f2 * ccz;
}

}  // namespace

void forward_scalar(const ForwardArgs& a) {
  const double k = kTwoPi * a.dt;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double s = a.scale[i] * k;
    const double vz = a.omega[i] * a.dt;
    double x = a.x[i], y = a.y[i], z = a.z[i];
    for (std::size_t j = 0; j < a.num_steps; ++j) {
      const double vx = a.steps[j].ux * s;
      const double vy = a.steps[j].uy * s;
      const auto c = detail::rodrigues_coeffs(vx * vx + vy * vy + vz * vz);
      rotate(vx, vy, vz, c.f1, c.f2, x, y, z);
    }
    a.x[i] = x;
    a.y[i] = y;
    a.z[i] = z;
  }
}

void backward_scalar(const BackwardArgs& a) {
  const double k = kTwoPi * a.dt;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double s = a.scale[i] * k;
    const double vz = a.omega[i] * a.dt;
    double mx = a.mx[i], my = a.my[i], mz = a.mz[i];
    double lx = a.lx[i], ly = a.ly[i], lz = a.lz[i];
    for (std::size_t j = a.num_steps; j-- > 0;) {
      const double vx = a.steps[j].ux * s;
      const double vy = a.steps[j].uy * s;
      const auto c = detail::rodrigues_coeffs(vx * vx + vy * vy + vz * vz);

      // g = J^T (M x l), J^T = I - f2 [v]x + f3 [v]x^2
      const double wx = my * lz - mz * ly;
      const double wy = mz * lx - mx * lz;
      const double wz = mx * ly - my * lx;
      const double ux = vy * wz - vz * wy;
      const double uy = vz * wx - vx * wz;
      const double uz = vx * wy - vy * wx;
      const double uux = vy * uz - vz * uy;
      const double uuy = vz * ux - vx * uz;
      a.grad_ux[j] += s * (wx - c.f2 * ux + c.f3 * uux);
      a.grad_uy[j] += s * (wy - c.f2 * uy + c.f3 * uuy);

      rotate(vx, vy, vz, -c.f1, c.f2, mx, my, mz);
      rotate(vx, vy, vz, -c.f1, c.f2, lx, ly, lz);
    }
    a.mx[i] = mx;
    a.my[i] = my;
    a.mz[i] = mz;
    a.lx[i] = lx;
    a.ly[i] = ly;
    a.lz[i] = lz;
  }
}

}  // namespace coop::kernels
