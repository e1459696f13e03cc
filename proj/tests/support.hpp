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

// Test-only helpers. The oracles here are written from the defining formulas
// and deliberately share no code with the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "coop/pulse.hpp"
#include "coop/vec3.hpp"

namespace coop::test {

/// Steps uniform in the disc of radius umax (rejection sampled).
inline PulseShape random_pulse(std::mt19937_64& rng, std::size_t n, double dt = 0.5e-6, double umax = 10e3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Control> steps(n);
  for (auto& c : steps) {
    double a, b;
    do {
      a = u(rng);
      b = u(rng);
    } while (a * a + b * b > 1.0);
    c = {a * umax, b * umax};
  }
  return PulseShape(dt, umax, std::move(steps));
}

/// exp([r]x) = I + sin(t)/t [r]x + (1 - cos t)/t^2 [r]x^2 with t = |r|.
inline Mat3 rodrigues_matrix(const Vec3& r) {
  const double t = norm(r);
  Mat3 K;
  K(0, 1) = -r.z;
  K(0, 2) = r.y;
  K(1, 0) = r.z;
  K(1, 2) = -r.x;
  K(2, 0) = -r.y;
  K(2, 1) = r.x;
  if (t == 0.0) return Mat3::identity();
  const double a = std::sin(t) / t, b = (1.0 - std::cos(t)) / (t * t);
  const Mat3 K2 = K * K;
  Mat3 out = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) += a * K(i, j) + b * K2(i, j);
  return out;
}

/// Per-step oracle propagator: product of step matrices, later steps on the left.
inline Mat3 oracle_propagator(const PulseShape& p, double omega, double scale = 1.0) {
  Mat3 acc = Mat3::identity();
  const double two_pi = 2.0 * std::acos(-1.0);
  for (const auto& c : p.steps()) {
    const Vec3 r{two_pi * scale * c.ux * p.dt(), two_pi * scale * c.uy * p.dt(), omega * p.dt()};
    acc = rodrigues_matrix(r) * acc;
  }
  return acc;
}

/// Rz(a) Ry(b) Rz(c) from elementary matrices.
inline Mat3 zyz_matrix(double alpha, double beta, double gamma) {
  const auto rz = [](double t) {
    Mat3 m = Mat3::identity();
    m(0, 0) = std::cos(t);
    m(0, 1) = -std::sin(t);
    m(1, 0) = std::sin(t);
    m(1, 1) = std::cos(t);
    return m;
  };
  Mat3 ry = Mat3::identity();
  ry(0, 0) = std::cos(beta);
  ry(0, 2) = std::sin(beta);
  ry(2, 0) = -std::sin(beta);
  ry(2, 2) = std::cos(beta);
  return rz(alpha) * ry * rz(gamma);
}

}  // namespace coop::test
