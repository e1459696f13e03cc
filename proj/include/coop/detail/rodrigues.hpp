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

#include <array>
#include <cmath>

namespace coop::detail {

// Coefficients of the rotation exp([v]x) = I + f1 [v]x + f2 [v]x^2 and of the
// left Jacobian J = I + f2 [v]x + f3 [v]x^2, all as functions of theta^2 = |v|^2:
//   f1 = sin(t)/t,  f2 = (1 - cos t)/t^2,  f3 = (t - sin t)/t^3.
// Below kSeriesLimit2 the Taylor series (8 terms, truncation < 1e-19) is used,
// which is also what the SIMD kernels evaluate.

inline constexpr double kSeriesLimit2 = 0.25;  // theta < 0.5 rad

inline constexpr std::array<double, 8> kF1Series = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0};

inline constexpr std::array<double, 8> kF2Series = {
    1.0 / 2.0,
    -1.0 / 24.0,
    1.0 / 720.0,
    -1.0 / 40320.0,
    1.0 / 3628800.0,
    -1.0 / 479001600.0,
    1.0 / 87178291200.0,
    -1.0 / 20922789888000.0};

inline constexpr std::array<double, 8> kF3Series = {
    1.0 / 6.0,
    -1.0 / 120.0,
    1.0 / 5040.0,
    -1.0 / 362880.0,
    1.0 / 39916800.0,
    -1.0 / 6227020800.0,
    1.0 / 1307674368000.0,
    -1.0 / 355687428096000.0};

template <std::size_t N>
constexpr double horner(const std::array<double, N>& c, double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

struct RodriguesCoeffs {
  double f1;
  double f2;
  double f3;
};

inline RodriguesCoeffs rodrigues_coeffs(double theta2) {
  if (theta2 < kSeriesLimit2) {
    return {horner(kF1Series, theta2), horner(kF2Series, theta2), horner(kF3Series, theta2)};
  }
  const double t = std::sqrt(theta2);
  const double s = std::sin(t);
  const double c = std::cos(t);
  return {s / t, (1.0 - c) / theta2, (t - s) / (theta2 * t)};
}

}  // namespace coop::detail
