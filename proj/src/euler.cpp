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

#include "coop/euler.hpp"

#include <cmath>

#include "coop/errors.hpp"

namespace coop {

Mat3 euler_matrix(const EulerAngles& e) {
  const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
  Mat3 r;
  r.m = {{{ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb},
          {sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb},
          {-sb * cg, sb * sg, cb}}};
  return r;
}

EulerExtraction euler_from_matrix(const Mat3& r) {
  EulerExtraction out;
  const double sb = std::hypot(r(0, 2), r(1, 2));
  out.angles.beta = std::atan2(sb, r(2, 2));
  if (sb <= kGimbalThreshold) {
    out.gimbal = true;
    out.angles.gamma = 0.0;
    if (r(2, 2) > 0.0)
      out.angles.alpha = std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
    else
      out.angles.alpha = std::atan2(-(r(0, 1) + r(1, 0)), r(1, 1) - r(0, 0));
    return out;
  }
  out.angles.alpha = std::atan2(r(1, 2), r(0, 2));
  out.angles.gamma = std::atan2(r(2, 1), -r(2, 0));
  return out;
}

double wrap_angle(double a) { return a + kTwoPi * std::floor((kPi - a) / kTwoPi); }

Unwrapped unwrap(std::span<const double> track) {
  Unwrapped out;
  out.angles.assign(track.begin(), track.end());
  for (std::size_t j = 1; j < track.size(); ++j) {
    const double diff = track[j] - out.angles[j - 1];
    const double k = std::floor((kPi - diff) / kTwoPi);
    const double step = diff + kTwoPi * k;
    if (std::abs(step) >= kPi - 1e-12) out.tie = true;
    out.angles[j] = track[j] + kTwoPi * k;
  }
  return out;
}

bool EulerProfile::is_symmetric() const {
  const std::size_t n = nus.size();
  for (std::size_t j = 0; j < n; ++j)
    if (nus[j] != -nus[n - 1 - j]) return false;
  return true;
}

namespace {

std::vector<double> omegas_of(std::span<const double> nus) {
  std::vector<double> w;
  w.reserve(nus.size());
  for (double nu : nus) w.push_back(kTwoPi * nu);
  return w;
}

// (beta, gamma, alpha) -> (-beta, gamma + pi, alpha + pi) describes the same rotation.
void flip_branch(EulerProfile& p, std::size_t j) {
  p.beta[j] = -p.beta[j];
  p.gamma[j] += kPi;
  p.alpha[j] += kPi;
}

}  // namespace

EulerProfile make_profile(std::span<const double> nus_hz, double duration, std::vector<double> gamma,
                          std::vector<double> beta, std::vector<double> alpha, double scale) {
  const std::size_t n = nus_hz.size();
  if (gamma.size() != n || beta.size() != n || alpha.size() != n)
    throw ValidationError("Euler tracks must match the offset count");
  EulerProfile p;
  p.nus.assign(nus_hz.begin(), nus_hz.end());
  p.omegas = omegas_of(nus_hz);
  p.scale = scale;
  p.duration = duration;
  p.gamma = std::move(gamma);
  p.beta = std::move(beta);
  p.alpha = std::move(alpha);
  p.gimbal.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(std::sin(p.beta[j])) <= kGimbalThreshold) p.gimbal[j] = 1;
  return p;
}

EulerProfile profile_from_rotations(std::span<const double> nus_hz, std::span<const Rotation> rotations,
                                    double duration, double scale, BetaBranch branch) {
  const std::size_t n = nus_hz.size();
  if (rotations.size() != n) throw ValidationError("one rotation per offset is required");
  EulerProfile p;
  p.nus.assign(nus_hz.begin(), nus_hz.end());
  p.omegas = omegas_of(nus_hz);
  p.scale = scale;
  p.duration = duration;
  p.gamma.resize(n);
  p.beta.resize(n);
  p.alpha.resize(n);
  p.gimbal.assign(n, 0);
  bool any_gimbal = false;
  for (std::size_t j = 0; j < n; ++j) {
    const auto e = euler_from_matrix(rotations[j].matrix());
    p.gamma[j] = e.angles.gamma;
    p.beta[j] = e.angles.beta;
    p.alpha[j] = e.angles.alpha;
    p.gimbal[j] = e.gimbal ? 1 : 0;
    any_gimbal = any_gimbal || e.gimbal;
  }

  switch (branch) {
    case BetaBranch::Positive:
      break;
    case BetaBranch::Negative:
      for (std::size_t j = 0; j < n; ++j) flip_branch(p, j);
      break;
    case BetaBranch::Continuous:
      for (std::size_t j = 1; j < n; ++j) {
        const double predicted = j >= 2 ? 2.0 * p.beta[j - 1] - p.beta[j - 2] : p.beta[j - 1];
        if (std::abs(-p.beta[j] - predicted) < std::abs(p.beta[j] - predicted)) flip_branch(p, j);
      }
      break;
  }

  auto g = unwrap(p.gamma);
  auto a = unwrap(p.alpha);
  p.gamma = std::move(g.angles);
  p.alpha = std::move(a.angles);
  p.gamma_unwrap_ok = !g.tie && !any_gimbal;
  p.alpha_unwrap_ok = !a.tie && !any_gimbal;
  return p;
}

EulerProfile extract_euler(const PulseShape& pulse, const OffsetGrid& grid, double scale, BetaBranch branch) {
  if (!grid.spacing_ok_for(pulse.duration()))
    throw ValidationError("offset spacing exceeds 1/(4T); refine the grid for phase unwrapping");
  std::vector<Rotation> rots;
  rots.reserve(grid.size());
  for (double w : grid.omegas()) rots.push_back(propagate(pulse, w, scale));
  return profile_from_rotations(grid.nus(), rots, pulse.duration(), scale, branch);
}

}  // namespace coop
