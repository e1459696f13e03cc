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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coop/euler.hpp"
#include "coop/grid.hpp"
#include "coop/pulse.hpp"
#include "coop/rotation.hpp"
#include "coop/transforms.hpp"
#include "coop/vec3.hpp"

namespace coop {

inline BlochVector sqf(const BlochVector& m) { return {m.x, m.y, 0.0}; }
inline BlochVector zqf(const BlochVector& m) { return {0.0, 0.0, m.z}; }

/// Two-pulse sequence S1 - tau - S2 evaluated over a grid of offsets and scales.
struct RamseyTask {
  PulseShape pulse1;
  PulseShape pulse2;
  OffsetGrid grid;
  double R = 0.0;       // relative slope the delay was derived from
  double delta = 0.0;   // s; target fringe is s_R cos(omega (tau + delta))
  int s_R = 1;          // +1 or -1
  bool allow_unequal_durations = false;

  /// Delays used for the tau-averaged variant; empty means the single point tau = -delta.
  std::vector<double> taus;
  double w_A = 1.0;
  double w_phi = 1.0;

  /// Throws ValidationError on s_R outside {+1,-1} or (unless allowed) unequal durations.
  void validate() const;
};

/// delta = 2 R T, the symmetric-duration configuration.
inline double delta_from_slope(double R, double T) { return 2.0 * R * T; }

/// Builds S - tau - S' with S' = apply_transform(S, kind) and delta = 2 R T.
RamseyTask make_construction(const PulseShape& s, TransformKind kind, const OffsetGrid& grid, double R,
                             int s_R = 1);

/// Final z magnetization of S2 . Rz(omega tau) . SQF . S1 applied to (0,0,1).
double fringe_point(const Rotation& s1, const Rotation& s2, double omega, double tau);

/// Fringe for precomputed propagators, one pair per offset.
std::vector<double> fringe_from_rotations(std::span<const Rotation> s1, std::span<const Rotation> s2,
                                          std::span<const double> omegas, double tau);

/// M_z^final over the grid, laid out [scale][offset].
std::vector<double> simulate_fringe(const RamseyTask& task, double tau);

/// -sin(beta1) sin(beta2) cos(omega tau + alpha1 + gamma2) per offset. Gimbal-locked
/// offsets of either profile are reported in `gimbal` when provided.
std::vector<double> analytic_fringe(const EulerProfile& p1, const EulerProfile& p2, double tau,
                                    std::vector<std::uint8_t>* gimbal = nullptr);

/// Linear / nonlinear and symmetric / antisymmetric split of an unwrapped angle track.
struct AlphaDecomposition {
  double duration = 0.0;
  double r_fit = 0.0;
  double r_stderr = 0.0;
  std::vector<double> linear;            // omega R T
  std::vector<double> nonlinear;         // track - linear
  std::vector<double> symmetric;         // (a(w) + a(-w)) / 2, also the symmetric nonlinear part
  std::vector<double> antisymmetric;     // (a(w) - a(-w)) / 2
  std::vector<double> antisymmetric_nl;  // antisymmetric - linear
};

enum class AngleTrack { Alpha, Gamma };

/// R_fit is the least-squares slope of the antisymmetric part against omega T
/// through the origin, restricted to |nu| <= fit_nu_max when given.
/// Throws ValidationError on an asymmetric grid and NumericalError when the
/// track failed to unwrap.
AlphaDecomposition decompose_alpha(const EulerProfile& profile, AngleTrack which = AngleTrack::Alpha,
                                   std::optional<double> fit_nu_max = std::nullopt);

/// delta = R_alpha(1) T(1) + R_gamma(2) T(2) from the two profiles.
double derived_delta(const EulerProfile& p1, const EulerProfile& p2,
                     std::optional<double> fit_nu_max = std::nullopt);

/// Pair quality s_R Re(z1 z2~ e^{-i omega delta}) with z = Mx + i My of the
/// post-SQF vectors M1 (after S1) and M2~ (symmetry-adapted second pulse).
double quality_point(const BlochVector& m1, const BlochVector& m2_tilde, double omega, double delta,
                     int s_R = 1);

/// Transverse part of the symmetry-adapted second-pulse vector, (S2^tr_ip) e_z,
/// computed from S2 alone: (S2^T e_z) with y negated.
BlochVector adapted_second_vector(const Rotation& s2);

/// Per-point figures for one (offset, scale).
struct QualityPoint {
  double A = 0.0;
  double dphi = 0.0;  // wrapped to (-pi, pi]
  double phi_d = 0.0;
  double phi_a = 0.0;
  double phi_b = 0.0;
  double phi_e = 0.0;
  double phi_sat = 0.0;  // of pulse 1
  bool gimbal = false;
};

struct QualityReport {
  std::vector<double> nus;
  std::vector<double> scales;
  /// Laid out [scale][offset].
  std::vector<QualityPoint> points;

  double phi = 0.0;  // mean of phi_d
  double phi_a = 0.0;
  double phi_b = 0.0;
  double phi_e = 0.0;
  double phi_sat = 0.0;

  const QualityPoint& at(std::size_t scale_index, std::size_t offset_index) const {
    return points[scale_index * nus.size() + offset_index];
  }
};

/// A and dphi come from the Euler angles of both propagators, phi_d = A cos(dphi);
/// averages are uniform over offsets and scales.
QualityReport quality_scan(const RamseyTask& task);

/// Residuals, delay and fringe sign for the construction S - tau - S'.
struct Table2Check {
  double residual = 0.0;
  double delta = 0.0;
  int s_R = 1;
};

Table2Check check_table2(const EulerProfile& profile, TransformKind kind,
                         std::optional<double> fit_nu_max = std::nullopt);

}  // namespace coop
