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

#include "coop/ramsey.hpp"

#include <algorithm>
#include <cmath>

#include "coop/errors.hpp"

namespace coop {

void RamseyTask::validate() const {
  if (s_R != 1 && s_R != -1) throw ValidationError("s_R must be +1 or -1");
  if (!allow_unequal_durations && pulse1.duration() != pulse2.duration())
    throw ValidationError("pulse durations differ; enable unequal durations explicitly");
  if (!std::isfinite(delta)) throw ValidationError("delta must be finite");
  if (!(w_A >= 0.0) || !(w_phi >= 0.0)) throw ValidationError("quality weights must be non-negative");
}

RamseyTask make_construction(const PulseShape& s, TransformKind kind, const OffsetGrid& grid, double R,
                             int s_R) {
  return RamseyTask{.pulse1 = s,
                    .pulse2 = apply_transform(s, kind),
                    .grid = grid,
                    .R = R,
                    .delta = delta_from_slope(R, s.duration()),
                    .s_R = s_R,
                    .allow_unequal_durations = false,
                    .taus = {},
                    .w_A = 1.0,
                    .w_phi = 1.0};
}

double fringe_point(const Rotation& s1, const Rotation& s2, double omega, double tau) {
  const BlochVector m = sqf(s1.apply(kUnitZ));
  return zqf(s2.apply(rot_z(omega * tau).apply(m))).z;
}

std::vector<double> fringe_from_rotations(std::span<const Rotation> s1, std::span<const Rotation> s2,
                                          std::span<const double> omegas, double tau) {
  if (s1.size() != omegas.size() || s2.size() != omegas.size())
    throw ValidationError("one propagator pair per offset is required");
  std::vector<double> out(omegas.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) out[j] = fringe_point(s1[j], s2[j], omegas[j], tau);
  return out;
}

std::vector<double> simulate_fringe(const RamseyTask& task, double tau) {
  task.validate();
  std::vector<double> out;
  out.reserve(task.grid.num_points());
  for (double s : task.grid.scales())
    for (double w : task.grid.omegas())
      out.push_back(fringe_point(propagate(task.pulse1, w, s), propagate(task.pulse2, w, s), w, tau));
  return out;
}

std::vector<double> analytic_fringe(const EulerProfile& p1, const EulerProfile& p2, double tau,
                                    std::vector<std::uint8_t>* gimbal) {
  if (p1.nus != p2.nus) throw ValidationError("profiles must share one offset grid");
  const std::size_t n = p1.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = -std::sin(p1.beta[j]) * std::sin(p2.beta[j]) * std::cos(p1.omegas[j] * tau + p1.alpha[j] + p2.gamma[j]);
  if (gimbal) {
    gimbal->assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) (*gimbal)[j] = (p1.gimbal[j] || p2.gimbal[j]) ? 1 : 0;
  }
  return out;
}

AlphaDecomposition decompose_alpha(const EulerProfile& p, AngleTrack which, std::optional<double> fit_nu_max) {
  if (!p.is_symmetric()) throw ValidationError("angle decomposition needs a symmetric offset grid");
  const bool ok = which == AngleTrack::Alpha ? p.alpha_unwrap_ok : p.gamma_unwrap_ok;
  if (!ok) throw NumericalError("angle track failed to unwrap; refine the offset grid");
  const auto& a = which == AngleTrack::Alpha ? p.alpha : p.gamma;
  const std::size_t n = p.size();
  const double T = p.duration;

  AlphaDecomposition d;
  d.duration = T;
  d.symmetric.resize(n);
  d.antisymmetric.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = p.mirror_index(j);
    d.symmetric[j] = 0.5 * (a[j] + a[m]);
    d.antisymmetric[j] = 0.5 * (a[j] - a[m]);
  }

  double sxy = 0.0, sxx = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (fit_nu_max && std::abs(p.nus[j]) > *fit_nu_max) continue;
    const double x = p.omegas[j] * T;
    sxy += x * d.antisymmetric[j];
    sxx += x * x;
    ++used;
  }
  if (sxx > 0.0) {
    d.r_fit = sxy / sxx;
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (fit_nu_max && std::abs(p.nus[j]) > *fit_nu_max) continue;
      const double r = d.antisymmetric[j] - d.r_fit * p.omegas[j] * T;
      ss += r * r;
    }
    d.r_stderr = used > 1 ? std::sqrt(ss / static_cast<double>(used - 1) / sxx) : 0.0;
  }

  d.linear.resize(n);
  d.nonlinear.resize(n);
  d.antisymmetric_nl.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    d.linear[j] = p.omegas[j] * d.r_fit * T;
    d.nonlinear[j] = a[j] - d.linear[j];
    d.antisymmetric_nl[j] = d.antisymmetric[j] - d.linear[j];
  }
  return d;
}

double derived_delta(const EulerProfile& p1, const EulerProfile& p2, std::optional<double> fit_nu_max) {
  const auto a1 = decompose_alpha(p1, AngleTrack::Alpha, fit_nu_max);
  const auto g2 = decompose_alpha(p2, AngleTrack::Gamma, fit_nu_max);
  return a1.r_fit * p1.duration + g2.r_fit * p2.duration;
}

double quality_point(const BlochVector& m1, const BlochVector& m2, double omega, double delta, int s_R) {
  const double c = std::cos(omega * delta), s = std::sin(omega * delta);
  const double v = (m1.x * m2.x - m1.y * m2.y) * c + (m1.x * m2.y + m1.y * m2.x) * s;
  return s_R * v;
}

BlochVector adapted_second_vector(const Rotation& s2) {
  const Mat3 r = s2.matrix();
  return {r(2, 0), -r(2, 1), r(2, 2)};
}

QualityReport quality_scan(const RamseyTask& task) {
  task.validate();
  const auto& grid = task.grid;
  QualityReport rep;
  rep.nus.assign(grid.nus().begin(), grid.nus().end());
  rep.scales.assign(grid.scales().begin(), grid.scales().end());
  rep.points.reserve(grid.num_points());

  const std::vector<double> taus = task.taus.empty() ? std::vector<double>{-task.delta} : task.taus;
  for (double scale : grid.scales()) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double w = grid.omega(j);
      const Rotation s1 = propagate(task.pulse1, w, scale);
      const Rotation s2 = propagate(task.pulse2, w, scale);
      const auto e1 = euler_from_matrix(s1.matrix());
      const auto e2 = euler_from_matrix(s2.matrix());

      QualityPoint q;
      q.gimbal = e1.gimbal || e2.gimbal;
      const double a_signed = -task.s_R * std::sin(e1.angles.beta) * std::sin(e2.angles.beta);
      double phase = e1.angles.alpha + e2.angles.gamma - w * task.delta;
      if (a_signed < 0.0) phase += kPi;
      q.A = std::abs(a_signed);
      q.dphi = wrap_angle(phase);
      q.phi_d = q.A * std::cos(q.dphi);
      q.phi_e = 1.0 - task.w_A * (1.0 - q.A) * (1.0 - q.A) - task.w_phi * q.dphi * q.dphi;

      double dev = 0.0;
      for (double tau : taus) {
        const double r = fringe_point(s1, s2, w, tau) - task.s_R * std::cos(w * (tau + task.delta));
        dev += r * r;
      }
      q.phi_a = 1.0 - dev / static_cast<double>(taus.size());
      q.phi_b = task.s_R * fringe_point(s1, s2, w, -task.delta);
      const double mz = s1.apply(kUnitZ).z;
      q.phi_sat = 1.0 - mz * mz;
      rep.points.push_back(q);
    }
  }

  const double n = static_cast<double>(rep.points.size());
  for (const auto& q : rep.points) {
    rep.phi += q.phi_d;
    rep.phi_a += q.phi_a;
    rep.phi_b += q.phi_b;
    rep.phi_e += q.phi_e;
    rep.phi_sat += q.phi_sat;
  }
  rep.phi /= n;
  rep.phi_a /= n;
  rep.phi_b /= n;
  rep.phi_e /= n;
  rep.phi_sat /= n;
  return rep;
}

Table2Check check_table2(const EulerProfile& p, TransformKind kind, std::optional<double> fit_nu_max) {
  const auto a = decompose_alpha(p, AngleTrack::Alpha, fit_nu_max);
  const bool needs_gamma =
      kind == TransformKind::Identity || kind == TransformKind::PhaseShiftPi || kind == TransformKind::InvertPhase;
  const double T = p.duration;
  Table2Check c;
  c.s_R = (kind == TransformKind::Identity || kind == TransformKind::TimeReverse) ? -1 : 1;

  const std::size_t n = p.size();
  if (needs_gamma) {
    const auto g = decompose_alpha(p, AngleTrack::Gamma, fit_nu_max);
    c.delta = (a.r_fit + g.r_fit) * T;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = kind == TransformKind::InvertPhase ? a.nonlinear[j] - g.nonlinear[p.mirror_index(j)]
                                                          : a.nonlinear[j] + g.nonlinear[j];
      c.residual = std::max(c.residual, std::abs(r));
    }
  } else {
    c.delta = 2.0 * a.r_fit * T;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = kind == TransformKind::TimeReverseInvertPhase ? a.nonlinear[j]
                                                                     : a.nonlinear[j] - a.nonlinear[p.mirror_index(j)];
      c.residual = std::max(c.residual, std::abs(r));
    }
  }
  return c;
}

}  // namespace coop
