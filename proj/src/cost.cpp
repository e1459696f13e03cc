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

#include <cmath>
#include <string>

#include "coop/errors.hpp"
#include "coop/grape.hpp"
#include "coop/kernels.hpp"
#include "coop/transforms.hpp"

namespace coop {

std::string_view cost_name(CostKind kind) {
  switch (kind) {
    case CostKind::CoopFilter: return "coop-filter";
    case CostKind::CoopSymmetry: return "coop";
    case CostKind::PP: return "pp";
    case CostKind::UR: return "ur";
    case CostKind::Saturation: return "sat";
    case CostKind::ST: return "st";
  }
  return "?";
}

CostKind parse_cost(std::string_view name) {
  if (name == "coop-filter") return CostKind::CoopFilter;
  if (name == "coop" || name == "coop-symmetry") return CostKind::CoopSymmetry;
  if (name == "pp") return CostKind::PP;
  if (name == "ur") return CostKind::UR;
  if (name == "sat" || name == "saturation") return CostKind::Saturation;
  if (name == "st") return CostKind::ST;
  throw ValidationError("unknown cost family '" + std::string(name) + "'");
}

CostFunction CostFunction::coop_filter(double R, std::vector<double> taus) {
  CostFunction c;
  c.kind = CostKind::CoopFilter;
  c.R = R;
  c.taus = std::move(taus);
  return c;
}

CostFunction CostFunction::coop_symmetry(double R) {
  CostFunction c;
  c.kind = CostKind::CoopSymmetry;
  c.R = R;
  return c;
}

CostFunction CostFunction::pp(double R) {
  CostFunction c;
  c.kind = CostKind::PP;
  c.R = R;
  return c;
}

CostFunction CostFunction::ur(Rotation target) {
  CostFunction c;
  c.kind = CostKind::UR;
  c.ur_target = target;
  return c;
}

CostFunction CostFunction::saturation() {
  CostFunction c;
  c.kind = CostKind::Saturation;
  return c;
}

CostFunction CostFunction::st(std::vector<Vec3> target) {
  CostFunction c;
  c.kind = CostKind::ST;
  c.st_target = std::move(target);
  return c;
}

namespace {

// Structure-of-arrays state for a batch of evaluation points.
struct Batch {
  std::vector<double> omega, scale;
  std::vector<double> x, y, z;
  std::size_t size() const { return omega.size(); }

  void resize(std::size_t n) {
    omega.resize(n);
    scale.resize(n);
    x.assign(n, 0.0);
    y.assign(n, 0.0);
    z.assign(n, 0.0);
  }
};

// Points laid out [scale][offset], `copies` consecutive blocks of the grid.
Batch grid_batch(const OffsetGrid& grid, std::size_t copies = 1) {
  Batch b;
  const std::size_t n = grid.num_points();
  b.resize(n * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t l = 0; l < grid.num_scales(); ++l)
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const std::size_t p = c * n + l * grid.size() + j;
        b.omega[p] = grid.omega(j);
        b.scale[p] = grid.scales()[l];
      }
  return b;
}

void run_forward(const PulseShape& pulse, Batch& b) {
  kernels::forward({pulse.steps().data(), pulse.size(), pulse.dt(), b.omega.data(), b.scale.data(), b.x.data(),
                    b.y.data(), b.z.data(), b.size()});
}

// Consumes m (final magnetization) and l (final costate); on return l holds the
// costate at the pulse start. Accumulates into g.
void run_backward(const PulseShape& pulse, Batch& m, std::vector<double>& lx, std::vector<double>& ly,
                  std::vector<double>& lz, PulseGradient& g) {
  std::vector<double> gx(pulse.size(), 0.0), gy(pulse.size(), 0.0);
  kernels::backward({pulse.steps().data(), pulse.size(), pulse.dt(), m.omega.data(), m.scale.data(), m.x.data(),
                     m.y.data(), m.z.data(), lx.data(), ly.data(), lz.data(), m.size(), gx.data(), gy.data()});
  g.resize(pulse.size());
  for (std::size_t k = 0; k < pulse.size(); ++k) {
    g[k].ux += gx[k];
    g[k].uy += gy[k];
  }
}

void check_finite(double phi) {
  if (!std::isfinite(phi)) throw NumericalError("quality factor is not finite");
}

CostValue single_pulse_cost(const CostFunction& cost, const PulseShape& pulse, const OffsetGrid& grid, bool grad) {
  const std::size_t n = grid.num_points();
  const double w = 1.0 / static_cast<double>(n);
  const double T = pulse.duration();
  if (cost.kind == CostKind::ST && cost.st_target.size() != n)
    throw ValidationError("ST target must hold one vector per grid point");

  Batch b = grid_batch(grid);
  b.z.assign(n, 1.0);
  run_forward(pulse, b);

  std::vector<double> lx(n), ly(n), lz(n);
  double phi = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double v = 0.0;
    switch (cost.kind) {
      case CostKind::Saturation:
        v = 1.0 - b.z[p] * b.z[p];
        lx[p] = 0.0;
        ly[p] = 0.0;
        lz[p] = -2.0 * b.z[p] * w;
        break;
      case CostKind::PP: {
        const double ph = b.omega[p] * cost.R * T;
        const double c = std::cos(ph), s = std::sin(ph);
        v = b.x[p] * c + b.y[p] * s;
        lx[p] = c * w;
        ly[p] = s * w;
        lz[p] = 0.0;
        break;
      }
      case CostKind::ST: {
        const Vec3& t = cost.st_target[p];
        const double dx = b.x[p] - t.x, dy = b.y[p] - t.y, dz = b.z[p] - t.z;
        v = 1.0 - dx * dx - dy * dy - dz * dz;
        lx[p] = -2.0 * dx * w;
        ly[p] = -2.0 * dy * w;
        lz[p] = -2.0 * dz * w;
        break;
      }
      default:
        throw ValidationError("not a single-pulse cost");
    }
    phi += v;
  }
  phi *= w;
  check_finite(phi);

  CostValue out{phi, {}};
  if (grad) {
    out.grad.resize(1);
    run_backward(pulse, b, lx, ly, lz, out.grad[0]);
  }
  return out;
}

void rotate_z(double angle, double& x, double& y) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double nx = c * x - s * y;
  y = s * x + c * y;
  x = nx;
}

CostValue filter_cost(const CostFunction& cost, const PulseShape& s1, const PulseShape& s2, const OffsetGrid& grid,
                      bool grad) {
  const std::size_t n = grid.num_points();
  const double w = 1.0 / static_cast<double>(n);
  const double delta = cost.delta_for(s1.duration());
  const bool tau_list = !cost.taus.empty();
  const std::vector<double> taus = tau_list ? cost.taus : std::vector<double>{-delta};
  const std::size_t nt = taus.size();

  Batch m1 = grid_batch(grid);
  m1.z.assign(n, 1.0);
  run_forward(s1, m1);

  // Replicate per delay: block t holds Rz(omega tau_t) SQF(M1).
  Batch m2 = grid_batch(grid, nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t q = t * n + p;
      m2.x[q] = m1.x[p];
      m2.y[q] = m1.y[p];
      m2.z[q] = 0.0;
      rotate_z(m2.omega[q] * taus[t], m2.x[q], m2.y[q]);
    }
  run_forward(s2, m2);

  std::vector<double> lx(n * nt, 0.0), ly(n * nt, 0.0), lz(n * nt, 0.0);
  double phi = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double v = 0.0;
    if (!tau_list) {
      v = cost.s_R * m2.z[p];
      lz[p] = cost.s_R * w;
    } else {
      double dev = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t q = t * n + p;
        const double r = m2.z[q] - cost.s_R * std::cos(m2.omega[q] * (taus[t] + delta));
        dev += r * r;
        lz[q] = -2.0 * r / static_cast<double>(nt) * w;
      }
      v = 1.0 - dev / static_cast<double>(nt);
    }
    phi += v;
  }
  phi *= w;
  check_finite(phi);

  CostValue out{phi, {}};
  if (!grad) return out;
  out.grad.resize(2);
  run_backward(s2, m2, lx, ly, lz, out.grad[1]);

  std::vector<double> l1x(n, 0.0), l1y(n, 0.0), l1z(n, 0.0);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t q = t * n + p;
      double x = lx[q], y = ly[q];
      rotate_z(-m2.omega[q] * taus[t], x, y);
      l1x[p] += x;
      l1y[p] += y;
    }
  run_backward(s1, m1, l1x, l1y, l1z, out.grad[0]);
  return out;
}

}  // namespace

CostValue coop_symmetry_adapted(const CostFunction& cost, const PulseShape& s1, const PulseShape& s2t,
                                const OffsetGrid& grid, bool grad) {
  const std::size_t n = grid.num_points();
  const double w = 1.0 / static_cast<double>(n);
  const double delta = cost.delta_for(s1.duration());
  const double sr = cost.s_R;

  Batch m1 = grid_batch(grid), m2 = grid_batch(grid);
  m1.z.assign(n, 1.0);
  m2.z.assign(n, 1.0);
  run_forward(s1, m1);
  run_forward(s2t, m2);

  std::vector<double> l1x(n), l1y(n), l1z(n, 0.0), l2x(n), l2y(n), l2z(n, 0.0);
  double phi = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double c = std::cos(m1.omega[p] * delta), s = std::sin(m1.omega[p] * delta);
    // u = s_R z2~ e^{-i omega delta}, q = s_R z1 e^{-i omega delta}
    const double ur = sr * (m2.x[p] * c + m2.y[p] * s), ui = sr * (m2.y[p] * c - m2.x[p] * s);
    const double qr = sr * (m1.x[p] * c + m1.y[p] * s), qi = sr * (m1.y[p] * c - m1.x[p] * s);
    const double pr = m1.x[p] * ur - m1.y[p] * ui;
    const double pi = m1.x[p] * ui + m1.y[p] * ur;

    double cr = 1.0, ci = 0.0;
    double v = pr;
    if (cost.weighted) {
      const double a = std::hypot(pr, pi);
      const double dphi = std::atan2(pi, pr);
      v = 1.0 - cost.w_A * (1.0 - a) * (1.0 - a) - cost.w_phi * dphi * dphi;
      if (a > 1e-300) {
        const double ka = 2.0 * cost.w_A * (1.0 - a) / a;
        const double kp = 2.0 * cost.w_phi * dphi / (a * a);
        cr = ka * pr + kp * pi;
        ci = ka * pi - kp * pr;
      } else {
        cr = ci = 0.0;
      }
    }
    phi += v;
    l1x[p] = w * (cr * ur + ci * ui);
    l1y[p] = w * (-cr * ui + ci * ur);
    l2x[p] = w * (cr * qr + ci * qi);
    l2y[p] = w * (-cr * qi + ci * qr);
  }
  phi *= w;
  check_finite(phi);

  CostValue out{phi, {}};
  if (!grad) return out;
  out.grad.resize(2);
  run_backward(s1, m1, l1x, l1y, l1z, out.grad[0]);
  run_backward(s2t, m2, l2x, l2y, l2z, out.grad[1]);
  return out;
}

PulseGradient adapted_to_physical(const PulseGradient& g) {
  const std::size_t n = g.size();
  PulseGradient out(n);
  for (std::size_t k = 0; k < n; ++k) out[n - 1 - k] = {g[k].ux, -g[k].uy};
  return out;
}

CostValue ur_cost(const PulseShape& pulse, const OffsetGrid& grid, const Rotation& target, bool grad) {
  const std::size_t n = grid.num_points();
  const double w = 1.0 / static_cast<double>(n);
  const Mat3 t = target.matrix();

  Batch b = grid_batch(grid, 3);
  for (std::size_t p = 0; p < n; ++p) {
    b.x[p] = 1.0;
    b.y[n + p] = 1.0;
    b.z[2 * n + p] = 1.0;
  }
  run_forward(pulse, b);

  std::vector<double> lx(3 * n), ly(3 * n), lz(3 * n);
  double phi = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) {
      const std::size_t q = static_cast<std::size_t>(i) * n + p;
      // column i of the target is R_target e_i
      tr += b.x[q] * t(0, i) + b.y[q] * t(1, i) + b.z[q] * t(2, i);
      lx[q] = 0.25 * w * t(0, i);
      ly[q] = 0.25 * w * t(1, i);
      lz[q] = 0.25 * w * t(2, i);
    }
    phi += 0.25 * (1.0 + tr);
  }
  phi *= w;
  check_finite(phi);

  CostValue out{phi, {}};
  if (grad) {
    out.grad.resize(1);
    run_backward(pulse, b, lx, ly, lz, out.grad[0]);
  }
  return out;
}

CostValue evaluate_cost(const CostFunction& cost, std::span<const PulseShape> pulses, const OffsetGrid& grid,
                        bool grad) {
  if (pulses.size() != cost.num_pulses())
    throw ValidationError(std::string(cost_name(cost.kind)) + " expects " + std::to_string(cost.num_pulses()) +
                          " pulse(s)");
  if (cost.s_R != 1 && cost.s_R != -1) throw ValidationError("s_R must be +1 or -1");
  switch (cost.kind) {
    case CostKind::CoopFilter:
      return filter_cost(cost, pulses[0], pulses[1], grid, grad);
    case CostKind::CoopSymmetry: {
      const PulseShape s2t = apply_transform(pulses[1], TransformKind::TimeReverseInvertPhase);
      CostValue v = coop_symmetry_adapted(cost, pulses[0], s2t, grid, grad);
      if (grad) v.grad[1] = adapted_to_physical(v.grad[1]);
      return v;
    }
    case CostKind::UR:
      return ur_cost(pulses[0], grid, cost.ur_target, grad);
    case CostKind::PP:
    case CostKind::Saturation:
    case CostKind::ST:
      return single_pulse_cost(cost, pulses[0], grid, grad);
  }
  throw ValidationError("unknown cost kind");
}

}  // namespace coop
