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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <exception>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include "coop/errors.hpp"
#include "coop/euler.hpp"
#include "coop/grape.hpp"
#include "coop/ramsey.hpp"
#include "coop/transforms.hpp"

namespace coop {

unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("COOP_PULSE_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

// Radial clip of normalized controls to the unit disc.
void clip_unit(double& x, double& y) {
  const double h = std::hypot(x, y);
  if (h > 1.0) {
    x /= h;
    y /= h;
  }
}

void clip_unit(double umax, Control& c) {
  double x = c.ux / umax, y = c.uy / umax;
  clip_unit(x, y);
  c.ux = x * umax;
  c.uy = y * umax;
}

}  // namespace

std::vector<PulseShape> random_pulses(std::span<const PulseShape> templates, std::uint64_t seed, double fraction) {
  std::mt19937_64 rng(seed);
  std::vector<PulseShape> out;
  for (const auto& t : templates) {
    std::uniform_real_distribution<double> dist(-fraction * t.umax(), fraction * t.umax());
    std::vector<Control> steps(t.size());
    for (auto& c : steps) {
      c.ux = dist(rng);
      c.uy = dist(rng);
    }
    for (auto& c : steps) clip_unit(t.umax(), c);
    out.emplace_back(t.dt(), t.umax(), std::move(steps));
  }
  return out;
}

PulseShape clip_to_umax(const PulseShape& p) {
  std::vector<Control> steps(p.steps().begin(), p.steps().end());
  for (auto& c : steps) clip_unit(p.umax(), c);
  return PulseShape(p.dt(), p.umax(), std::move(steps));
}

namespace {

// Controls of all pulses flattened as (ux, uy) / umax per step.
struct Layout {
  std::vector<PulseShape> templates;
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& t : templates) n += 2 * t.size();
    return n;
  }

  std::vector<double> pack(std::span<const PulseShape> pulses) const {
    std::vector<double> x;
    x.reserve(size());
    for (const auto& p : pulses)
      for (const auto& c : p.steps()) {
        x.push_back(c.ux / p.umax());
        x.push_back(c.uy / p.umax());
      }
    return x;
  }

  std::vector<PulseShape> unpack(const std::vector<double>& x) const {
    std::vector<PulseShape> out;
    std::size_t i = 0;
    for (const auto& t : templates) {
      std::vector<Control> steps(t.size());
      for (auto& c : steps) {
        c.ux = x[i++] * t.umax();
        c.uy = x[i++] * t.umax();
      }
      out.emplace_back(t.dt(), t.umax(), std::move(steps));
    }
    return out;
  }

  std::vector<double> pack_grad(const std::vector<PulseGradient>& g) const {
    std::vector<double> out;
    out.reserve(size());
    for (std::size_t p = 0; p < templates.size(); ++p)
      for (const auto& c : g[p]) {
        out.push_back(c.ux * templates[p].umax());
        out.push_back(c.uy * templates[p].umax());
      }
    return out;
  }
};

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

using Objective = std::function<CostValue(const std::vector<PulseShape>&, bool)>;

// Monotone projected ascent shared by optimize_run and optimize_st.
class Ascent {
 public:
  Ascent(Layout layout, std::vector<double> x, const OptimizerConfig& cfg)
      : layout_(std::move(layout)), x_(std::move(x)), cfg_(cfg) {}

  // Evaluates phi and gradient at the current point.
  void refresh(const Objective& f) {
    const CostValue v = f(layout_.unpack(x_), true);
    phi_ = v.phi;
    g_ = layout_.pack_grad(v.grad);
  }

  // One accepted step; false when the line search cannot improve phi. A failed
  // quasi-Newton direction (often cut off by the amplitude clip) falls back to
  // the plain gradient before giving up.
  bool step(const Objective& f) {
    if (cfg_.rule == UpdateRule::Lbfgs && !memory_.empty()) {
      const std::vector<double> d = direction();
      if (dotv(d, g_) > 0.0 && search(f, d, 1.0)) return true;
      memory_.clear();
    }
    if (!(dotv(g_, g_) > 0.0)) return false;
    const double eta0 = eta_ > 0.0 ? 2.0 * eta_ : 0.05 / max_abs(g_);
    return search(f, g_, eta0);
  }

  double phi() const { return phi_; }
  double grad_norm() const { return std::sqrt(dotv(g_, g_)); }
  double eta() const { return eta_; }
  const std::vector<double>& x() const { return x_; }
  const Layout& layout() const { return layout_; }
  // The objective changed (ST target); curvature pairs no longer apply.
  void reset_memory() { memory_.clear(); }

 private:
  struct Pair {
    std::vector<double> s, y;
    double rho;
  };

  // Backtracking along d from eta with the projected Armijo test.
  bool search(const Objective& f, const std::vector<double>& d, double eta) {
    const bool quasi_newton = cfg_.rule == UpdateRule::Lbfgs && !memory_.empty();
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> xn(x_.size());
      for (std::size_t i = 0; i < x_.size(); i += 2) {
        xn[i] = x_[i] + eta * d[i];
        xn[i + 1] = x_[i + 1] + eta * d[i + 1];
        clip_unit(xn[i], xn[i + 1]);
      }
      std::vector<double> dx(x_.size());
      for (std::size_t i = 0; i < x_.size(); ++i) dx[i] = xn[i] - x_[i];
      const double pred = dotv(g_, dx);
      const double phin = f(layout_.unpack(xn), false).phi;
      if (phin > phi_ && phin >= phi_ + 1e-4 * pred) {
        accept(f, std::move(xn), std::move(dx), quasi_newton ? eta_ : eta);
        return true;
      }
      eta *= 0.5;
      if (eta * max_abs(d) < 1e-15) break;
    }
    return false;
  }

  std::vector<double> direction() const {
    if (cfg_.rule != UpdateRule::Lbfgs || memory_.empty()) return g_;
    // Two-loop recursion on f = -phi; returns the ascent direction H g.
    std::vector<double> q = g_;
    std::vector<double> alpha(memory_.size());
    for (std::size_t i = memory_.size(); i-- > 0;) {
      alpha[i] = memory_[i].rho * dotv(memory_[i].s, q);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * memory_[i].y[k];
    }
    const auto& last = memory_.back();
    const double gamma = dotv(last.s, last.y) / dotv(last.y, last.y);
    for (double& v : q) v *= gamma;
    for (std::size_t i = 0; i < memory_.size(); ++i) {
      const double beta = memory_[i].rho * dotv(memory_[i].y, q);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] += memory_[i].s[k] * (alpha[i] - beta);
    }
    return q;
  }

  void accept(const Objective& f, std::vector<double> xn, std::vector<double> dx, double eta) {
    const std::vector<double> g_old = g_;
    x_ = std::move(xn);
    refresh(f);
    eta_ = eta;
    if (cfg_.rule == UpdateRule::Lbfgs) {
      // y for f = -phi is -(g_new - g_old)
      std::vector<double> y(g_.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = g_old[i] - g_[i];
      const double sy = dotv(dx, y);
      if (sy > 1e-12 * std::sqrt(dotv(dx, dx) * dotv(y, y))) {
        memory_.push_back({std::move(dx), std::move(y), 1.0 / sy});
        if (memory_.size() > cfg_.lbfgs_memory) memory_.pop_front();
      }
    }
  }

  Layout layout_;
  std::vector<double> x_;
  std::vector<double> g_;
  double phi_ = 0.0;
  double eta_ = 0.0;
  const OptimizerConfig& cfg_;
  std::deque<Pair> memory_;
};

bool stalled(const std::vector<double>& hist, const OptimizerConfig& cfg) {
  const std::size_t w = cfg.stall_window;
  if (w == 0 || hist.size() <= w) return false;
  const double now = hist.back(), then = hist[hist.size() - 1 - w];
  return std::abs(now - then) <= cfg.tol * std::max(std::abs(now), 1e-300);
}

}  // namespace

OptimizerState optimize_run(std::span<const PulseShape> start, const CostFunction& cost, const OffsetGrid& grid,
                            const OptimizerConfig& cfg) {
  Layout layout{{start.begin(), start.end()}};
  std::vector<PulseShape> clipped;
  for (const auto& p : start) clipped.push_back(clip_to_umax(p));
  const Objective f = [&](const std::vector<PulseShape>& p, bool grad) { return evaluate_cost(cost, p, grid, grad); };

  Ascent opt(layout, layout.pack(clipped), cfg);
  opt.refresh(f);
  OptimizerState st;
  st.phi_history.push_back(opt.phi());
  const double gtol = cfg.grad_tol * static_cast<double>(grid.num_points());
  st.stop_reason = "iteration cap";
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (opt.grad_norm() < gtol) {
      st.stop_reason = "gradient norm";
      break;
    }
    if (!opt.step(f)) {
      st.stop_reason = "line search";
      break;
    }
    ++st.iterations;
    st.phi_history.push_back(opt.phi());
    if (stalled(st.phi_history, cfg)) {
      st.stop_reason = "stalled";
      break;
    }
  }
  st.pulses = layout.unpack(opt.x());
  st.phi = opt.phi();
  st.grad_norm = opt.grad_norm();
  st.step_size = opt.eta();
  return st;
}

namespace {

template <class Run>
std::vector<OptimizerState> run_restarts(std::size_t count, unsigned threads, Run run) {
  std::vector<OptimizerState> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < count; r = next++) {
      try {
        results[r] = run(r);
      } catch (const NumericalError& e) {
        results[r].failed = true;
        results[r].restart_index = r;
        results[r].stop_reason = e.what();
        std::clog << "restart " << r << " aborted: " << e.what() << '\n';
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(worker_count(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::size_t best_index(const std::vector<OptimizerState>& rs) {
  std::size_t best = rs.size();
  for (std::size_t r = 0; r < rs.size(); ++r)
    if (!rs[r].failed && (best == rs.size() || rs[r].phi > rs[best].phi)) best = r;
  if (best == rs.size()) throw NumericalError("every optimization restart failed");
  return best;
}

}  // namespace

OptimizerState optimize(std::span<const PulseShape> initial, const CostFunction& cost, const OffsetGrid& grid,
                        const OptimizerConfig& cfg) {
  if (initial.size() != cost.num_pulses()) throw ValidationError("wrong number of initial pulses for this cost");
  if (cost.num_pulses() == 2 && initial[0].duration() != initial[1].duration())
    throw ValidationError("pulse durations differ");
  const std::size_t count = cfg.randomize ? std::max<std::size_t>(cfg.restarts, 1) : 1;
  const std::vector<PulseShape> init(initial.begin(), initial.end());
  auto results = run_restarts(count, cfg.threads, [&](std::size_t r) {
    const auto start = cfg.randomize ? random_pulses(init, cfg.seed + r, cfg.init_fraction) : init;
    OptimizerState s = optimize_run(start, cost, grid, cfg);
    s.seed = cfg.seed + r;
    s.restart_index = r;
    return s;
  });
  return results[best_index(results)];
}

StTarget st_target(const PulseShape& pulse, const OffsetGrid& grid, std::optional<double> fixed_R) {
  if (!grid.is_symmetric()) throw ValidationError("ST targets need a symmetric offset grid");
  if (!grid.spacing_ok_for(pulse.duration()))
    throw ValidationError("offset spacing exceeds 1/(4T); refine the grid for phase unwrapping");
  const std::size_t n = grid.size();
  const double T = pulse.duration();

  std::vector<std::vector<double>> alpha(grid.num_scales());
  for (std::size_t l = 0; l < grid.num_scales(); ++l) {
    std::vector<double> raw(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 m = propagate(pulse, grid.omega(j), grid.scales()[l]).apply(kUnitZ);
      raw[j] = std::atan2(m.y, m.x);
    }
    alpha[l] = unwrap(raw).angles;
  }

  StTarget out;
  if (fixed_R) {
    out.R = *fixed_R;
  } else {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t l = 0; l < grid.num_scales(); ++l)
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.omega(j) * T;
        sxy += x * 0.5 * (alpha[l][j] - alpha[l][grid.mirror_index(j)]);
        sxx += x * x;
      }
    out.R = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  out.target.reserve(grid.num_points());
  for (std::size_t l = 0; l < grid.num_scales(); ++l)
    for (std::size_t j = 0; j < n; ++j) {
      const double sym = 0.5 * (alpha[l][j] + alpha[l][grid.mirror_index(j)]);
      const double ph = grid.omega(j) * out.R * T + sym;
      out.target.push_back({std::cos(ph), std::sin(ph), 0.0});
    }
  return out;
}

namespace {

StResult st_run(const PulseShape& start, const OffsetGrid& grid, const OptimizerConfig& cfg,
                std::optional<double> fixed_R) {
  Layout layout{{start}};
  const std::vector<PulseShape> clipped{clip_to_umax(start)};
  Ascent opt(layout, layout.pack(clipped), cfg);

  StResult res;
  res.state.stop_reason = "iteration cap";
  const double gtol = cfg.grad_tol * static_cast<double>(grid.num_points());
  CostFunction cost;
  Objective f = [&](const std::vector<PulseShape>& p, bool grad) { return evaluate_cost(cost, p, grid, grad); };
  for (std::size_t it = 0; it <= cfg.max_iters; ++it) {
    const PulseShape current = layout.unpack(opt.x())[0];
    StTarget t = st_target(current, grid, fixed_R);
    res.R = t.R;
    res.R_trace.push_back(t.R);
    cost = CostFunction::st(std::move(t.target));
    opt.reset_memory();
    opt.refresh(f);
    res.state.phi_history.push_back(opt.phi());
    if (it == cfg.max_iters) break;
    if (opt.grad_norm() < gtol) {
      res.state.stop_reason = "gradient norm";
      break;
    }
    if (stalled(res.state.phi_history, cfg)) {
      res.state.stop_reason = "stalled";
      break;
    }
    if (!opt.step(f)) {
      res.state.stop_reason = "line search";
      break;
    }
    ++res.state.iterations;
  }
  res.state.pulses = layout.unpack(opt.x());
  res.state.phi = opt.phi();
  res.state.grad_norm = opt.grad_norm();
  res.state.step_size = opt.eta();
  res.phi_st = opt.phi();
  const RamseyTask task =
      make_construction(res.state.pulses[0], TransformKind::TimeReversePhaseShift, grid, res.R, 1);
  res.ramsey_phi = quality_scan(task).phi;
  return res;
}

}  // namespace

StResult optimize_st(const PulseShape& initial, const OffsetGrid& grid, const OptimizerConfig& cfg,
                     std::optional<double> fixed_R) {
  const std::size_t count = cfg.randomize ? std::max<std::size_t>(cfg.restarts, 1) : 1;
  std::vector<StResult> runs(count);
  const std::vector<PulseShape> init{initial};
  auto states = run_restarts(count, cfg.threads, [&](std::size_t r) {
    const PulseShape start = cfg.randomize ? random_pulses(init, cfg.seed + r, cfg.init_fraction)[0] : initial;
    runs[r] = st_run(start, grid, cfg, fixed_R);
    runs[r].state.seed = cfg.seed + r;
    runs[r].state.restart_index = r;
    return runs[r].state;
  });
  const std::size_t best = best_index(states);
  return runs[best];
}

double check_emergent_symmetry(const PulseShape& pulse1, const PulseShape& pulse2) {
  if (pulse1.size() != pulse2.size() || pulse1.dt() != pulse2.dt())
    throw ValidationError("symmetry check needs pulses of equal duration and step count");
  if (pulse1.empty()) return 0.0;
  const PulseShape ref = apply_transform(pulse1, TransformKind::TimeReversePhaseShift);
  const double umax = std::max(pulse1.umax(), pulse2.umax());
  double ss = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double dx = pulse2[k].ux - ref[k].ux, dy = pulse2[k].uy - ref[k].uy;
    ss += dx * dx + dy * dy;
  }
  return std::sqrt(ss / static_cast<double>(ref.size())) / umax;
}

}  // namespace coop
