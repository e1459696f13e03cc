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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coop/grid.hpp"
#include "coop/pulse.hpp"
#include "coop/rotation.hpp"
#include "coop/vec3.hpp"

namespace coop {

enum class CostKind {
  CoopFilter,    ///< pair S1, S2 through SQF - delay - ZQF; fringe at tau = -delta or a tau list
  CoopSymmetry,  ///< pair scored as s_R Re(z1 z2~ e^{-i omega delta}) with S2~ = S2^tr_ip
  PP,            ///< z to the transverse phase omega R T
  UR,            ///< fixed rotation at every offset
  Saturation,    ///< 1 - Mz^2
  ST,            ///< 1 - |M - M_target|^2 against a frozen per-offset target
};

std::string_view cost_name(CostKind kind);
/// Accepts coop-filter, coop (or coop-symmetry), pp, ur, sat (or saturation), st.
CostKind parse_cost(std::string_view name);
inline bool is_pair_cost(CostKind k) { return k == CostKind::CoopFilter || k == CostKind::CoopSymmetry; }

struct CostFunction {
  CostKind kind = CostKind::CoopSymmetry;
  double R = 0.0;
  /// Overrides delta = 2 R T (T of the first pulse).
  std::optional<double> delta;
  int s_R = 1;

  /// CoopFilter: when non-empty, score 1 - mean_tau (Mz(tau) - s_R cos(omega (tau + delta)))^2
  /// over these delays; otherwise s_R Mz at tau = -delta.
  std::vector<double> taus;

  /// CoopSymmetry: score 1 - w_A (1 - A)^2 - w_phi dphi^2 instead of A cos(dphi).
  bool weighted = false;
  double w_A = 1.0;
  double w_phi = 1.0;

  Rotation ur_target = rot_y(kPi / 2.0);

  /// ST: target vectors laid out [scale][offset].
  std::vector<Vec3> st_target;

  static CostFunction coop_filter(double R, std::vector<double> taus = {});
  static CostFunction coop_symmetry(double R);
  static CostFunction pp(double R);
  static CostFunction ur(Rotation target = rot_y(kPi / 2.0));
  static CostFunction saturation();
  static CostFunction st(std::vector<Vec3> target);

  double delta_for(double duration) const { return delta ? *delta : 2.0 * R * duration; }
  std::size_t num_pulses() const { return is_pair_cost(kind) ? 2 : 1; }
};

/// Gradient of one pulse, d phi / d(ux_k, uy_k) in 1/Hz.
using PulseGradient = std::vector<Control>;

struct CostValue {
  double phi = 0.0;
  std::vector<PulseGradient> grad;  // empty unless requested
};

/// Grid-averaged quality and (optionally) its exact gradient. Pair costs take
/// the physical pulses (S1, S2).
CostValue evaluate_cost(const CostFunction& cost, std::span<const PulseShape> pulses, const OffsetGrid& grid,
                        bool with_gradient = true);

/// CoopSymmetry evaluated directly on (S1, S2~); gradients are with respect to S2~.
CostValue coop_symmetry_adapted(const CostFunction& cost, const PulseShape& s1, const PulseShape& s2_tilde,
                                const OffsetGrid& grid, bool with_gradient = true);

/// Maps a gradient with respect to S2~ = S2^tr_ip onto S2: step k of S2~ is
/// step N-1-k of S2 with uy negated.
PulseGradient adapted_to_physical(const PulseGradient& g);

/// Rotation score (1 + tr(R_target^T R)) / 4 averaged over the grid, in [0, 1] and
/// 1 only at the target.
CostValue ur_cost(const PulseShape& pulse, const OffsetGrid& grid, const Rotation& target = rot_y(kPi / 2.0),
                  bool with_gradient = true);

enum class UpdateRule {
  SteepestAscent,  ///< baseline: gradient step, backtracking, radial clip
  Lbfgs,           ///< limited-memory quasi-Newton direction, same line search and clip
};

struct OptimizerConfig {
  std::size_t max_iters = 2000;
  double tol = 1e-10;              // relative phi change over stall_window iterations
  std::size_t stall_window = 50;
  double grad_tol = 1e-8;          // times num_points, on the umax-normalized gradient
  std::size_t restarts = 10;
  std::uint64_t seed = 1;
  double init_fraction = 0.2;      // initial controls uniform in +-init_fraction*umax
  UpdateRule rule = UpdateRule::SteepestAscent;
  std::size_t lbfgs_memory = 20;
  /// Restarts running concurrently; 0 means COOP_PULSE_THREADS or hardware concurrency.
  unsigned threads = 0;
  /// When false the given pulses are the single starting point.
  bool randomize = true;
};

struct OptimizerState {
  std::vector<PulseShape> pulses;
  std::size_t iterations = 0;
  std::vector<double> phi_history;
  double phi = 0.0;
  double grad_norm = 0.0;
  double step_size = 0.0;
  std::uint64_t seed = 0;
  std::size_t restart_index = 0;
  std::string stop_reason;
  bool failed = false;
};

/// Uniform random controls in +-fraction*umax for each template pulse.
std::vector<PulseShape> random_pulses(std::span<const PulseShape> templates, std::uint64_t seed, double fraction);

/// Every step clipped radially to umax.
PulseShape clip_to_umax(const PulseShape& p);

/// Best of config.restarts runs (restart r seeded with seed + r). Runs that
/// produce non-finite values are marked failed and skipped. Throws
/// NumericalError when every run fails.
OptimizerState optimize(std::span<const PulseShape> initial, const CostFunction& cost, const OffsetGrid& grid,
                        const OptimizerConfig& config);

/// One monotone run from `start`.
OptimizerState optimize_run(std::span<const PulseShape> start, const CostFunction& cost, const OffsetGrid& grid,
                            const OptimizerConfig& config);

struct StTarget {
  double R = 0.0;
  std::vector<Vec3> target;  // [scale][offset]
};

/// Phase target of the current pulse: alpha from atan2(My, Mx) of the final
/// vector, unwrapped along the offsets; R by regression of the antisymmetric
/// part over all scales unless fixed; target phase omega R T + alpha_s.
StTarget st_target(const PulseShape& pulse, const OffsetGrid& grid, std::optional<double> fixed_R = std::nullopt);

struct StResult {
  OptimizerState state;
  double R = 0.0;
  std::vector<double> R_trace;
  double phi_st = 0.0;
  double ramsey_phi = 0.0;  // S - tau - S^tr_ps with delta = 2 R T
};

StResult optimize_st(const PulseShape& initial, const OffsetGrid& grid, const OptimizerConfig& config,
                     std::optional<double> fixed_R = std::nullopt);

/// RMS distance between pulse2 and pulse1^tr_ps in units of umax.
/// Throws ValidationError for unequal durations.
double check_emergent_symmetry(const PulseShape& pulse1, const PulseShape& pulse2);

/// Worker count from COOP_PULSE_THREADS (0 or unset means hardware concurrency).
unsigned worker_count(unsigned requested = 0);

}  // namespace coop
