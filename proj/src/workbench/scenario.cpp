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

#include "coop/workbench/scenario.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "coop/errors.hpp"
#include "coop/euler.hpp"

namespace coop::wb {

namespace {

struct FamilyInfo {
  Family family;
  std::string_view name;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::Coop, "coop"}, {Family::CoopFilter, "coop-filter"}, {Family::PP, "pp"}, {Family::UR, "ur"},
    {Family::Sat, "sat"},   {Family::ST, "st"},                  {Family::Rect, "rect"},
};

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& i : kFamilies)
    if (i.family == f) return i.name;
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& i : kFamilies)
    if (i.name == name) return i.family;
  throw ValidationError("unknown family '" + std::string(name) + "'");
}

bool is_pair_family(Family f) { return f == Family::Coop || f == Family::CoopFilter; }

TransformKind construction_for(Family f) {
  return (f == Family::Sat || f == Family::ST) ? TransformKind::TimeReversePhaseShift
                                                : TransformKind::TimeReverseInvertPhase;
}

void RunConfig::validate() const {
  if (!(T_us > 0.0) || !std::isfinite(T_us)) throw ValidationError("T_us must be positive");
  if (!(dt_us > 0.0) || !std::isfinite(dt_us)) throw ValidationError("dt_us must be positive");
  if (!(umax_hz > 0.0) || !std::isfinite(umax_hz)) throw ValidationError("umax_hz must be positive");
  if (R && !(std::abs(*R) <= 1.0)) throw ValidationError("R must lie in [-1, 1]");
  if (delta_us && !std::isfinite(*delta_us)) throw ValidationError("delta_us must be finite");
  if (delta_us && fit_delta) throw ValidationError("delta_us is either a number or \"fit\"");
  if (!(numax_khz > 0.0)) throw ValidationError("numax_khz must be positive");
  if (n_offsets < 2) throw ValidationError("n_offsets must be at least 2");
  if (scales.empty()) throw ValidationError("scales must be non-empty");
  for (double s : scales)
    if (!(s > 0.0)) throw ValidationError("scales must be positive");
  if (!(tol >= 0.0)) throw ValidationError("tol must be non-negative");
  const double steps = T_us / dt_us;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps || std::round(steps) < 1)
    throw ValidationError("T_us must be a whole number of dt_us steps");
}

OffsetGrid RunConfig::grid() const { return OffsetGrid::symmetric(numax_khz * 1e3, n_offsets, scales); }

OptimizerConfig RunConfig::optimizer() const {
  OptimizerConfig c;
  c.max_iters = max_iters;
  c.tol = tol;
  c.restarts = restarts;
  c.seed = seed;
  c.rule = rule;
  c.threads = threads;
  return c;
}

std::size_t RunConfig::num_steps() const { return static_cast<std::size_t>(std::llround(T_us / dt_us)); }

RunConfig parse_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "family") {
        c.family = parse_family(v.get<std::string>());
      } else if (key == "T_us") {
        c.T_us = v.get<double>();
      } else if (key == "R") {
        if (!v.is_null()) c.R = v.get<double>();
      } else if (key == "delta_us") {
        if (v.is_string()) {
          if (v.get<std::string>() != "fit") throw ValidationError("delta_us must be a number or \"fit\"");
          c.fit_delta = true;
        } else if (!v.is_null()) {
          c.delta_us = v.get<double>();
        }
      } else if (key == "numax_khz") {
        c.numax_khz = v.get<double>();
      } else if (key == "n_offsets") {
        c.n_offsets = v.get<std::size_t>();
      } else if (key == "scales") {
        c.scales = v.get<std::vector<double>>();
      } else if (key == "restarts") {
        c.restarts = v.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "max_iters") {
        c.max_iters = v.get<std::size_t>();
      } else if (key == "tol") {
        c.tol = v.get<double>();
      } else if (key == "dt_us") {
        c.dt_us = v.get<double>();
      } else if (key == "umax_hz") {
        c.umax_hz = v.get<double>();
      } else if (key == "rule") {
        const auto r = v.get<std::string>();
        if (r == "steepest") c.rule = UpdateRule::SteepestAscent;
        else if (r == "lbfgs") c.rule = UpdateRule::Lbfgs;
        else throw ValidationError("rule must be \"steepest\" or \"lbfgs\"");
      } else if (key == "threads") {
        c.threads = v.get<unsigned>();
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["family"] = family_name(c.family);
  j["T_us"] = c.T_us;
  j["R"] = c.R ? nlohmann::ordered_json(*c.R) : nlohmann::ordered_json(nullptr);
  if (c.fit_delta) j["delta_us"] = "fit";
  else j["delta_us"] = c.delta_us ? nlohmann::ordered_json(*c.delta_us) : nlohmann::ordered_json(nullptr);
  j["numax_khz"] = c.numax_khz;
  j["n_offsets"] = c.n_offsets;
  j["scales"] = c.scales;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  j["max_iters"] = c.max_iters;
  j["tol"] = c.tol;
  j["dt_us"] = c.dt_us;
  j["umax_hz"] = c.umax_hz;
  j["rule"] = c.rule == UpdateRule::Lbfgs ? "lbfgs" : "steepest";
  j["threads"] = c.threads;
  return j.dump(2);
}

PulseShape rect_pulse(const RunConfig& cfg) {
  const std::size_t n = cfg.num_steps();
  const double T = cfg.T_us * 1e-6;
  // 90 degree nutation about +y over the full duration.
  const double amp = 0.25 / T;
  if (amp > cfg.umax_hz * (1.0 + kAmplitudeSlack))
    throw ValidationError("a 90 degree rectangular pulse of this duration exceeds umax");
  return PulseShape::rectangular(cfg.dt_us * 1e-6, cfg.umax_hz, n, std::min(amp, cfg.umax_hz), kPi / 2.0);
}

CellResult run_cell(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const OffsetGrid grid = cfg.grid();
  const OptimizerConfig opt = cfg.optimizer();
  const double T = cfg.T_us * 1e-6;
  const PulseShape zero(cfg.dt_us * 1e-6, cfg.umax_hz, std::vector<Control>(cfg.num_steps()));

  std::vector<PulseShape> pulses;
  double objective = 0.0, R = cfg.slope();
  std::uint64_t seed = cfg.seed;
  std::size_t restart = 0, iterations = 0;
  std::string stop = "reference";
  switch (cfg.family) {
    case Family::Coop:
    case Family::CoopFilter: {
      CostFunction cost = cfg.family == Family::Coop ? CostFunction::coop_symmetry(R) : CostFunction::coop_filter(R);
      if (cfg.delta_us) cost.delta = *cfg.delta_us * 1e-6;
      const std::vector<PulseShape> init{zero, zero};
      OptimizerState st = optimize(init, cost, grid, opt);
      pulses = std::move(st.pulses);
      objective = st.phi;
      seed = st.seed;
      restart = st.restart_index;
      iterations = st.iterations;
      stop = st.stop_reason;
      break;
    }
    case Family::PP:
    case Family::UR:
    case Family::Sat: {
      const CostFunction cost = cfg.family == Family::PP   ? CostFunction::pp(R)
                                : cfg.family == Family::UR ? CostFunction::ur()
                                                           : CostFunction::saturation();
      const std::vector<PulseShape> init{zero};
      OptimizerState st = optimize(init, cost, grid, opt);
      pulses = {st.pulses[0], apply_transform(st.pulses[0], construction_for(cfg.family))};
      objective = st.phi;
      seed = st.seed;
      restart = st.restart_index;
      iterations = st.iterations;
      stop = st.stop_reason;
      break;
    }
    case Family::ST: {
      StResult st = optimize_st(zero, grid, opt, cfg.R);
      R = st.R;
      pulses = {st.state.pulses[0], apply_transform(st.state.pulses[0], construction_for(cfg.family))};
      objective = st.phi_st;
      seed = st.state.seed;
      restart = st.state.restart_index;
      iterations = st.state.iterations;
      stop = st.state.stop_reason;
      break;
    }
    case Family::Rect: {
      const PulseShape s = rect_pulse(cfg);
      pulses = {s, apply_transform(s, construction_for(cfg.family))};
      break;
    }
  }

  double delta = delta_from_slope(R, T);
  if (cfg.delta_us) delta = *cfg.delta_us * 1e-6;
  if (cfg.fit_delta)
    delta = derived_delta(extract_euler(pulses[0], grid), extract_euler(pulses[1], grid));

  RamseyTask task{.pulse1 = pulses[0],
                  .pulse2 = pulses[1],
                  .grid = grid,
                  .R = R,
                  .delta = delta,
                  .s_R = 1,
                  .allow_unequal_durations = false,
                  .taus = {},
                  .w_A = 1.0,
                  .w_phi = 1.0};
  const double phi = quality_scan(task).phi;
  if (!std::isfinite(phi)) throw NumericalError("cell quality is not finite");
  if (cfg.family == Family::Rect) objective = phi;
  const double symmetry = is_pair_family(cfg.family) ? check_emergent_symmetry(pulses[0], pulses[1]) : -1.0;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return CellResult{.config = cfg,
                    .task = std::move(task),
                    .phi = phi,
                    .objective = objective,
                    .R = R,
                    .seed = seed,
                    .restart_index = restart,
                    .iterations = iterations,
                    .stop_reason = stop,
                    .symmetry = symmetry,
                    .wall_s = wall};
}

}  // namespace coop::wb
