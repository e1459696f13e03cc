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

#include "coop/transforms.hpp"

#include <algorithm>
#include <string>

#include "coop/errors.hpp"

namespace coop {

namespace {

struct Parts {
  bool reverse;
  bool negate_x;
  bool negate_y;
};

Parts parts_of(TransformKind kind) {
  switch (kind) {
    case TransformKind::Identity: return {false, false, false};
    case TransformKind::PhaseShiftPi: return {false, true, true};
    case TransformKind::InvertPhase: return {false, false, true};
    case TransformKind::TimeReverse: return {true, false, false};
    case TransformKind::TimeReversePhaseShift: return {true, true, true};
    case TransformKind::TimeReverseInvertPhase: return {true, false, true};
  }
  throw ValidationError("unknown transform kind");
}

}  // namespace

std::string_view transform_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::Identity: return "identity";
    case TransformKind::PhaseShiftPi: return "ps";
    case TransformKind::InvertPhase: return "ip";
    case TransformKind::TimeReverse: return "tr";
    case TransformKind::TimeReversePhaseShift: return "tr_ps";
    case TransformKind::TimeReverseInvertPhase: return "tr_ip";
  }
  return "?";
}

TransformKind parse_transform(std::string_view name) {
  for (auto k : kAllTransforms)
    if (transform_name(k) == name) return k;
  throw ValidationError("unknown transform '" + std::string(name) + "'");
}

bool reflects_offset(TransformKind kind) {
  return kind == TransformKind::InvertPhase || kind == TransformKind::TimeReverse ||
         kind == TransformKind::TimeReversePhaseShift;
}

TransformKind compose(TransformKind a, TransformKind b) {
  const Parts pa = parts_of(a), pb = parts_of(b);
  const Parts c{pa.reverse != pb.reverse, pa.negate_x != pb.negate_x, pa.negate_y != pb.negate_y};
  for (auto k : kAllTransforms) {
    const Parts pk = parts_of(k);
    if (pk.reverse == c.reverse && pk.negate_x == c.negate_x && pk.negate_y == c.negate_y) return k;
  }
  // negate_x without negate_y is not generated by the six kinds.
  throw ValidationError("composition leaves the transform set");
}

PulseShape apply_transform(const PulseShape& pulse, TransformKind kind) {
  const Parts p = parts_of(kind);
  std::vector<Control> steps(pulse.steps().begin(), pulse.steps().end());
  if (p.reverse) std::reverse(steps.begin(), steps.end());
  for (auto& c : steps) {
    if (p.negate_x) c.ux = -c.ux;
    if (p.negate_y) c.uy = -c.uy;
  }
  return PulseShape(pulse.dt(), pulse.umax(), std::move(steps));
}

EulerProfile predict_euler(const EulerProfile& s, TransformKind kind) {
  if (reflects_offset(kind) && !s.is_symmetric())
    throw ValidationError("transform " + std::string(transform_name(kind)) + " needs a symmetric offset grid");
  EulerProfile out = s;
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = s.mirror_index(j);
    switch (kind) {
      case TransformKind::Identity:
        break;
      case TransformKind::PhaseShiftPi:
        out.beta[j] = -s.beta[j];
        break;
      case TransformKind::InvertPhase:
        out.gamma[j] = -s.gamma[m];
        out.beta[j] = -s.beta[m];
        out.alpha[j] = -s.alpha[m];
        out.gimbal[j] = s.gimbal[m];
        break;
      case TransformKind::TimeReverse:
        out.gamma[j] = -s.alpha[m];
        out.beta[j] = s.beta[m];
        out.alpha[j] = -s.gamma[m];
        out.gimbal[j] = s.gimbal[m];
        break;
      case TransformKind::TimeReversePhaseShift:
        out.gamma[j] = -s.alpha[m];
        out.beta[j] = -s.beta[m];
        out.alpha[j] = -s.gamma[m];
        out.gimbal[j] = s.gimbal[m];
        break;
      case TransformKind::TimeReverseInvertPhase:
        out.gamma[j] = s.alpha[j];
        out.beta[j] = -s.beta[j];
        out.alpha[j] = s.gamma[j];
        break;
    }
  }
  if (kind == TransformKind::TimeReverse || kind == TransformKind::TimeReversePhaseShift ||
      kind == TransformKind::TimeReverseInvertPhase)
    std::swap(out.gamma_unwrap_ok, out.alpha_unwrap_ok);
  return out;
}

EulerProfile predict_inverse(const EulerProfile& s) {
  EulerProfile out = s;
  for (std::size_t j = 0; j < s.size(); ++j) {
    out.gamma[j] = -s.alpha[j];
    out.beta[j] = -s.beta[j];
    out.alpha[j] = -s.gamma[j];
  }
  std::swap(out.gamma_unwrap_ok, out.alpha_unwrap_ok);
  return out;
}

}  // namespace coop
