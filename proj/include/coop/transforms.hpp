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
#include <string_view>

#include "coop/euler.hpp"
#include "coop/pulse.hpp"

namespace coop {

/// Pulse constructions related to a pulse S by phase and time symmetries.
enum class TransformKind {
  Identity,
  PhaseShiftPi,            ///< ps: phase + pi, (ux, uy) -> (-ux, -uy)
  InvertPhase,             ///< ip: phase -> -phase, (ux, uy) -> (ux, -uy)
  TimeReverse,             ///< tr: step order reversed
  TimeReversePhaseShift,   ///< tr then ps
  TimeReverseInvertPhase,  ///< tr then ip
};

inline constexpr std::array<TransformKind, 6> kAllTransforms = {
    TransformKind::Identity,    TransformKind::PhaseShiftPi,          TransformKind::InvertPhase,
    TransformKind::TimeReverse, TransformKind::TimeReversePhaseShift, TransformKind::TimeReverseInvertPhase};

/// Short names: identity, ps, ip, tr, tr_ps, tr_ip.
std::string_view transform_name(TransformKind kind);
/// Inverse of transform_name; throws ValidationError on unknown names.
TransformKind parse_transform(std::string_view name);

/// True for kinds whose Euler prediction reads the profile at -omega.
bool reflects_offset(TransformKind kind);

/// Composition of two kinds (b applied first). Products that negate ux alone
/// (ps with ip) are not among the six kinds and throw ValidationError.
TransformKind compose(TransformKind a, TransformKind b);

PulseShape apply_transform(const PulseShape& pulse, TransformKind kind);

/// Euler profile of the transformed pulse predicted from the profile of S.
/// Throws ValidationError for offset-reflecting kinds on an asymmetric grid.
EulerProfile predict_euler(const EulerProfile& profile, TransformKind kind);

/// Euler profile of S^-1: (gamma', beta', alpha') = (-alpha, -beta, -gamma).
EulerProfile predict_inverse(const EulerProfile& profile);

}  // namespace coop
