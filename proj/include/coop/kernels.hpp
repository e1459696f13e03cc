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
#include <string_view>

#include "coop/pulse.hpp"

// Batched Bloch-vector propagation through one pulse, structure-of-arrays over
// points. Point i sees offset omega[i] and control scale scale[i].
namespace coop::kernels {

/// Vectors (x, y, z)[i] are propagated in place through all steps.
struct ForwardArgs {
  const Control* steps;
  std::size_t num_steps;
  double dt;
  const double* omega;
  const double* scale;
  double* x;
  double* y;
  double* z;
  std::size_t n;
};

/// On entry m and l hold the final magnetization and costate of each point;
/// on exit both are propagated back to the pulse start. For every step k,
/// grad_ux[k] and grad_uy[k] are incremented by sum_i l_k . dR_k/du M_{k-1}.
struct BackwardArgs {
  const Control* steps;
  std::size_t num_steps;
  double dt;
  const double* omega;
  const double* scale;
  double* mx;
  double* my;
  double* mz;
  double* lx;
  double* ly;
  double* lz;
  std::size_t n;
  double* grad_ux;
  double* grad_uy;
};

enum class Isa { Scalar, Avx2 };

void forward_scalar(const ForwardArgs& a);
void backward_scalar(const BackwardArgs& a);

#if defined(COOP_HAVE_AVX2_KERNELS)
void forward_avx2(const ForwardArgs& a);
void backward_avx2(const BackwardArgs& a);
#endif

/// True when the AVX2 kernels were built and the CPU supports AVX2 and FMA.
bool avx2_supported();

/// Kernel set used by forward()/backward(). Defaults to the best supported set;
/// COOP_PULSE_ISA=scalar in the environment forces the reference kernels.
Isa active_isa();
/// Throws ValidationError when the requested set is unavailable.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

void forward(const ForwardArgs& a);
void backward(const BackwardArgs& a);

}  // namespace coop::kernels
