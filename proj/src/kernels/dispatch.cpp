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

#include <atomic>
#include <cstdlib>
#include <string>

#include "coop/errors.hpp"
#include "coop/kernels.hpp"

namespace coop::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("COOP_PULSE_ISA"); env && std::string(env) == "scalar") return Isa::Scalar;
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(COOP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported()) throw ValidationError("AVX2 kernels are not available");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void forward(const ForwardArgs& a) {
#if defined(COOP_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return forward_avx2(a);
#endif
  forward_scalar(a);
}

void backward(const BackwardArgs& a) {
#if defined(COOP_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return backward_avx2(a);
#endif
  backward_scalar(a);
}

}  // namespace coop::kernels
