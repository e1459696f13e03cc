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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <vector>

#include "coop/detail/rodrigues.hpp"
#include "coop/kernels.hpp"
#include "coop/rotation.hpp"

namespace coop::kernels {

namespace {

constexpr std::size_t kLanes = 4;

template <std::size_t N>
inline __m256d horner4(const std::array<double, N>& c, __m256d x) {
  __m256d acc = _mm256_set1_pd(c[N - 1]);
  for (std::size_t i = N - 1; i-- > 0;) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
  return acc;
}

struct Coeffs4 {
  __m256d f1, f2, f3;
};

// Series where every lane is inside the series range, libm per lane otherwise.
template <bool kNeedF3>
inline Coeffs4 coeffs4(__m256d t2) {
  const __m256d limit = _mm256_set1_pd(detail::kSeriesLimit2);
  if (_mm256_movemask_pd(_mm256_cmp_pd(t2, limit, _CMP_NLT_UQ)) == 0) {
    Coeffs4 c{horner4(detail::kF1Series, t2), horner4(detail::kF2Series, t2), _mm256_setzero_pd()};
    if constexpr (kNeedF3) c.f3 = horner4(detail::kF3Series, t2);
    return c;
  }
  alignas(32) double t[kLanes], f1[kLanes], f2[kLanes], f3[kLanes];
  _mm256_store_pd(t, t2);
  for (std::size_t l = 0; l < kLanes; ++l) {
    const auto c = detail::rodrigues_coeffs(t[l]);
    f1[l] = c.f1;
    f2[l] = c.f2;
    f3[l] = c.f3;
  }
  return {_mm256_load_pd(f1), _mm256_load_pd(f2), _mm256_load_pd(f3)};
}

struct V3 {
  __m256d x, y, z;
};

inline V3 cross4(const V3& a, const V3& b) {
  return {_mm256_fmsub_pd(a.y, b.z, _mm256_mul_pd(a.z, b.y)), _mm256_fmsub_pd(a.z, b.x, _mm256_mul_pd(a.x, b.z)),
          _mm256_fmsub_pd(a.x, b.y, _mm256_mul_pd(a.y, b.x))};
}

// m + f1 (v x m) + f2 v x (v x m)
inline V3 rotate4(const V3& v, __m256d f1, __m256d f2, const V3& m) {
  const V3 c = cross4(v, m);
  const V3 cc = cross4(v, c);
  return {_mm256_fmadd_pd(f2, cc.x, _mm256_fmadd_pd(f1, c.x, m.x)),
          _mm256_fmadd_pd(f2, cc.y, _mm256_fmadd_pd(f1, c.y, m.y)),
          _mm256_fmadd_pd(f2, cc.z, _mm256_fmadd_pd(f1, c.z, m.z))};
}

inline __m256d norm2(const V3& v) {
  return _mm256_fmadd_pd(v.x, v.x, _mm256_fmadd_pd(v.y, v.y, _mm256_mul_pd(v.z, v.z)));
}

}  // namespace

void forward_avx2(const ForwardArgs& a) {
  const std::size_t blocks = a.n / kLanes;
  const __m256d k = _mm256_set1_pd(kTwoPi * a.dt);
  const __m256d dt = _mm256_set1_pd(a.dt);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i = b * kLanes;
    const __m256d s = _mm256_mul_pd(_mm256_loadu_pd(a.scale + i), k);
    const __m256d vz = _mm256_mul_pd(_mm256_loadu_pd(a.omega + i), dt);
    V3 m{_mm256_loadu_pd(a.x + i), _mm256_loadu_pd(a.y + i), _mm256_loadu_pd(a.z + i)};
    for (std::size_t j = 0; j < a.num_steps; ++j) {
      const V3 v{_mm256_mul_pd(_mm256_set1_pd(a.steps[j].ux), s), _mm256_mul_pd(_mm256_set1_pd(a.steps[j].uy), s), vz};
      const Coeffs4 c = coeffs4<false>(norm2(v));
      m = rotate4(v, c.f1, c.f2, m);
    }
    _mm256_storeu_pd(a.x + i, m.x);
    _mm256_storeu_pd(a.y + i, m.y);
    _mm256_storeu_pd(a.z + i, m.z);
  }
  const std::size_t done = blocks * kLanes;
  if (done < a.n) {
    ForwardArgs tail = a;
    tail.omega += done;
    tail.scale += done;
    tail.x += done;
    tail.y += done;
    tail.z += done;
    tail.n -= done;
    forward_scalar(tail);
  }
}

void backward_avx2(const BackwardArgs& a) {
  const std::size_t blocks = a.n / kLanes;
  const std::size_t ns = a.num_steps;
  std::vector<double> gx(ns * kLanes, 0.0), gy(ns * kLanes, 0.0);
  const __m256d k = _mm256_set1_pd(kTwoPi * a.dt);
  const __m256d dt = _mm256_set1_pd(a.dt);
  const __m256d neg = _mm256_set1_pd(-0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i = b * kLanes;
    const __m256d s = _mm256_mul_pd(_mm256_loadu_pd(a.scale + i), k);
    const __m256d vz = _mm256_mul_pd(_mm256_loadu_pd(a.omega + i), dt);
    V3 m{_mm256_loadu_pd(a.mx + i), _mm256_loadu_pd(a.my + i), _mm256_loadu_pd(a.mz + i)};
    V3 l{_mm256_loadu_pd(a.lx + i), _mm256_loadu_pd(a.ly + i), _mm256_loadu_pd(a.lz + i)};
    for (std::size_t j = ns; j-- > 0;) {
      const V3 v{_mm256_mul_pd(_mm256_set1_pd(a.steps[j].ux), s), _mm256_mul_pd(_mm256_set1_pd(a.steps[j].uy), s), vz};
      const Coeffs4 c = coeffs4<true>(norm2(v));

      const V3 w = cross4(m, l);
      const V3 u = cross4(v, w);
      const V3 uu = cross4(v, u);
      const __m256d gxj = _mm256_fmadd_pd(c.f3, uu.x, _mm256_fnmadd_pd(c.f2, u.x, w.x));
      const __m256d gyj = _mm256_fmadd_pd(c.f3, uu.y, _mm256_fnmadd_pd(c.f2, u.y, w.y));
      double* px = gx.data() + j * kLanes;
      double* py = gy.data() + j * kLanes;
      _mm256_storeu_pd(px, _mm256_fmadd_pd(s, gxj, _mm256_loadu_pd(px)));
      _mm256_storeu_pd(py, _mm256_fmadd_pd(s, gyj, _mm256_loadu_pd(py)));

      const __m256d mf1 = _mm256_xor_pd(c.f1, neg);
      m = rotate4(v, mf1, c.f2, m);
      l = rotate4(v, mf1, c.f2, l);
    }
    _mm256_storeu_pd(a.mx + i, m.x);
    _mm256_storeu_pd(a.my + i, m.y);
    _mm256_storeu_pd(a.mz + i, m.z);
    _mm256_storeu_pd(a.lx + i, l.x);
    _mm256_storeu_pd(a.ly + i, l.y);
    _mm256_storeu_pd(a.lz + i, l.z);
  }
  if (blocks > 0) {
    for (std::size_t j = 0; j < ns; ++j) {
      const double* px = gx.data() + j * kLanes;
      const double* py = gy.data() + j * kLanes;
      a.grad_ux[j] += (px[0] + px[1]) + (px[2] + px[3]);
      a.grad_uy[j] += (py[0] + py[1]) + (py[2] + py[3]);
    }
  }
  const std::size_t done = blocks * kLanes;
  if (done < a.n) {
    BackwardArgs tail = a;
    tail.omega += done;
    tail.scale += done;
    tail.mx += done;
    tail.my += done;
    tail.mz += done;
    tail.lx += done;
    tail.ly += done;
    tail.lz += done;
    tail.n -= done;
    backward_scalar(tail);
  }
}

}  // namespace coop::kernels
