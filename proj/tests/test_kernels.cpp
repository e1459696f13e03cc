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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "coop/grape.hpp"
#include "coop/kernels.hpp"
#include "support.hpp"

using namespace coop;
namespace k = coop::kernels;

namespace {

struct Batch {
  std::vector<double> omega, scale, x, y, z, lx, ly, lz;
};

Batch make_batch(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> nu(-40e3, 40e3), sc(0.9, 1.1), u(-1, 1);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    b.omega.push_back(2 * kPi * nu(rng));
    b.scale.push_back(sc(rng));
    b.x.push_back(u(rng));
    b.y.push_back(u(rng));
    b.z.push_back(u(rng));
    b.lx.push_back(u(rng));
    b.ly.push_back(u(rng));
    b.lz.push_back(u(rng));
  }
  return b;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void compare_isas(const PulseShape& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Batch s = make_batch(rng, n);
  Batch v = s;
  k::ForwardArgs fs{p.steps().data(), p.size(), p.dt(), s.omega.data(), s.scale.data(), s.x.data(), s.y.data(),
                    s.z.data(), n};
  k::ForwardArgs fv{p.steps().data(), p.size(), p.dt(), v.omega.data(), v.scale.data(), v.x.data(), v.y.data(),
                    v.z.data(), n};
  k::forward_scalar(fs);
  k::forward_avx2(fv);
  CHECK(max_diff(s.x, v.x) < 1e-13);
  CHECK(max_diff(s.y, v.y) < 1e-13);
  CHECK(max_diff(s.z, v.z) < 1e-13);

  std::vector<double> gxs(p.size()), gys(p.size()), gxv(p.size()), gyv(p.size());
  k::BackwardArgs bs{p.steps().data(), p.size(), p.dt(), s.omega.data(), s.scale.data(), s.x.data(), s.y.data(),
                     s.z.data(), s.lx.data(), s.ly.data(), s.lz.data(), n, gxs.data(), gys.data()};
  k::BackwardArgs bv{p.steps().data(), p.size(), p.dt(), v.omega.data(), v.scale.data(), v.x.data(), v.y.data(),
                     v.z.data(), v.lx.data(), v.ly.data(), v.lz.data(), n, gxv.data(), gyv.data()};
  k::backward_scalar(bs);
  k::backward_avx2(bv);
  CHECK(max_diff(s.x, v.x) < 1e-12);
  CHECK(max_diff(s.lz, v.lz) < 1e-12);
  double gmax = 0.0;
  for (double g : gxs) gmax = std::max(gmax, std::abs(g));
  CHECK(max_diff(gxs, gxv) < 1e-12 * (1 + gmax));
  CHECK(max_diff(gys, gyv) < 1e-12 * (1 + gmax));
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar forward pass matches the rotation type") {
    std::mt19937_64 rng(41);
    const PulseShape p = test::random_pulse(rng, 40);
    Batch b = make_batch(rng, 9);
    const Batch b0 = b;
    k::forward_scalar({p.steps().data(), p.size(), p.dt(), b.omega.data(), b.scale.data(), b.x.data(), b.y.data(),
                       b.z.data(), b.omega.size()});
    for (std::size_t i = 0; i < b.omega.size(); ++i) {
      const Vec3 m = propagate(p, b0.omega[i], b0.scale[i]).apply({b0.x[i], b0.y[i], b0.z[i]});
      CHECK(std::abs(m.x - b.x[i]) < 1e-13);
      CHECK(std::abs(m.y - b.y[i]) < 1e-13);
      CHECK(std::abs(m.z - b.z[i]) < 1e-13);
    }
  }

  TEST_CASE("backward pass returns the magnetization to its start") {
    std::mt19937_64 rng(42);
    const PulseShape p = test::random_pulse(rng, 40);
    Batch b = make_batch(rng, 5);
    const Batch b0 = b;
    const std::size_t n = b.omega.size();
    k::forward_scalar({p.steps().data(), p.size(), p.dt(), b.omega.data(), b.scale.data(), b.x.data(), b.y.data(),
                       b.z.data(), n});
    std::vector<double> gx(p.size()), gy(p.size());
    k::backward_scalar({p.steps().data(), p.size(), p.dt(), b.omega.data(), b.scale.data(), b.x.data(), b.y.data(),
                        b.z.data(), b.lx.data(), b.ly.data(), b.lz.data(), n, gx.data(), gy.data()});
    CHECK(max_diff(b.x, b0.x) < 1e-13);
    CHECK(max_diff(b.z, b0.z) < 1e-13);
  }

#if defined(COOP_HAVE_AVX2_KERNELS)
  TEST_CASE("AVX2 kernels match the scalar reference") {
    if (!k::avx2_supported()) return;
    std::mt19937_64 rng(43);
    compare_isas(test::random_pulse(rng, 150), 423, 1);
    compare_isas(test::random_pulse(rng, 7), 5, 2);
    compare_isas(test::random_pulse(rng, 3), 2, 3);
    // Long steps push theta^2 past the series limit on some lanes.
    compare_isas(test::random_pulse(rng, 20, 20e-6), 37, 4);
  }

  TEST_CASE("cost values agree across kernel sets") {
    if (!k::avx2_supported()) return;
    std::mt19937_64 rng(44);
    const std::vector<PulseShape> pair{test::random_pulse(rng, 64), test::random_pulse(rng, 64)};
    const OffsetGrid g = OffsetGrid::standard();
    const CostFunction c = CostFunction::coop_symmetry(0.5);
    const k::Isa saved = k::active_isa();
    k::set_isa(k::Isa::Scalar);
    const CostValue a = evaluate_cost(c, pair, g);
    k::set_isa(k::Isa::Avx2);
    const CostValue b = evaluate_cost(c, pair, g);
    k::set_isa(saved);
    CHECK(std::abs(a.phi - b.phi) < 1e-13);
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t i = 0; i < a.grad[p].size(); ++i) {
        CHECK(std::abs(a.grad[p][i].ux - b.grad[p][i].ux) < 1e-15);
        CHECK(std::abs(a.grad[p][i].uy - b.grad[p][i].uy) < 1e-15);
      }
  }
#endif

  TEST_CASE("isa names") {
    CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
    CHECK(k::isa_name(k::Isa::Avx2) == "avx2");
  }
}
