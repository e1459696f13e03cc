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

#include <random>

#include "coop/errors.hpp"
#include "coop/euler.hpp"
#include "coop/transforms.hpp"
#include "support.hpp"

using namespace coop;

TEST_SUITE("transforms") {
  TEST_CASE("waveform rules") {
    const PulseShape p(1e-6, 10e3, {{1.0, 2.0}, {3.0, 4.0}});
    CHECK(apply_transform(p, TransformKind::Identity) == p);
    CHECK(apply_transform(PulseShape(1e-6, 10e3, {{5.0, 0.0}}), TransformKind::PhaseShiftPi)[0] == Control{-5.0, 0.0});
    const PulseShape trps = apply_transform(p, TransformKind::TimeReversePhaseShift);
    CHECK(trps[0] == Control{-3.0, -4.0});
    CHECK(trps[1] == Control{-1.0, -2.0});
    const PulseShape trip = apply_transform(p, TransformKind::TimeReverseInvertPhase);
    CHECK(trip[0] == Control{3.0, -4.0});
    CHECK(trip[1] == Control{1.0, -2.0});
    CHECK(trip.duration() == p.duration());
    CHECK(trip.umax() == p.umax());
  }

  TEST_CASE("involutions and closure") {
    std::mt19937_64 rng(21);
    const PulseShape p = test::random_pulse(rng, 33);
    for (auto k : {TransformKind::PhaseShiftPi, TransformKind::InvertPhase, TransformKind::TimeReverse})
      CHECK(apply_transform(apply_transform(p, k), k) == p);
    using K = TransformKind;
    CHECK(compose(K::TimeReverse, K::TimeReverse) == K::Identity);
    CHECK(compose(K::TimeReverse, K::PhaseShiftPi) == K::TimeReversePhaseShift);
    CHECK(compose(K::TimeReverse, K::InvertPhase) == K::TimeReverseInvertPhase);
    int closed = 0;
    for (auto a : kAllTransforms)
      for (auto b : kAllTransforms) {
        K ab;
        try {
          ab = compose(a, b);
        } catch (const ValidationError&) {
          continue;  // e.g. ps after ip negates ux only, which is not a listed kind
        }
        ++closed;
        CHECK(apply_transform(apply_transform(p, b), a) == apply_transform(p, ab));
      }
    CHECK(closed >= 20);
  }

  TEST_CASE("names round trip") {
    for (auto k : kAllTransforms) CHECK(parse_transform(transform_name(k)) == k);
    CHECK_THROWS_AS(parse_transform("rot"), ValidationError);
  }

  TEST_CASE("tr_ip prediction at one offset") {
    const std::vector<double> nus{-1e3, 0.0, 1e3};
    const EulerProfile prof = make_profile(nus, 1e-6, {0.0, 0.1, 0.0}, {0.0, 1.5, 0.0}, {0.0, -0.4, 0.0});
    const EulerProfile q = predict_euler(prof, TransformKind::TimeReverseInvertPhase);
    CHECK(q.gamma[1] == -0.4);
    CHECK(q.beta[1] == -1.5);
    CHECK(q.alpha[1] == 0.1);
    const EulerProfile id = predict_euler(prof, TransformKind::Identity);
    CHECK(id.gamma == prof.gamma);
    CHECK(id.beta == prof.beta);
    CHECK(id.alpha == prof.alpha);
  }

  TEST_CASE("reflecting kinds need a symmetric grid") {
    const std::vector<double> nus{-1e3, 0.0, 2e3};
    const EulerProfile prof = make_profile(nus, 1e-6, {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    CHECK_THROWS_AS(predict_euler(prof, TransformKind::TimeReversePhaseShift), ValidationError);
    CHECK_NOTHROW(predict_euler(prof, TransformKind::PhaseShiftPi));
  }

  TEST_CASE("predicted profiles reproduce the transformed propagators") {
    std::mt19937_64 rng(22);
    const OffsetGrid g = OffsetGrid::symmetric(35e3, 21);
    for (int i = 0; i < 10; ++i) {
      const PulseShape s = test::random_pulse(rng, 64);
      const EulerProfile prof = extract_euler(s, g);
      for (auto k : kAllTransforms) {
        const EulerProfile pred = predict_euler(prof, k);
        const PulseShape sk = apply_transform(s, k);
        for (std::size_t j = 0; j < g.size(); ++j)
          CHECK(frobenius_distance(pred.rotation_at(j), propagate(sk, g.omega(j)).matrix()) < 1e-9);
      }
      const EulerProfile inv = predict_inverse(prof);
      for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(frobenius_distance(inv.rotation_at(j), propagate(s, g.omega(j)).inverse().matrix()) < 1e-9);
    }
  }

  TEST_CASE("only the phase-shifted time reversal inverts the propagator, and only on resonance") {
    std::mt19937_64 rng(23);
    const PulseShape s = test::random_pulse(rng, 64);
    const double w = 2 * kPi * 20e3;
    const PulseShape t = apply_transform(s, TransformKind::TimeReversePhaseShift);
    CHECK(frobenius_distance(propagate(t, 0.0).matrix(), propagate(s, 0.0).inverse().matrix()) < 1e-9);
    CHECK(frobenius_distance(propagate(t, w).matrix(), propagate(s, w).inverse().matrix()) > 1e-3);
    for (auto k : {TransformKind::PhaseShiftPi, TransformKind::InvertPhase, TransformKind::TimeReverse,
                   TransformKind::TimeReverseInvertPhase})
      CHECK(frobenius_distance(propagate(apply_transform(s, k), w).matrix(), propagate(s, w).inverse().matrix()) > 1e-3);
  }
}
