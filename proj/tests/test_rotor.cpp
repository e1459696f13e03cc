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

#include "coop/errors.hpp"
#include "coop/euler.hpp"
#include "coop/grid.hpp"
#include "coop/pulse.hpp"
#include "coop/ramsey.hpp"
#include "coop/rotation.hpp"
#include "support.hpp"

using namespace coop;

namespace {

void check_vec(const Vec3& a, const Vec3& b, double tol) {
  CHECK(std::abs(a.x - b.x) < tol);
  CHECK(std::abs(a.y - b.y) < tol);
  CHECK(std::abs(a.z - b.z) < tol);
}

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Rotation::from_quaternion(n(rng), n(rng), n(rng), n(rng));
}

}  // namespace

TEST_SUITE("rotation") {
  TEST_CASE("axis rotations follow the fixed frame convention") {
    CHECK(frobenius_distance(rot_z(0.0).matrix(), Mat3::identity()) < 1e-15);
    check_vec(rot_y(kPi / 2).apply(kUnitZ), kUnitX, 1e-15);
    const double phi = 0.7;
    check_vec(rot_z(phi).apply(kUnitX), {std::cos(phi), std::sin(phi), 0.0}, 1e-15);
    CHECK_THROWS_AS(rot_axis({1.0, 1.0, 0.0}, 0.3), ValidationError);
  }

  TEST_CASE("step rotation reduces to free evolution and to a y rotation") {
    const double w = 2 * kPi * 3e3, dt = 0.5e-6;
    CHECK(frobenius_distance(step_rotation(0, 0, w, dt).matrix(), rot_z(w * dt).matrix()) < 1e-15);
    CHECK(frobenius_distance(step_rotation(0, 10e3, 0, 25e-6).matrix(), rot_y(kPi / 2).matrix()) < 1e-15);
  }

  TEST_CASE("tilted-axis step against the closed-form Rodrigues value") {
    // Axis (0,1,1)/sqrt2, angle pi sqrt2/2: Mz = cos t + nz^2 (1 - cos t).
    const Rotation r = step_rotation(0, 10e3, 2 * kPi * 1e4, 25e-6);
    const double t = kPi * std::sqrt(2.0) / 2.0;
    CHECK(std::abs(t - 2.2214414690791831) < 1e-15);
    CHECK(std::abs(r.apply(kUnitZ).z - (std::cos(t) + 0.5 * (1.0 - std::cos(t)))) < 1e-14);
  }

  TEST_CASE("propagate matches the per-step oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> nu(-40e3, 40e3), sc(0.8, 1.2);
    for (int i = 0; i < 50; ++i) {
      const PulseShape p = test::random_pulse(rng, 150);
      const double w = 2 * kPi * nu(rng), s = sc(rng);
      CHECK(frobenius_distance(propagate(p, w, s).matrix(), test::oracle_propagator(p, w, s)) < 1e-12);
    }
  }

  TEST_CASE("empty and single-step pulses") {
    const PulseShape empty(0.5e-6, 10e3, {});
    CHECK(frobenius_distance(propagate(empty, 1e5).matrix(), Mat3::identity()) < 1e-15);
    const PulseShape one(25e-6, 10e3, {{0.0, 10e3}});
    CHECK(frobenius_distance(propagate(one, 0.0).matrix(), rot_y(kPi / 2).matrix()) < 1e-15);
  }

  TEST_CASE("amplitude bound is enforced") {
    CHECK_THROWS_AS(PulseShape(0.5e-6, 10e3, {{10e3, 1.0}}), ValidationError);
    CHECK_NOTHROW(PulseShape(0.5e-6, 10e3, {{10e3 * (1 + 5e-10), 0.0}}));
  }

  TEST_CASE("norm, orthogonality and associativity") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1), nu(-40e3, 40e3);
    for (int i = 0; i < 1000; ++i) {
      const PulseShape p = test::random_pulse(rng, 8);
      const Rotation r = propagate(p, 2 * kPi * nu(rng));
      const Vec3 m{u(rng), u(rng), u(rng)};
      CHECK(std::abs(norm(r.apply(m)) - norm(m)) < 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
      const Rotation a = random_rotation(rng), b = random_rotation(rng), c = random_rotation(rng);
      const Mat3 m = a.matrix();
      CHECK(frobenius_distance(m.transposed() * m, Mat3::identity()) < 1e-12);
      CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
      CHECK(frobenius_distance(((a * b) * c).matrix(), (a * (b * c)).matrix()) < 1e-12);
    }
  }

  TEST_CASE("conjugation by a pi rotation about an orthogonal axis negates the angle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const Vec3 axes[] = {kUnitX, kUnitY, kUnitZ};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const double phi = ang(rng);
        const Rotation lhs = rot_axis(axes[a], kPi) * rot_axis(axes[b], phi) * rot_axis(axes[a], kPi).inverse();
        CHECK(frobenius_distance(lhs.matrix(), rot_axis(axes[b], -phi).matrix()) < 1e-12);
      }
  }
}

TEST_SUITE("euler") {
  TEST_CASE("identity and hard 90 y") {
    const auto id = euler_from_matrix(Mat3::identity());
    CHECK(id.gimbal);
    CHECK(id.angles.gamma == 0.0);
    CHECK(id.angles.beta == 0.0);
    CHECK(id.angles.alpha == 0.0);
    const auto y = euler_from_matrix(rot_y(kPi / 2).matrix());
    CHECK_FALSE(y.gimbal);
    CHECK(std::abs(y.angles.gamma) < 1e-15);
    CHECK(std::abs(y.angles.beta - kPi / 2) < 1e-15);
    CHECK(std::abs(y.angles.alpha) < 1e-15);
  }

  TEST_CASE("round trip away from gimbal lock") {
    std::mt19937_64 rng(14);
    int tested = 0;
    while (tested < 1000) {
      const Mat3 m = random_rotation(rng).matrix();
      const auto e = euler_from_matrix(m);
      if (std::abs(std::sin(e.angles.beta)) <= 1e-3) continue;
      ++tested;
      CHECK(frobenius_distance(test::zyz_matrix(e.angles.alpha, e.angles.beta, e.angles.gamma), m) < 1e-9);
      CHECK(e.angles.beta >= 0.0);
      CHECK(e.angles.beta <= kPi);
    }
  }

  TEST_CASE("gimbal lock keeps the observable combination") {
    const Mat3 near0 = test::zyz_matrix(0.4, 0.0, 0.3);
    const auto a = euler_from_matrix(near0);
    CHECK(a.gimbal);
    CHECK(std::abs(a.angles.alpha - 0.7) < 1e-12);
    const Mat3 nearpi = test::zyz_matrix(0.4, kPi, 0.3);
    const auto b = euler_from_matrix(nearpi);
    CHECK(b.gimbal);
    CHECK(std::abs(wrap_angle(b.angles.alpha - 0.1)) < 1e-12);
    CHECK(frobenius_distance(euler_matrix(b.angles), nearpi) < 1e-12);
  }

  TEST_CASE("inverse rotation has negated, order-reversed angles") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 100; ++i) {
      const Rotation r = random_rotation(rng);
      const auto e = euler_from_matrix(r.matrix()).angles;
      const Mat3 pred = euler_matrix({-e.alpha, -e.beta, -e.gamma});
      CHECK(frobenius_distance(pred, r.inverse().matrix()) < 1e-12);
    }
  }

  TEST_CASE("unwrap examples") {
    const std::vector<double> c{0.3, 0.3, 0.3};
    CHECK(unwrap(c).angles == c);
    const std::vector<double> two{3.0, -3.0};
    const auto u = unwrap(two);
    CHECK(u.angles[0] == 3.0);
    CHECK(std::abs(u.angles[1] - (2 * kPi - 3.0)) < 1e-15);
    CHECK_FALSE(u.tie);

    const double T = 75e-6;
    const OffsetGrid g = OffsetGrid::symmetric(35e3, 141);
    std::vector<double> raw, line;
    for (double w : g.omegas()) {
      line.push_back(1.5 * w * T);
      raw.push_back(wrap_angle(1.5 * w * T));
    }
    const auto lu = unwrap(raw);
    // The analytic line may differ by one global 2 pi from the unwrapped track.
    const double shift = std::round((line[0] - lu.angles[0]) / (2 * kPi)) * 2 * kPi;
    for (std::size_t j = 0; j < line.size(); ++j) CHECK(std::abs(lu.angles[j] + shift - line[j]) < 1e-9);
  }

  TEST_CASE("unwrap flags an exact pi jump and resolves it upward") {
    const std::vector<double> t{0.0, kPi};
    const auto u = unwrap(t);
    CHECK(u.tie);
    CHECK(u.angles[1] - u.angles[0] == doctest::Approx(kPi));
    CHECK(u.angles[1] - u.angles[0] <= kPi);
  }

  TEST_CASE("adjacent differences after unwrap lie in (-pi, pi]") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    std::vector<double> t{0.0};
    for (int i = 0; i < 500; ++i) t.push_back(t.back() + d(rng));
    std::vector<double> raw;
    for (double a : t) raw.push_back(wrap_angle(a));
    const auto u = unwrap(raw);
    for (std::size_t j = 1; j < raw.size(); ++j) {
      const double k = (u.angles[j] - raw[j]) / (2 * kPi);
      CHECK(std::abs(k - std::round(k)) < 1e-9);
      CHECK(u.angles[j] - u.angles[j - 1] > -kPi);
      CHECK(u.angles[j] - u.angles[j - 1] <= kPi + 1e-12);
      CHECK(std::abs(u.angles[j] - t[j] - (u.angles[0] - t[0])) < 1e-9);
    }
  }

  TEST_CASE("profile reconstruction and spacing precondition") {
    std::mt19937_64 rng(17);
    const PulseShape p = test::random_pulse(rng, 150);
    const OffsetGrid g = OffsetGrid::standard();
    const EulerProfile prof = extract_euler(p, g, 1.05);
    for (std::size_t j = 0; j < prof.size(); ++j) {
      if (prof.gimbal[j]) continue;
      CHECK(frobenius_distance(prof.rotation_at(j), propagate(p, g.omega(j), 1.05).matrix()) < 1e-9);
    }
    for (std::size_t j = 1; j < prof.size(); ++j) {
      CHECK(std::abs(prof.alpha[j] - prof.alpha[j - 1]) <= kPi + 1e-12);
      CHECK(std::abs(prof.gamma[j] - prof.gamma[j - 1]) <= kPi + 1e-12);
    }
    const PulseShape long_pulse(0.5e-6, 10e3, std::vector<Control>(2000));
    CHECK_THROWS_AS(extract_euler(long_pulse, g), ValidationError);
  }

  TEST_CASE("rectangular 90 y pulse has alpha slope near 2/pi") {
    const PulseShape rect = PulseShape::rectangular(0.5e-6, 10e3, 50, 10e3, kPi / 2);
    const EulerProfile prof = extract_euler(rect, OffsetGrid::standard());
    const auto d = decompose_alpha(prof, AngleTrack::Alpha, 10e3);
    CHECK(std::abs(d.r_fit - 2.0 / kPi) < 0.05);
  }
}
