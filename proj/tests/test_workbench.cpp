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
#include <filesystem>
#include <random>
#include <sstream>

#include "coop/errors.hpp"
#include "coop/transforms.hpp"
#include "coop/workbench/analysis.hpp"
#include "coop/workbench/io.hpp"
#include "coop/workbench/scenario.hpp"
#include "coop/workbench/sweep.hpp"
#include "support.hpp"

using namespace coop;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coop_pulse_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PulseShape roundtrip(const PulseShape& p) {
  std::stringstream ss;
  wb::write_pulse(ss, p);
  return wb::read_pulse(ss);
}

}  // namespace

TEST_SUITE("workbench") {
  TEST_CASE("pulse files round trip bit-exactly") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
      const double dt = u(rng) * 1e-6, umax = u(rng) * 1e4;
      const PulseShape p = test::random_pulse(rng, 20, dt, umax);
      const PulseShape q = roundtrip(p);
      CHECK(q.dt() == p.dt());
      CHECK(q.umax() == p.umax());
      CHECK(q == p);
    }
    for (double dt : {0.5e-6, 1e-6 / 3, 1.1e-6, 2e-9, 1e-3}) {
      const PulseShape p(dt, 10e3, {{1.0, 2.0}});
      CHECK(roundtrip(p).dt() == dt);
    }
  }

  TEST_CASE("malformed pulse files report the line") {
    const std::string good = "# format: 1\n# dt_us: 0.5\n# umax_hz: 10000\n# steps: 2\n1\t2\n3\t4\n";
    std::istringstream ok(good);
    CHECK(wb::read_pulse(ok).size() == 2);
    const auto line_of = [](const std::string& text) -> std::size_t {
      std::istringstream in(text);
      try {
        wb::read_pulse(in);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("# format: 1\n# dt_us: 0.5\n# umax_hz: 10000\n# steps: 2\n1\t2\n3 x 4\n") == 6);
    CHECK(line_of("# format: 1\n# dt_us: abc\n") == 2);
    CHECK(line_of("# format: 2\n") == 1);
    CHECK(line_of("1\t2\n") == 1);
    CHECK(line_of("# format: 1\n# dt_us: 0.5\n# umax_hz: 10000\n# steps: 3\n1\t2\n") == 6);
    std::istringstream big("# format: 1\n# dt_us: 0.5\n# umax_hz: 10000\n# steps: 1\n10001\t0\n");
    CHECK_THROWS_AS(wb::read_pulse(big), ValidationError);
  }

  TEST_CASE("spectrometer export") {
    const PulseShape p(0.5e-6, 10e3, {{0.0, 10e3}, {-5e3, 0.0}, {0.0, -2.5e3}});
    CHECK(wb::bruker_export(p) == "100.0 90.0\n50.0 180.0\n25.0 270.0\n");
  }

  TEST_CASE("scaling fit") {
    const double a = 90e3, b = -1.3;
    std::vector<wb::ScalingPoint> pts;
    // Longer durations push 1 - phi below 1e-7, where forming phi itself costs more than 1e-9 in the log.
    for (double T : {25e-6, 50e-6, 75e-6, 100e-6})
      pts.push_back({T, 1.0 - std::exp(-b) * std::exp(-a * T)});
    const wb::ScalingFit f = wb::fit_scaling(pts);
    CHECK(std::abs(f.a * 1e-3 - 90.0) < 1e-9);
    CHECK(std::abs(f.b - b) < 1e-9);
    CHECK(std::abs(f.c - std::exp(1.3)) < 1e-9);
    CHECK(f.residual < 1e-9);

    const std::vector<wb::ScalingPoint> two{{50e-6, 0.9}, {100e-6, 0.99}, {120e-6, 1.0}};
    const wb::ScalingFit t = wb::fit_scaling(two);
    CHECK(t.used == 2);
    CHECK(std::abs(t.a * 50e-6 + t.b + std::log(0.1)) < 1e-12);
    CHECK(std::abs(t.a * 100e-6 + t.b + std::log(0.01)) < 1e-12);
    const std::vector<wb::ScalingPoint> bad{{50e-6, 0.9}, {100e-6, 1.0}};
    CHECK_THROWS_AS(wb::fit_scaling(bad), ValidationError);
  }

  TEST_CASE("config parsing") {
    const wb::RunConfig c = wb::parse_config(
        R"({"family":"pp","T_us":50,"R":0.6,"delta_us":12.5,"numax_khz":20,"n_offsets":81,"scales":[1.0],)"
        R"("restarts":2,"seed":9,"max_iters":10,"tol":1e-9})");
    CHECK(c.family == wb::Family::PP);
    CHECK(c.num_steps() == 100);
    CHECK(*c.delta_us == 12.5);
    CHECK(c.grid().num_points() == 81);
    CHECK(wb::parse_config(wb::config_to_json(c)).seed == 9);
    CHECK(wb::parse_config(R"({"family":"rect","T_us":25,"delta_us":"fit"})").fit_delta);
    CHECK_THROWS_AS(wb::parse_config(R"({"famly":"pp"})"), ValidationError);
    CHECK_THROWS_AS(wb::parse_config(R"({"family":"pp","R":1.5})"), ValidationError);
    CHECK_THROWS_AS(wb::parse_config(R"({"family":"pp","T_us":"x"})"), ValidationError);
    CHECK_THROWS_AS(wb::parse_config("{"), ValidationError);
  }

  TEST_CASE("empty sweep lists are rejected") {
    CHECK_THROWS_AS(wb::parse_sweep(R"({"family":"pp","R":[]})"), ValidationError);
    CHECK_THROWS_AS(wb::parse_sweep(R"({"family":"pp","T_us":[]})"), ValidationError);
    const wb::SweepSpec s = wb::parse_sweep(R"({"family":"st"})");
    CHECK(s.T_us == wb::kDefaultSweepDurationsUs);
    CHECK(s.cells().size() == 6);
    CHECK_FALSE(s.cells()[0].R.has_value());
  }

  TEST_CASE("sweeps are deterministic, keep going past failures and re-evaluate exactly") {
    const std::string spec_text =
        R"({"family":"pp","T_us":[10,20],"R":[0,0.5],"numax_khz":15,"n_offsets":21,"scales":[0.95,1.05],)"
        R"("restarts":2,"seed":5,"max_iters":30,"rect_reference":true})";
    const wb::SweepSpec spec = wb::parse_sweep(spec_text);
    const fs::path a = scratch_dir("sweep_a"), b = scratch_dir("sweep_b");
    const wb::SweepSummary sa = wb::run_sweep(spec, a);
    const wb::SweepSummary sb = wb::run_sweep(spec, b);
    CHECK(sa.cells == 5);
    CHECK(sa.failed == 0);
    CHECK(sb.cells == 5);
    for (const char* f : {"results.csv", "manifest.json", "pulses/cell_000_p1.txt", "pulses/cell_004_p2.txt"})
      CHECK(wb::read_text(a / f) == wb::read_text(b / f));
    CHECK(wb::reevaluate_manifest(a) <= 1e-12);

    wb::SweepSpec broken = spec;
    broken.base.family = wb::Family::Rect;
    broken.T_us = {10.0, 25.0};
    broken.R = {2.0 / kPi};
    broken.rect_reference = false;
    const fs::path c = scratch_dir("sweep_c");
    const wb::SweepSummary sc = wb::run_sweep(broken, c);
    CHECK(sc.cells == 2);
    CHECK(sc.failed == 1);
    const std::string csv = wb::read_text(c / "results.csv");
    CHECK(csv.find("failed") != std::string::npos);
    CHECK(wb::reevaluate_manifest(c) <= 1e-12);
  }

  TEST_CASE("rectangular reference cell") {
    wb::RunConfig cfg;
    cfg.family = wb::Family::Rect;
    cfg.T_us = 25.0;
    cfg.R = 2.0 / kPi;
    const wb::CellResult lit = wb::run_cell(cfg);
    CHECK(lit.task.delta == doctest::Approx(2 * (2 / kPi) * 25e-6).epsilon(1e-15));
    const RamseyTask direct = make_construction(PulseShape::rectangular(0.5e-6, 10e3, 50, 10e3, kPi / 2),
                                                TransformKind::TimeReverseInvertPhase, OffsetGrid::standard(),
                                                2 / kPi);
    CHECK(lit.phi == quality_scan(direct).phi);
    // With the delay taken from the fitted Euler slopes the reference reaches the quoted level.
    cfg.fit_delta = true;
    const wb::CellResult fit = wb::run_cell(cfg);
    CHECK(std::abs(fit.phi - 0.62) <= 0.02);
  }

  TEST_CASE("fringe export") {
    const double dt = 1e-12, amp = 0.25 / dt;
    const PulseShape y = PulseShape::rectangular(dt, amp, 1, amp, kPi / 2);
    const OffsetGrid g = OffsetGrid::symmetric(35e3, 71, {1.0});
    const RamseyTask ideal{.pulse1 = y,
                           .pulse2 = apply_transform(y, TransformKind::InvertPhase),
                           .grid = g,
                           .R = 0.0,
                           .delta = 0.0,
                           .s_R = 1,
                           .allow_unequal_durations = false,
                           .taus = {},
                           .w_A = 1.0,
                           .w_phi = 1.0};
    std::ostringstream os;
    wb::export_fringe(os, ideal, 60e-6);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "nu_hz,mz,target");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      double nu, mz, target;
      char c1, c2;
      std::istringstream ls(line);
      ls >> nu >> c1 >> mz >> c2 >> target;
      CHECK(std::abs(mz - target) < 1e-6);
      ++rows;
    }
    CHECK(rows == g.size());

    const RamseyTask rect = make_construction(PulseShape::rectangular(0.5e-6, 10e3, 50, 10e3, kPi / 2),
                                              TransformKind::TimeReverseInvertPhase, g, 2 / kPi);
    std::ostringstream rs;
    wb::export_fringe(rs, rect);
    std::istringstream rin(rs.str());
    std::getline(rin, line);
    double near = 0.0, far = 0.0;
    while (std::getline(rin, line)) {
      double nu, mz, target;
      char c1, c2;
      std::istringstream ls(line);
      ls >> nu >> c1 >> mz >> c2 >> target;
      if (std::abs(nu) <= 2e3) near = std::max(near, std::abs(mz - target));
      if (std::abs(nu) > 10e3) far = std::max(far, std::abs(mz - target));
    }
    CHECK(near < 0.05);
    CHECK(far > 0.3);
  }
}
