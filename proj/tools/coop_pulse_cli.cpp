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

// Command-line front end: optimize, evaluate, transform, sweep, fit-scaling,
// fringe, check-table2. Exit codes: 0 ok, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coop/errors.hpp"
#include "coop/euler.hpp"
#include "coop/kernels.hpp"
#include "coop/ramsey.hpp"
#include "coop/transforms.hpp"
#include "coop/workbench/analysis.hpp"
#include "coop/workbench/io.hpp"
#include "coop/workbench/scenario.hpp"
#include "coop/workbench/sweep.hpp"

namespace wb = coop::wb;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GridOptions {
  double numax_khz = 35.0;
  std::size_t n_offsets = 141;
  std::vector<double> scales{0.95, 1.0, 1.05};

  void add(CLI::App* app) {
    app->add_option("--numax-khz", numax_khz, "offset range +-numax in kHz")->capture_default_str();
    app->add_option("--n-offsets", n_offsets, "number of offsets")->capture_default_str();
    app->add_option("--scales", scales, "amplitude scale factors")->delimiter(',')->capture_default_str();
  }
  coop::OffsetGrid grid() const { return coop::OffsetGrid::symmetric(numax_khz * 1e3, n_offsets, scales); }
};

/// Second pulse from a file or a transform of the first.
struct PairOptions {
  std::string pulse1, pulse2, transform;
  std::optional<double> R, delta_us;
  int s_R = 1;

  void add(CLI::App* app) {
    app->add_option("--pulse1", pulse1, "first pulse file")->required();
    app->add_option("--pulse2", pulse2, "second pulse file");
    app->add_option("--transform", transform, "form the second pulse as a transform of the first");
    app->add_option("--R", R, "relative slope; delta = 2 R T");
    app->add_option("--delta-us", delta_us, "auxiliary delay in us (overrides R)");
    app->add_option("--s-R", s_R, "fringe sign, +1 or -1")->capture_default_str();
  }

  coop::RamseyTask task(const coop::OffsetGrid& grid) const {
    const coop::PulseShape p1 = wb::load_pulse(pulse1);
    if (pulse2.empty() == transform.empty()) throw coop::ValidationError("give exactly one of --pulse2, --transform");
    const coop::PulseShape p2 =
        pulse2.empty() ? coop::apply_transform(p1, coop::parse_transform(transform)) : wb::load_pulse(pulse2);
    const double slope = R.value_or(0.0);
    const double delta = delta_us ? *delta_us * 1e-6 : coop::delta_from_slope(slope, p1.duration());
    coop::RamseyTask t{.pulse1 = p1,
                       .pulse2 = p2,
                       .grid = grid,
                       .R = slope,
                       .delta = delta,
                       .s_R = s_R,
                       .allow_unequal_durations = false,
                       .taus = {},
                       .w_A = 1.0,
                       .w_phi = 1.0};
    t.validate();
    return t;
  }
};

void print_report(const coop::QualityReport& r) {
  std::printf("phi_d   %.17g\nphi_a   %.17g\nphi_b   %.17g\nphi_e   %.17g\nphi_sat %.17g\n", r.phi, r.phi_a,
              r.phi_b, r.phi_e, r.phi_sat);
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else wb::write_text(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramsey pulse-pair design workbench"};
  app.require_subcommand(1);

  auto* opt = app.add_subcommand("optimize", "optimize one cell from a JSON config");
  std::string opt_config, opt_out = "run";
  opt->add_option("--config", opt_config, "JSON config file")->required();
  opt->add_option("--out", opt_out, "output directory")->capture_default_str();

  auto* ev = app.add_subcommand("evaluate", "quality factors of a pulse pair, or re-check a sweep manifest");
  PairOptions ev_pair;
  GridOptions ev_grid;
  std::string ev_csv, ev_manifest;
  ev->add_option("--manifest", ev_manifest, "sweep directory to re-evaluate");
  ev->add_option("--pulse1", ev_pair.pulse1, "first pulse file");
  ev->add_option("--pulse2", ev_pair.pulse2, "second pulse file");
  ev->add_option("--transform", ev_pair.transform, "form the second pulse as a transform of the first");
  ev->add_option("--R", ev_pair.R, "relative slope; delta = 2 R T");
  ev->add_option("--delta-us", ev_pair.delta_us, "auxiliary delay in us (overrides R)");
  ev->add_option("--s-R", ev_pair.s_R, "fringe sign, +1 or -1");
  ev->add_option("--csv", ev_csv, "per-point quality table");
  ev_grid.add(ev);

  auto* tr = app.add_subcommand("transform", "apply a symmetry transform to a pulse file");
  std::string tr_in, tr_out, tr_kind = "identity";
  bool tr_bruker = false;
  tr->add_option("--in", tr_in, "input pulse file")->required();
  tr->add_option("--kind", tr_kind, "identity, ps, ip, tr, tr_ps, tr_ip")->capture_default_str();
  tr->add_option("--out", tr_out, "output file (default stdout)");
  tr->add_flag("--bruker", tr_bruker, "write amplitude percent and phase degrees instead");

  auto* sw = app.add_subcommand("sweep", "run a T x R sweep");
  std::string sw_spec, sw_out = "sweep";
  sw->add_option("--spec", sw_spec, "JSON sweep spec")->required();
  sw->add_option("--out", sw_out, "output directory")->capture_default_str();

  auto* fs = app.add_subcommand("fit-scaling", "fit -ln(1 - phi) = a T + b");
  std::string fs_in;
  fs->add_option("--in", fs_in, "CSV with columns T_us and phi (a sweep results.csv works)")->required();

  auto* fr = app.add_subcommand("fringe", "simulated and target fringe across offsets");
  PairOptions fr_pair;
  GridOptions fr_grid;
  double fr_teff_us = wb::kDefaultFringeTime * 1e6;
  std::string fr_out;
  fr_pair.add(fr);
  fr_grid.add(fr);
  fr->add_option("--teff-us", fr_teff_us, "effective evolution time in us")->capture_default_str();
  fr->add_option("--out", fr_out, "output CSV (default stdout)");

  auto* t2 = app.add_subcommand("check-table2", "admissibility residual of S - tau - S' for one pulse");
  std::string t2_pulse, t2_kind;
  std::optional<double> t2_fit_khz;
  GridOptions t2_grid;
  t2->add_option("--pulse", t2_pulse, "pulse file")->required();
  t2->add_option("--kind", t2_kind, "construction transform")->required();
  t2->add_option("--fit-khz", t2_fit_khz, "restrict the slope fit to |nu| <= this");
  t2_grid.add(t2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*opt) {
      const wb::RunConfig cfg = wb::parse_config(wb::read_text(opt_config));
      const wb::CellResult r = wb::run_cell(cfg);
      const std::filesystem::path out(opt_out);
      wb::save_pulse(out / "pulse1.txt", r.task.pulse1);
      wb::save_pulse(out / "pulse2.txt", r.task.pulse2);
      std::ostringstream q;
      wb::write_quality_csv(q, coop::quality_scan(r.task));
      wb::write_text(out / "quality.csv", q.str());
      nlohmann::ordered_json j;
      j["config"] = nlohmann::ordered_json::parse(wb::config_to_json(cfg));
      j["phi"] = r.phi;
      j["objective"] = r.objective;
      j["R_used"] = r.R;
      j["delta_s"] = r.task.delta;
      j["seed"] = r.seed;
      j["restart"] = r.restart_index;
      j["iterations"] = r.iterations;
      j["stop_reason"] = r.stop_reason;
      if (r.symmetry >= 0.0) j["symmetry"] = r.symmetry;
      wb::write_text(out / "result.json", j.dump(2) + "\n");
      std::printf("phi %.17g\nobjective %.17g\nR %.17g\nisa %s\n", r.phi, r.objective, r.R,
                  std::string(coop::kernels::isa_name(coop::kernels::active_isa())).c_str());
    } else if (*ev) {
      if (!ev_manifest.empty()) {
        const double worst = wb::reevaluate_manifest(ev_manifest);
        std::printf("max |phi difference| %.3g\n", worst);
        return worst <= 1e-12 ? 0 : kExitNumerical;
      }
      if (ev_pair.pulse1.empty()) throw coop::ValidationError("--pulse1 or --manifest is required");
      const coop::QualityReport r = coop::quality_scan(ev_pair.task(ev_grid.grid()));
      print_report(r);
      if (!ev_csv.empty()) {
        std::ostringstream q;
        wb::write_quality_csv(q, r);
        write_file(ev_csv, q.str());
      }
    } else if (*tr) {
      const coop::PulseShape p = coop::apply_transform(wb::load_pulse(tr_in), coop::parse_transform(tr_kind));
      std::ostringstream os;
      if (tr_bruker) os << wb::bruker_export(p);
      else wb::write_pulse(os, p);
      write_file(tr_out, os.str());
    } else if (*sw) {
      const wb::SweepSummary s = wb::run_sweep(wb::parse_sweep(wb::read_text(sw_spec)), sw_out);
      std::printf("cells %zu failed %zu\n", s.cells, s.failed);
    } else if (*fs) {
      std::istringstream in(wb::read_text(fs_in));
      std::string line;
      if (!std::getline(in, line)) throw coop::ValidationError("empty scaling input");
      int iT = -1, iphi = -1;
      {
        std::istringstream hs(line);
        std::string c;
        for (int k = 0; std::getline(hs, c, ','); ++k) {
          if (c == "T_us") iT = k;
          if (c == "phi") iphi = k;
        }
      }
      if (iT < 0 || iphi < 0) throw coop::ValidationError("scaling input needs T_us and phi columns");
      std::vector<wb::ScalingPoint> pts;
      for (std::size_t ln = 2; std::getline(in, line); ++ln) {
        std::istringstream ls(line);
        std::vector<std::string> f;
        for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
        if (static_cast<int>(f.size()) <= std::max(iT, iphi) || f[iphi].empty()) continue;  // failed cell
        try {
          pts.push_back({std::stod(f[iT]) * 1e-6, std::stod(f[iphi])});
        } catch (const std::exception&) {
          throw coop::ParseError(ln, "expected numbers in T_us and phi");
        }
      }
      const wb::ScalingFit f = wb::fit_scaling(pts);
      std::printf("a_per_ms %.17g\nb %.17g\nc %.17g\nresidual %.17g\npoints %zu\n", f.a * 1e-3, f.b, f.c, f.residual,
                  f.used);
    } else if (*fr) {
      std::ostringstream os;
      wb::export_fringe(os, fr_pair.task(fr_grid.grid()), fr_teff_us * 1e-6);
      write_file(fr_out, os.str());
    } else if (*t2) {
      const coop::OffsetGrid grid = t2_grid.grid();
      const coop::EulerProfile prof = coop::extract_euler(wb::load_pulse(t2_pulse), grid);
      std::optional<double> fit;
      if (t2_fit_khz) fit = *t2_fit_khz * 1e3;
      const coop::Table2Check c = coop::check_table2(prof, coop::parse_transform(t2_kind), fit);
      std::printf("residual %.17g\ndelta_us %.17g\ns_R %d\n", c.residual, c.delta * 1e6, c.s_R);
    }
  } catch (const coop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const coop::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
