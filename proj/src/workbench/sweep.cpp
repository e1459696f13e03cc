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

#include "coop/workbench/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "coop/errors.hpp"
#include "coop/workbench/io.hpp"

namespace coop::wb {

using Json = nlohmann::ordered_json;

void SweepSpec::validate() const {
  if (T_us.empty()) throw ValidationError("sweep T list is empty");
  if (R.empty()) throw ValidationError("sweep R list is empty");
  for (const auto& c : cells()) c.validate();
}

std::vector<RunConfig> SweepSpec::cells() const {
  std::vector<RunConfig> out;
  for (double T : T_us) {
    for (const auto& r : R) {
      RunConfig c = base;
      c.T_us = T;
      c.R = r;
      out.push_back(c);
    }
  }
  if (rect_reference) {
    RunConfig c = base;
    c.family = Family::Rect;
    c.T_us = 25.0;
    c.R = 2.0 / kPi;
    out.push_back(c);
  }
  return out;
}

SweepSpec parse_sweep(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("sweep spec must be a JSON object");
  SweepSpec spec;
  try {
    if (j.contains("T_us") && j["T_us"].is_array()) {
      spec.T_us = j["T_us"].get<std::vector<double>>();
      j.erase("T_us");
    } else if (j.contains("T_us")) {
      spec.T_us = {j["T_us"].get<double>()};
      j.erase("T_us");
    }
    if (j.contains("R")) {
      spec.R.clear();
      if (j["R"].is_array()) {
        for (const auto& v : j["R"]) spec.R.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
      } else {
        spec.R.push_back(j["R"].is_null() ? std::nullopt : std::optional(j["R"].get<double>()));
      }
      j.erase("R");
    } else if (j.value("family", "") == "st") {
      spec.R = {std::nullopt};
    }
    if (j.contains("rect_reference")) {
      spec.rect_reference = j["rect_reference"].get<bool>();
      j.erase("rect_reference");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sweep spec has a value of the wrong type: ") + e.what());
  }
  spec.base = parse_config(j.dump());
  spec.validate();
  return spec;
}

namespace {

std::string cell_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%03zu", index);
  return buf;
}

}  // namespace

SweepSummary run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir / "pulses");
  const auto cells = spec.cells();

  Json manifest;
  manifest["format"] = 1;
  manifest["spec"] = Json::parse(config_to_json(spec.base));
  manifest["cells"] = Json::array();

  std::ostringstream results, timing;
  CsvWriter csv(results), tcsv(timing);
  csv.header({"cell", "family", "T_us", "R", "delta_us", "phi", "objective", "R_used", "seed", "restart",
              "iterations", "stop_reason", "symmetry", "status", "error"});
  tcsv.header({"cell", "wall_s"});

  SweepSummary summary;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RunConfig& cfg = cells[i];
    ++summary.cells;
    Json cell;
    cell["index"] = i;
    cell["config"] = Json::parse(config_to_json(cfg));
    csv.cell(static_cast<long long>(i)).cell(family_name(cfg.family)).cell(cfg.T_us);
    if (cfg.R) csv.cell(*cfg.R);
    else csv.cell("dynamic");
    try {
      const CellResult r = run_cell(cfg);
      const std::string stem = cell_stem(i);
      save_pulse(out_dir / "pulses" / (stem + "_p1.txt"), r.task.pulse1);
      save_pulse(out_dir / "pulses" / (stem + "_p2.txt"), r.task.pulse2);
      cell["status"] = "ok";
      cell["pulse1"] = "pulses/" + stem + "_p1.txt";
      cell["pulse2"] = "pulses/" + stem + "_p2.txt";
      cell["delta_s"] = r.task.delta;
      cell["s_R"] = r.task.s_R;
      cell["R_used"] = r.R;
      cell["phi"] = r.phi;
      cell["objective"] = r.objective;
      cell["seed"] = r.seed;
      cell["restart"] = r.restart_index;
      cell["iterations"] = r.iterations;
      cell["stop_reason"] = r.stop_reason;
      csv.cell(r.task.delta * 1e6).cell(r.phi).cell(r.objective).cell(r.R);
      csv.cell(static_cast<long long>(r.seed)).cell(static_cast<long long>(r.restart_index));
      csv.cell(static_cast<long long>(r.iterations)).cell(r.stop_reason).cell(r.symmetry).cell("ok").cell("");
      tcsv.cell(static_cast<long long>(i)).cell(r.wall_s);
      tcsv.end_row();
    } catch (const std::exception& e) {
      ++summary.failed;
      cell["status"] = "failed";
      cell["error"] = e.what();
      for (int k = 0; k < 9; ++k) csv.cell("");
      csv.cell("failed").cell(e.what());
    }
    csv.end_row();
    manifest["cells"].push_back(cell);
    // Rewritten after every cell so an interrupted sweep keeps its finished rows.
    write_text(out_dir / "results.csv", results.str());
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    write_text(out_dir / "timing.csv", timing.str());
  }
  return summary;
}

RamseyTask task_from_manifest_cell(const std::filesystem::path& out_dir, std::size_t index) {
  const Json m = Json::parse(read_text(out_dir / "manifest.json"));
  const auto& cells = m.at("cells");
  if (index >= cells.size()) throw ValidationError("manifest has no cell " + std::to_string(index));
  const auto& c = cells[index];
  if (c.at("status") != "ok") throw ValidationError("manifest cell " + std::to_string(index) + " failed");
  const RunConfig cfg = parse_config(c.at("config").dump());
  return RamseyTask{.pulse1 = load_pulse(out_dir / c.at("pulse1").get<std::string>()),
                    .pulse2 = load_pulse(out_dir / c.at("pulse2").get<std::string>()),
                    .grid = cfg.grid(),
                    .R = c.at("R_used").get<double>(),
                    .delta = c.at("delta_s").get<double>(),
                    .s_R = c.at("s_R").get<int>(),
                    .allow_unequal_durations = false,
                    .taus = {},
                    .w_A = 1.0,
                    .w_phi = 1.0};
}

double reevaluate_manifest(const std::filesystem::path& out_dir) {
  const Json m = Json::parse(read_text(out_dir / "manifest.json"));
  double worst = 0.0;
  for (std::size_t i = 0; i < m.at("cells").size(); ++i) {
    const auto& c = m["cells"][i];
    if (c.at("status") != "ok") continue;
    const double phi = quality_scan(task_from_manifest_cell(out_dir, i)).phi;
    worst = std::max(worst, std::abs(phi - c.at("phi").get<double>()));
  }
  return worst;
}

}  // namespace coop::wb
