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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coop/pulse.hpp"

namespace coop::wb {

inline constexpr int kPulseFormatVersion = 1;

/// Shortest-safe decimal for round trips: 17 significant digits.
std::string format_double(double v);

/// Header lines "# key: value" (format, dt_us, umax_hz, steps), then one
/// "ux_hz<TAB>uy_hz" row per step.
void write_pulse(std::ostream& os, const PulseShape& pulse);
/// Throws ParseError (with line number) on malformed input and ValidationError
/// when a step exceeds umax.
PulseShape read_pulse(std::istream& is);

void save_pulse(const std::filesystem::path& path, const PulseShape& pulse);
PulseShape load_pulse(const std::filesystem::path& path);

/// Spectrometer-style shape: one "amplitude_percent phase_degrees" row per
/// step, amplitude relative to umax, phase in [0, 360).
std::string bruker_export(const PulseShape& pulse);

/// Minimal CSV writer; doubles go through format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  CsvWriter& header(const std::vector<std::string>& names);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::string_view s);
  CsvWriter& cell(long long v);
  void end_row();

 private:
  void sep();
  std::ostream& os_;
  bool first_ = true;
};

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace coop::wb
