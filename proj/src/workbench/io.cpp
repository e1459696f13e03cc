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

#include "coop/workbench/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "coop/errors.hpp"

namespace coop::wb {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Decimal text of v * 10^shift, produced by moving the decimal point of the
// shortest round-tripping representation of v so no rounding is introduced.
std::string shifted_decimal(double v, int shift) {
  char buf[48];
  for (int p = 0; p < 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*e", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  const auto e = s.find('e');
  int exp = std::stoi(s.substr(e + 1)) + shift;
  std::string mant = s.substr(0, e);
  std::string sign;
  if (mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string digits;
  for (char ch : mant)
    if (ch != '.') digits += ch;
  // value = 0.digits * 10^(exp + 1)
  const int point = exp + 1;
  std::string out;
  if (point <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (static_cast<std::size_t>(point) >= digits.size()) {
    out = digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(point)) + "." + digits.substr(static_cast<std::size_t>(point));
  }
  return sign + out;
}

}  // namespace

void write_pulse(std::ostream& os, const PulseShape& pulse) {
  os << "# format: " << kPulseFormatVersion << '\n'
     << "# dt_us: " << shifted_decimal(pulse.dt(), 6) << '\n'
     << "# umax_hz: " << format_double(pulse.umax()) << '\n'
     << "# steps: " << pulse.size() << '\n';
  for (const auto& c : pulse.steps()) os << format_double(c.ux) << '\t' << format_double(c.uy) << '\n';
}

namespace {

double parse_number(std::string_view s, std::size_t line) {
  const std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "not a number: '" + str + "'");
  }
  if (used != str.size()) throw ParseError(line, "trailing characters in '" + str + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value");
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

PulseShape read_pulse(std::istream& is) {
  std::optional<double> dt_s, umax;
  std::optional<std::size_t> steps;
  bool have_format = false;
  std::vector<Control> rows;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      if (!rows.empty()) throw ParseError(line, "header line after data rows");
      const std::string_view body = trim(s.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) throw ParseError(line, "header line without ':'");
      const std::string_view key = trim(body.substr(0, colon));
      const std::string_view val = trim(body.substr(colon + 1));
      if (key == "format") {
        if (parse_number(val, line) != kPulseFormatVersion) throw ParseError(line, "unsupported format version");
        have_format = true;
      } else if (key == "dt_us") {
        // Parsed as the decimal text with the exponent lowered by six, so the
        // value in seconds is recovered without a second rounding.
        parse_number(val, line);
        std::string sec(val);
        int exp = 0;
        if (const auto e = sec.find_first_of("eE"); e != std::string::npos) {
          exp = std::stoi(sec.substr(e + 1));
          sec.resize(e);
        }
        dt_s = parse_number(sec + "e" + std::to_string(exp - 6), line);
      } else if (key == "umax_hz") {
        umax = parse_number(val, line);
      } else if (key == "steps") {
        const double n = parse_number(val, line);
        if (n < 0 || n != std::floor(n)) throw ParseError(line, "step count must be a non-negative integer");
        steps = static_cast<std::size_t>(n);
      } else {
        throw ParseError(line, "unknown header key '" + std::string(key) + "'");
      }
      continue;
    }
    if (!have_format || !dt_s || !umax || !steps) throw ParseError(line, "data row before complete header");
    const auto tab = s.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line, "expected 'ux<TAB>uy'");
    rows.push_back({parse_number(trim(s.substr(0, tab)), line), parse_number(trim(s.substr(tab + 1)), line)});
  }
  if (!have_format || !dt_s || !umax || !steps) throw ParseError(line + 1, "incomplete header");
  if (rows.size() != *steps)
    throw ParseError(line + 1, "expected " + std::to_string(*steps) + " rows, found " + std::to_string(rows.size()));
  return PulseShape(*dt_s, *umax, std::move(rows));
}

void save_pulse(const std::filesystem::path& path, const PulseShape& pulse) {
  std::ostringstream os;
  write_pulse(os, pulse);
  write_text(path, os.str());
}

PulseShape load_pulse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pulse file " + path.string());
  return read_pulse(in);
}

std::string bruker_export(const PulseShape& pulse) {
  std::string out;
  char buf[64];
  for (const auto& c : pulse.steps()) {
    const double amp = pulse.umax() > 0.0 ? 100.0 * std::hypot(c.ux, c.uy) / pulse.umax() : 0.0;
    double phase = std::atan2(c.uy, c.ux) * 180.0 / kPi;
    if (phase < 0.0) phase += 360.0;
    if (phase >= 360.0) phase -= 360.0;
    std::snprintf(buf, sizeof buf, "%.1f %.1f\n", amp, phase);
    out += buf;
  }
  return out;
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& names) {
  for (const auto& n : names) cell(std::string_view(n));
  end_row();
  return *this;
}

void CsvWriter::sep() {
  if (!first_) os_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  os_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  sep();
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    os_ << s;
    return *this;
  }
  os_ << '"';
  for (char ch : s) {
    if (ch == '"') os_ << '"';
    os_ << ch;
  }
  os_ << '"';
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

}  // namespace coop::wb
