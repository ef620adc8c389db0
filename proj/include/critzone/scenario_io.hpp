// Copyright 2026 The critzone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRITZONE__SCENARIO_IO_HPP_
#define CRITZONE__SCENARIO_IO_HPP_

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "critzone/error.hpp"
#include "critzone/scenario.hpp"
#include "critzone/units.hpp"

// Line-oriented scenario files:
//
//   # comment
//   v_x_kmh = 90
//   offset_m = -3.7
//
// Speeds are given in km/h and angles in degrees; everything else is SI.
// Keys that are not listed are left at their defaults.
namespace critzone
{

namespace detail
{

enum class FileUnit { si, kmh, deg };

struct ScenarioKey
{
  std::string_view name;
  std::function<double &(Scenario &)> field;
  FileUnit unit;
};

inline const std::vector<ScenarioKey> & scenario_keys()
{
  constexpr auto si = FileUnit::si;
  constexpr auto kmh = FileUnit::kmh;
  constexpr auto deg = FileUnit::deg;
  static const std::vector<ScenarioKey> keys = {
    {"v_x_kmh", [](Scenario & s) -> double & { return s.v_x; }, kmh},
    {"v_L_kmh", [](Scenario & s) -> double & { return s.v_L; }, kmh},
    {"gap_m", [](Scenario & s) -> double & { return s.gap; }, si},
    {"offset_m", [](Scenario & s) -> double & { return s.offset; }, si},
    {"y_L_m", [](Scenario & s) -> double & { return s.y_L; }, si},
    {"x_margin_m", [](Scenario & s) -> double & { return s.x_margin; }, si},
    {"y_margin_m", [](Scenario & s) -> double & { return s.y_margin; }, si},
    {"mu", [](Scenario & s) -> double & { return s.mu; }, si},
    {"psi_deg", [](Scenario & s) -> double & { return s.psi0; }, deg},
    {"vs_ms", [](Scenario & s) -> double & { return s.vs0; }, si},
    {"psidot_degs", [](Scenario & s) -> double & { return s.psidot0; }, deg},
    {"delta_deg", [](Scenario & s) -> double & { return s.delta0; }, deg},
    {"a_b0_ms2", [](Scenario & s) -> double & { return s.a_b0; }, si},
    {"lane_width_m", [](Scenario & s) -> double & { return s.lane_width; }, si},
    {"mass_kg", [](Scenario & s) -> double & { return s.params.mass; }, si},
    {"yaw_inertia_kgm2", [](Scenario & s) -> double & { return s.params.yaw_inertia; }, si},
    {"c_f_nprad", [](Scenario & s) -> double & { return s.params.front_stiffness; }, si},
    {"c_r_nprad", [](Scenario & s) -> double & { return s.params.rear_stiffness; }, si},
    {"l_f_m", [](Scenario & s) -> double & { return s.params.front_axle; }, si},
    {"l_r_m", [](Scenario & s) -> double & { return s.params.rear_axle; }, si},
    {"L_f_m", [](Scenario & s) -> double & { return s.params.front_overhang; }, si},
    {"length_m", [](Scenario & s) -> double & { return s.params.length; }, si},
    {"width_m", [](Scenario & s) -> double & { return s.params.width; }, si},
    {"delta_vmax_deg", [](Scenario & s) -> double & { return s.params.max_steer_angle; }, deg},
    {"omega_vmax_degs", [](Scenario & s) -> double & { return s.params.max_steer_rate; }, deg},
    {"g_ms2", [](Scenario & s) -> double & { return s.params.gravity; }, si},
    {"a_bmin_ms2", [](Scenario & s) -> double & { return s.comfort.min_long_accel; }, si},
    {"j_bmin_ms3", [](Scenario & s) -> double & { return s.comfort.min_long_jerk; }, si},
    {"a_smax_ms2", [](Scenario & s) -> double & { return s.comfort.max_lat_accel; }, si},
    {"j_smax_ms3", [](Scenario & s) -> double & { return s.comfort.max_lat_jerk; }, si},
  };
  return keys;
}

inline std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::string shortest(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double to_si(double file_value, FileUnit unit)
{
  switch (unit) {
    case FileUnit::kmh:
      return units::kmh_to_ms(file_value);
    case FileUnit::deg:
      return units::deg_to_rad(file_value);
    case FileUnit::si:
      break;
  }
  return file_value;
}

inline double from_si(double si, FileUnit unit)
{
  switch (unit) {
    case FileUnit::kmh:
      return units::ms_to_kmh(si);
    case FileUnit::deg:
      return units::rad_to_deg(si);
    case FileUnit::si:
      break;
  }
  return si;
}

// Shortest file value that converts back to exactly the stored value.
inline std::string display_value(double si, FileUnit unit)
{
  const double center = from_si(si, unit);
  std::string best = shortest(center);
  bool found = to_si(center, unit) == si;
  for (double dir : {-INFINITY, INFINITY}) {
    double candidate = center;
    for (int k = 0; k < 64; ++k) {
      candidate = std::nextafter(candidate, dir);
      if (to_si(candidate, unit) != si) {
        continue;
      }
      auto text = shortest(candidate);
      if (!found || text.size() < best.size()) {
        best = std::move(text);
        found = true;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Parses scenario text. Missing keys keep the built-in defaults (70 km/h
/// ego behind a 20 km/h lead, nominal vehicle and comfort bounds).
inline Scenario parse_scenario(std::string_view text)
{
  Scenario sc;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const detail::ScenarioKey * spec = nullptr;
    for (const auto & k : detail::scenario_keys()) {
      if (k.name == key) {
        spec = &k;
      }
    }
    if (spec == nullptr) {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    }
    double number = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), number);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(number)) {
      throw ParseError(line_no, "invalid number '" + std::string(value) + "' for " + std::string(key));
    }
    spec->field(sc) = detail::to_si(number, spec->unit);
    if (end == text.size()) {
      break;
    }
  }
  sc.validate();
  return sc;
}

/// Writes every key. parse_scenario(serialize_scenario(s)) reproduces s
/// bit for bit when s itself came from parse_scenario.
inline std::string serialize_scenario(const Scenario & sc)
{
  Scenario copy = sc;
  std::ostringstream out;
  for (const auto & k : detail::scenario_keys()) {
    out << k.name << " = " << detail::display_value(k.field(copy), k.unit) << '\n';
  }
  return out.str();
}

inline Scenario load_scenario(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline bool operator==(const Scenario & a, const Scenario & b)
{
  Scenario x = a;
  Scenario y = b;
  for (const auto & k : detail::scenario_keys()) {
    if (k.field(x) != k.field(y)) {
      return false;
    }
  }
  return true;
}

}  // namespace critzone

#endif  // CRITZONE__SCENARIO_IO_HPP_
