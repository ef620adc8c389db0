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

#ifndef CRITZONE__UNITS_HPP_
#define CRITZONE__UNITS_HPP_

#include <numbers>

// Conversions used at the CLI boundary. Everything inside the library is SI.
namespace critzone::units
{

constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }
constexpr double ms_to_kmh(double ms) { return ms * 3.6; }
constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace critzone::units

#endif  // CRITZONE__UNITS_HPP_
