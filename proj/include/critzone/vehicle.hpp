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

#ifndef CRITZONE__VEHICLE_HPP_
#define CRITZONE__VEHICLE_HPP_

#include <string>

#include "critzone/error.hpp"
#include "critzone/units.hpp"

namespace critzone
{

/// Physical constants of the ego vehicle. Distances are measured from the
/// reference point used by the single-track models.
struct VehicleParams
{
  double mass{2000.0};             // m [kg]
  double yaw_inertia{3200.0};      // I_z [kg m^2]
  double front_stiffness{50000.0}; // c_f [N/rad]
  double rear_stiffness{50000.0};  // c_r [N/rad]
  double front_axle{1.226};        // l_f [m]
  double rear_axle{1.550};         // l_r [m]
  double front_overhang{1.820};    // L_f, reference point to front bumper [m]
  double length{4.27};             // L [m]
  double width{1.78};              // W [m]
  double max_steer_angle{units::deg_to_rad(44.30)};  // delta_Vmax [rad]
  double max_steer_rate{units::deg_to_rad(24.61)};   // omega_Vmax [rad/s]
  double gravity{9.81};            // g [m/s^2]

  double wheelbase() const { return front_axle + rear_axle; }

  /// Distance from the reference point to the rear bumper.
  double rear_overhang() const { return length - front_overhang; }

  void validate() const
  {
    auto positive = [](double v, const char * name) {
      if (!(v > 0.0)) {
        throw ScenarioError(std::string("vehicle parameter ") + name + " must be positive");
      }
    };
    positive(mass, "m");
    positive(yaw_inertia, "I_z");
    positive(front_stiffness, "c_f");
    positive(rear_stiffness, "c_r");
    positive(front_axle, "l_f");
    positive(rear_axle, "l_r");
    positive(front_overhang, "L_f");
    positive(length, "L");
    positive(width, "W");
    positive(max_steer_angle, "delta_Vmax");
    positive(max_steer_rate, "omega_Vmax");
    positive(gravity, "g");
    if (wheelbase() > length) {
      throw ScenarioError("vehicle parameters violate l_f + l_r <= L");
    }
    if (front_overhang > length) {
      throw ScenarioError("vehicle parameters violate L_f <= L");
    }
  }
};

/// Driver comfort thresholds for braking (AJ profile) and steering.
struct ComfortBounds
{
  double min_long_accel{-5.0};  // a_bmin [m/s^2]
  double min_long_jerk{-10.0};  // j_bmin [m/s^3]
  double max_lat_accel{5.0};    // a_smax [m/s^2]
  double max_lat_jerk{5.0};     // j_smax [m/s^3]

  void validate() const
  {
    if (!(min_long_accel < 0.0)) {
      throw ScenarioError("comfort bound a_bmin must be negative");
    }
    if (!(min_long_jerk < 0.0)) {
      throw ScenarioError("comfort bound j_bmin must be negative");
    }
    if (!(max_lat_accel > 0.0)) {
      throw ScenarioError("comfort bound a_smax must be positive");
    }
    if (!(max_lat_jerk > 0.0)) {
      throw ScenarioError("comfort bound j_smax must be positive");
    }
  }
};

}  // namespace critzone

#endif  // CRITZONE__VEHICLE_HPP_
