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

#ifndef CRITZONE__SCENARIO_HPP_
#define CRITZONE__SCENARIO_HPP_

#include <string>

#include "critzone/error.hpp"
#include "critzone/models.hpp"
#include "critzone/propagate.hpp"
#include "critzone/units.hpp"
#include "critzone/vehicle.hpp"

namespace critzone
{

/// Ego approaching a slower lead on a straight road. The ego reference point
/// starts at x = 0; the lead's rear is at x_L0 = gap + L_f. Lateral positions
/// are left-positive, the lead's rear-left corner sits at y_L.
struct Scenario
{
  double v_x{units::kmh_to_ms(70.0)};
  double v_L{units::kmh_to_ms(20.0)};
  double gap{30.0};       // lead rear to ego front bumper [m]
  double offset{-3.7};    // y_FR(0) - y_L - y_margin [m]
  double y_L{0.0};
  double x_margin{0.0};
  double y_margin{0.0};
  double mu{0.9};
  double psi0{0.0};       // [rad]
  double vs0{0.0};        // [m/s]
  double psidot0{0.0};    // [rad/s]
  double delta0{0.0};     // [rad]
  double a_b0{0.0};       // initial longitudinal acceleration [m/s^2]
  double lane_width{3.7}; // used to discard manoeuvres that leave the lane
  VehicleParams params;
  ComfortBounds comfort;

  double x_L0() const { return gap + params.front_overhang; }
  double relative_speed() const { return v_x - v_L; }
  double target() const { return y_L + y_margin; }

  void validate() const
  {
    params.validate();
    comfort.validate();
    if (!(v_L >= 0.0)) {
      throw ScenarioError("lead speed must be non-negative");
    }
    if (!(v_x > v_L)) {
      throw ScenarioError("ego speed must exceed lead speed (v_x > v_L)");
    }
    if (!(x_margin >= 0.0) || !(y_margin >= 0.0)) {
      throw ScenarioError("safety margins must be non-negative");
    }
    if (!(mu > 0.0 && mu <= 1.2)) {
      throw ScenarioError("friction coefficient must lie in (0, 1.2]");
    }
    if (!(lane_width > 0.0)) {
      throw ScenarioError("lane width must be positive");
    }
  }

  /// Initial lateral state for the given model. The reference point is
  /// placed so that the front-right corner sits at the requested offset.
  /// States a model does not carry are dropped; the point-mass model starts
  /// with zero lateral acceleration.
  LateralState initial_state(ModelKind kind) const
  {
    const double y_fr = offset + target();
    LateralState x = LateralState::Zero(state_dimension(kind));
    switch (kind) {
      case ModelKind::dm:
        x << y_fr + 0.5 * params.width - params.front_overhang * psi0, psi0, vs0, psidot0, delta0;
        break;
      case ModelKind::sscm:
      case ModelKind::km:
        x << y_fr + 0.5 * params.width - params.front_overhang * psi0, psi0, delta0;
        break;
      case ModelKind::pmm:
        x << y_fr + 0.5 * params.width, vs0, 0.0;
        break;
    }
    return x;
  }

  BrakeState initial_brake_state() const
  {
    return {-gap, relative_speed(), a_b0};
  }
};

}  // namespace critzone

#endif  // CRITZONE__SCENARIO_HPP_
