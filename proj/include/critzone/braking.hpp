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

#ifndef CRITZONE__BRAKING_HPP_
#define CRITZONE__BRAKING_HPP_

#include <cmath>
#include <optional>
#include <string>

#include "critzone/error.hpp"
#include "critzone/propagate.hpp"
#include "critzone/vehicle.hpp"

namespace critzone
{

struct BrakeOutcome
{
  bool braking_needed{true};  // false when the ego is not closing in
  double t_b{0.0};
  double t_bj{0.0};
  double t_ba{0.0};
  BrakeState final_state;
  bool avoidable{true};
};

/// Time for the relative speed to reach zero under constant jerk j_bmin.
/// Empty when the ego is not faster than the lead.
inline std::optional<double> jerk_phase_time(const BrakeState & x0, double j_bmin)
{
  if (!(j_bmin < 0.0)) {
    throw DomainError("j_bmin must be negative");
  }
  if (!(x0.dv > 0.0)) {
    return std::nullopt;
  }
  // Positive root of dv + a t + j t^2 / 2 = 0; the other root is negative.
  return (-x0.a - std::sqrt(x0.a * x0.a - 2.0 * j_bmin * x0.dv)) / j_bmin;
}

/// Time to ramp the acceleration down to a_bmin; zero if already there.
inline double accel_phase_time(double a_b0, const ComfortBounds & comfort)
{
  if (!(comfort.min_long_jerk < 0.0)) {
    throw DomainError("j_bmin must be negative");
  }
  if (a_b0 <= comfort.min_long_accel) {
    return 0.0;
  }
  return (comfort.min_long_accel - a_b0) / comfort.min_long_jerk;
}

/// Latest comfortable braking: jerk at j_bmin, then hold the acceleration
/// reached at t_ba until the relative speed vanishes. An initial acceleration
/// already below a_bmin is held as is.
inline BrakeOutcome avoid_by_braking(
  const BrakeState & x0, const ComfortBounds & comfort, double x_margin)
{
  if (!(x_margin >= 0.0)) {
    throw ScenarioError("x_margin must be non-negative");
  }
  BrakeOutcome out;
  const auto t_bj = jerk_phase_time(x0, comfort.min_long_jerk);
  if (!t_bj) {
    out.braking_needed = false;
    out.final_state = x0;
    out.avoidable = -x0.dx >= x_margin;
    return out;
  }
  if (x0.dx > -x_margin) {
    throw ScenarioError("initial gap violates dx(0) <= -x_margin");
  }
  out.t_bj = *t_bj;
  out.t_ba = accel_phase_time(x0.a, comfort);
  const double j = comfort.min_long_jerk;
  if (out.t_ba >= out.t_bj) {
    out.t_b = out.t_bj;
    out.final_state = BrakeState::from(propagate_brake(x0.vector(), j, out.t_b));
    out.final_state.dv = 0.0;  // exact by construction; drop the rounding residue
  } else {
    const Eigen::Vector3d at_switch = propagate_brake(x0.vector(), j, out.t_ba);
    out.t_b = out.t_ba - at_switch(1) / at_switch(2);
    out.final_state =
      BrakeState::from(propagate_brake(at_switch, 0.0, out.t_b - out.t_ba));
    out.final_state.dv = 0.0;
  }
  out.avoidable = -out.final_state.dx >= x_margin;
  return out;
}

/// Initial gap (lead rear to ego front) at which latest comfortable braking
/// ends exactly at x_margin. Independent of the lateral model and offset.
inline double brake_boundary_distance(
  double relative_speed, double a_b0, const ComfortBounds & comfort, double x_margin)
{
  if (!(relative_speed > 0.0)) {
    return x_margin;
  }
  const BrakeState start{-x_margin, relative_speed, a_b0};
  const auto out = avoid_by_braking(start, comfort, x_margin);
  const double closing = out.final_state.dx - start.dx;
  return closing + x_margin;
}

}  // namespace critzone

#endif  // CRITZONE__BRAKING_HPP_
