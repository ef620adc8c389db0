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

#ifndef CRITZONE__MODELS_HPP_
#define CRITZONE__MODELS_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "critzone/error.hpp"
#include "critzone/vehicle.hpp"

namespace critzone
{

/// Lateral vehicle models in decreasing fidelity.
enum class ModelKind {
  dm,    // dynamic single-track model
  sscm,  // steady-state cornering model
  km,    // kinematic model
  pmm,   // point-mass model
};

constexpr int state_dimension(ModelKind kind) { return kind == ModelKind::dm ? 5 : 3; }

constexpr std::string_view to_string(ModelKind kind)
{
  switch (kind) {
    case ModelKind::dm:
      return "dm";
    case ModelKind::sscm:
      return "sscm";
    case ModelKind::km:
      return "km";
    case ModelKind::pmm:
      return "pmm";
  }
  return "unknown";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view text)
{
  for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km, ModelKind::pmm}) {
    if (text == to_string(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

inline constexpr int kMaxStates = 5;

// Fixed-capacity dynamic sizes: no heap traffic inside root-finder loops.
using StateVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStates, 1>;
using StateMatrix =
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxStates, kMaxStates>;
using OutputMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, kMaxStates>;
using OutputVector = Eigen::Vector3d;

/// Lateral state, layout depends on the model kind:
///   DM:       [y, psi, v_s, psi_dot, delta]
///   SSCM, KM: [y, psi, delta]
///   PMM:      [y, v_s, a_s]
using LateralState = StateVector;

/// Index of the heading angle in the state, if the model has one.
constexpr std::optional<int> heading_index(ModelKind kind)
{
  if (kind == ModelKind::pmm) {
    return std::nullopt;
  }
  return 1;
}

/// Index of the state driven directly by the control input: the steering
/// angle for DM/SSCM/KM, the lateral acceleration for PMM. This is the state
/// that saturates at the end of the rate phase of a J-manoeuvre.
constexpr int actuator_index(ModelKind kind) { return state_dimension(kind) - 1; }

/// Model parameter vector p. Entries are stored zero-based; the comments on
/// build_system() refer to them one-based as p1, p2, ...
struct ModelParameters
{
  ModelKind kind{ModelKind::dm};
  std::array<double, 7> values{};
  int size{0};

  double operator()(int one_based) const { return values[static_cast<size_t>(one_based - 1)]; }
};

inline ModelParameters parameter_vector(const VehicleParams & vp, ModelKind kind)
{
  const double lf = vp.front_axle;
  const double lr = vp.rear_axle;
  const double l = vp.wheelbase();
  const double cf = vp.front_stiffness;
  const double cr = vp.rear_stiffness;
  const double m = vp.mass;
  ModelParameters p;
  p.kind = kind;
  switch (kind) {
    case ModelKind::dm:
      p.values = {
        2.0 * (cf + cr) / m,
        2.0 * (lr * cr - lf * cf) / m,
        2.0 * cf / m,
        2.0 * (lr * cr - lf * cf) / vp.yaw_inertia,
        2.0 * (lf * lf * cf + lr * lr * cr) / vp.yaw_inertia,
        2.0 * lf * cf / vp.yaw_inertia,
        vp.front_overhang};
      p.size = 7;
      break;
    case ModelKind::sscm:
      p.values = {
        lr, l, m * lf / (2.0 * cr * l), m / (2.0 * l) * (lr / cf - lf / cr), vp.front_overhang};
      p.size = 5;
      break;
    case ModelKind::km:
      p.values = {lr / l, 1.0 / l, vp.front_overhang};
      p.size = 3;
      break;
    case ModelKind::pmm:
      p.size = 0;
      break;
  }
  return p;
}

/// Parameter-varying linear lateral system x' = A x + B u, y = C x + D u,
/// frozen at one longitudinal speed. Outputs are [y_FR + W/2, a_s, j_s].
struct LateralSystem
{
  ModelKind kind{ModelKind::dm};
  double v_x{0.0};
  StateMatrix A;
  StateVector B;
  OutputMatrix C;
  OutputVector D;
  ModelParameters p;

  int dimension() const { return state_dimension(kind); }
};

namespace detail
{

inline void require_speed(double v_x)
{
  if (!(v_x > 0.0)) {
    throw DomainError("longitudinal speed must be positive, got " + std::to_string(v_x));
  }
}

// Denominator shared by the SSCM entries: p2 + p4 v_x^2.
inline double sscm_denominator(const ModelParameters & p, double v_x)
{
  return p(2) + p(4) * v_x * v_x;
}

// Coefficient k in v_s = k v_x delta for the SSCM.
inline double sscm_lateral_gain(const ModelParameters & p, double v_x)
{
  return (p(1) - p(3) * v_x * v_x) / sscm_denominator(p, v_x);
}

}  // namespace detail

/// Rebuilds the speed-dependent matrices from a cached parameter vector.
inline LateralSystem build_system(const ModelParameters & p, double v_x)
{
  detail::require_speed(v_x);
  const int n = state_dimension(p.kind);
  LateralSystem sys;
  sys.kind = p.kind;
  sys.v_x = v_x;
  sys.p = p;
  sys.A = StateMatrix::Zero(n, n);
  sys.B = StateVector::Zero(n);
  sys.C = OutputMatrix::Zero(3, n);
  sys.D = OutputVector::Zero();
  sys.B(n - 1) = 1.0;

  const double v = v_x;
  const double v2 = v * v;
  switch (p.kind) {
    case ModelKind::dm:
      sys.A(0, 1) = v;
      sys.A(0, 2) = 1.0;
      sys.A(1, 3) = 1.0;
      sys.A(2, 2) = -p(1) / v;
      sys.A(2, 3) = p(2) / v - v;
      sys.A(2, 4) = p(3);
      sys.A(3, 2) = p(4) / v;
      sys.A(3, 3) = -p(5) / v;
      sys.A(3, 4) = p(6);

      sys.C(0, 0) = 1.0;
      sys.C(0, 1) = p(7);
      sys.C(1, 2) = -p(1) / v;
      sys.C(1, 3) = p(2) / v;
      sys.C(1, 4) = p(3);
      sys.C(2, 2) = (p(1) * p(1) + p(2) * p(4)) / v2;
      sys.C(2, 3) = p(1) - p(2) * (p(1) + p(5)) / v2;
      sys.C(2, 4) = (p(2) * p(6) - p(1) * p(3)) / v;
      sys.D(2) = p(3);
      break;
    case ModelKind::sscm: {
      const double den = detail::sscm_denominator(p, v);
      sys.A(0, 1) = v;
      sys.A(0, 2) = detail::sscm_lateral_gain(p, v) * v;
      sys.A(1, 2) = v / den;
      sys.C(0, 0) = 1.0;
      sys.C(0, 1) = p(5);
      sys.C(1, 2) = v2 / den;
      sys.D(2) = v2 / den;
      break;
    }
    case ModelKind::km:
      sys.A(0, 1) = v;
      sys.A(0, 2) = p(1) * v;
      sys.A(1, 2) = p(2) * v;
      sys.C(0, 0) = 1.0;
      sys.C(0, 1) = p(3);
      sys.C(1, 2) = p(2) * v2;
      sys.D(1) = p(1) * v;
      sys.D(2) = p(2) * v2;
      break;
    case ModelKind::pmm:
      sys.A(0, 1) = 1.0;
      sys.A(1, 2) = 1.0;
      sys.C(0, 0) = 1.0;
      sys.C(1, 2) = 1.0;
      sys.D(2) = 1.0;
      break;
  }
  return sys;
}

inline LateralSystem build_system(const VehicleParams & vp, ModelKind kind, double v_x)
{
  detail::require_speed(v_x);
  return build_system(parameter_vector(vp, kind), v_x);
}

/// Same model and parameters at a different speed; p is reused.
inline LateralSystem at_speed(const LateralSystem & sys, double v_x)
{
  return build_system(sys.p, v_x);
}

namespace detail
{

// (l / v_x)^2 + m/2 (l_r/c_f - l_f/c_r)
inline double steady_state_bracket(const VehicleParams & vp, double v_x)
{
  const double l = vp.wheelbase();
  return (l / v_x) * (l / v_x) +
         0.5 * vp.mass * (vp.rear_axle / vp.front_stiffness - vp.front_axle / vp.rear_stiffness);
}

inline double steady_state_gain(const VehicleParams & vp, ModelKind kind, double v_x)
{
  require_speed(v_x);
  switch (kind) {
    case ModelKind::dm:
    case ModelKind::sscm:
      return steady_state_bracket(vp, v_x) / vp.wheelbase();
    case ModelKind::km:
      return vp.wheelbase() / (v_x * v_x);
    case ModelKind::pmm:
      break;
  }
  throw UnsupportedError("the point-mass model has no steering angle");
}

}  // namespace detail

/// Constant steering angle giving steady-state lateral acceleration a_ss.
/// DM and SSCM share the understeer form; KM uses a_ss l / v_x^2.
inline double steady_state_angle(
  const VehicleParams & vp, double a_ss, double v_x, ModelKind kind = ModelKind::dm)
{
  return a_ss * detail::steady_state_gain(vp, kind, v_x);
}

/// Constant steering rate giving steady-state lateral jerk j_ss.
inline double steady_state_rate(
  const VehicleParams & vp, double j_ss, double v_x, ModelKind kind = ModelKind::dm)
{
  return j_ss * detail::steady_state_gain(vp, kind, v_x);
}

/// Largest steady-state steering angle keeping both axle forces inside the
/// friction ellipse (linear tyres, no longitudinal slip).
inline double friction_angle_limit(const VehicleParams & vp, double mu, double v_x)
{
  detail::require_speed(v_x);
  if (!(mu > 0.0)) {
    throw DomainError("friction coefficient must be positive, got " + std::to_string(mu));
  }
  return mu * vp.gravity / std::max(vp.front_axle, vp.rear_axle) *
         detail::steady_state_bracket(vp, v_x);
}

/// Friction coefficient below which the friction limit is tighter than the
/// comfort limit on steady-state lateral acceleration.
inline double friction_threshold(const VehicleParams & vp, double a_smax)
{
  if (!(a_smax > 0.0)) {
    throw DomainError("a_smax must be positive");
  }
  return a_smax / vp.gravity * std::max(vp.front_axle, vp.rear_axle) / vp.wheelbase();
}

/// Saturation limits for the J-manoeuvre. For PMM the roles are taken by the
/// lateral acceleration (delta_*) and lateral jerk (omega_*) bounds.
struct SteeringLimits
{
  double delta_max{0.0};
  double omega_max{0.0};
  double delta_ss{0.0};
  double omega_ss{0.0};
  double delta_max_mu{0.0};
};

inline SteeringLimits steering_limits(
  const VehicleParams & vp, const ComfortBounds & comfort, double mu, double v_x,
  ModelKind kind)
{
  detail::require_speed(v_x);
  SteeringLimits lim;
  if (kind == ModelKind::pmm) {
    lim.delta_ss = comfort.max_lat_accel;
    lim.omega_ss = comfort.max_lat_jerk;
    lim.delta_max_mu = std::numeric_limits<double>::infinity();
    lim.delta_max = lim.delta_ss;
    lim.omega_max = lim.omega_ss;
    return lim;
  }
  if (!(detail::steady_state_bracket(vp, v_x) > 0.0)) {
    // Oversteering vehicle at or above its critical speed: no steady state.
    throw DomainError("no steady-state cornering at " + std::to_string(v_x) +
                      " m/s (above the critical speed)");
  }
  lim.delta_ss = steady_state_angle(vp, comfort.max_lat_accel, v_x, kind);
  lim.omega_ss = steady_state_rate(vp, comfort.max_lat_jerk, v_x, kind);
  lim.delta_max_mu = friction_angle_limit(vp, mu, v_x);
  lim.delta_max = std::min({vp.max_steer_angle, lim.delta_ss, lim.delta_max_mu});
  lim.omega_max = std::min(vp.max_steer_rate, lim.omega_ss);
  return lim;
}

/// Time for the actuator state to ramp from its initial value to the limit at
/// the maximum rate. Negative when the initial value already exceeds it.
inline double saturation_time(const SteeringLimits & lim, double initial_actuator)
{
  return (lim.delta_max - initial_actuator) / lim.omega_max;
}

/// Closed-form longitudinal position of the reference point after a
/// J-manoeuvre of duration t_s, small-angle form of x' = v_x - v_s psi.
/// The rate phase lasts min(t_sa, t_s); the angle is held afterwards.
inline double longitudinal_closed_form(
  const LateralSystem & sys, const LateralState & initial, double t_s, double t_sa,
  const SteeringLimits & lim, double x0)
{
  if (t_s < 0.0 || t_sa < 0.0) {
    throw DomainError("manoeuvre times must be non-negative");
  }
  const double v = sys.v_x;
  const auto & p = sys.p;
  switch (sys.kind) {
    case ModelKind::dm:
      throw UnsupportedError("the dynamic model has no closed-form longitudinal integral");
    case ModelKind::pmm:
      return x0 + v * t_s;
    case ModelKind::sscm:
    case ModelKind::km:
      break;
  }

  const double psi0 = initial(1);
  const double delta0 = initial(2);
  const double w = lim.omega_max;

  if (sys.kind == ModelKind::sscm) {
    const double den = detail::sscm_denominator(p, v);
    const double gain = p(1) - p(3) * v * v;
    auto rate_phase = [&](double t) {
      return t * v * (2.0 * delta0 + w * t) * gain *
             (w * t * t * v + 2.0 * delta0 * t * v + 4.0 * p(4) * psi0 * v * v + 4.0 * p(2) * psi0) /
             (8.0 * den * den);
    };
    if (t_sa >= t_s) {
      return x0 + v * t_s - rate_phase(t_s);
    }
    const double held = delta0 + w * t_sa;
    return x0 + v * t_s - rate_phase(t_sa) +
           held * v * gain * (t_sa - t_s) *
             (2.0 * p(2) * psi0 + 2.0 * p(4) * psi0 * v * v + w * t_sa * t_sa * v +
              2.0 * delta0 * t_sa * v - held * t_sa * v + held * t_s * v) /
             (2.0 * den * den);
  }

  // Kinematic model: p1 = l_r / l, p2 = 1 / l.
  auto rate_phase = [&](double t) {
    return p(1) * t * v * (2.0 * delta0 + w * t) *
           (w * p(2) * v * t * t + 2.0 * delta0 * p(2) * v * t + 4.0 * psi0) / 8.0;
  };
  if (t_sa >= t_s) {
    return x0 + v * t_s - rate_phase(t_s);
  }
  const double held = delta0 + w * t_sa;
  return x0 + v * t_s - rate_phase(t_sa) +
         held * p(1) * v * (t_sa - t_s) *
           (2.0 * psi0 + 2.0 * delta0 * p(2) * t_sa * v - held * p(2) * t_sa * v +
            held * p(2) * t_s * v + w * p(2) * t_sa * t_sa * v) /
           2.0;
}

}  // namespace critzone

#endif  // CRITZONE__MODELS_HPP_
