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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "critzone/models.hpp"
#include "critzone/units.hpp"
#include "oracles.hpp"

namespace
{

using namespace critzone;
using units::deg_to_rad;
using units::kmh_to_ms;

const VehicleParams kVehicle{};
const ComfortBounds kComfort{};

// Lateral acceleration output after holding a constant steering angle long
// enough for the transient to die out.
double settled_lateral_accel(ModelKind kind, double v_x, double delta)
{
  const auto sys = build_system(kVehicle, kind, v_x);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dimension());
  x(actuator_index(kind)) = delta;
  x = oracle::rk4_linear(sys.A, Eigen::VectorXd(sys.B), x, 0.0, 20.0, 1e-3);
  return (Eigen::MatrixXd(sys.C) * x)(1);
}

TEST(BuildSystem, PointMassIsTripleIntegrator)
{
  const auto sys = build_system(kVehicle, ModelKind::pmm, 17.0);
  Eigen::Matrix3d a;
  a << 0, 1, 0, 0, 0, 1, 0, 0, 0;
  EXPECT_EQ(Eigen::MatrixXd(sys.A), Eigen::MatrixXd(a));
  EXPECT_EQ(Eigen::VectorXd(sys.B), Eigen::Vector3d(0, 0, 1));
}

TEST(BuildSystem, DynamicModelEntries)
{
  const double v = kmh_to_ms(80.0);
  const auto sys = build_system(kVehicle, ModelKind::dm, v);
  ASSERT_EQ(sys.A.rows(), 5);
  EXPECT_NEAR(sys.A(0, 1), 22.2222, 1e-4);
  EXPECT_TRUE(sys.A.row(4).isZero(0.0));
  EXPECT_EQ(sys.C.rows(), 3);
}

TEST(BuildSystem, FrontCornerRowIsSpeedIndependent)
{
  for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km}) {
    const auto slow = build_system(kVehicle, kind, 5.0);
    const auto fast = build_system(kVehicle, kind, 40.0);
    EXPECT_EQ(Eigen::VectorXd(slow.C.row(0).transpose()), Eigen::VectorXd(fast.C.row(0).transpose()));
    EXPECT_EQ(slow.C(0, 0), 1.0);
    EXPECT_EQ(slow.C(0, 1), kVehicle.front_overhang);
  }
}

TEST(BuildSystem, KinematicYawRateMatchesGeometry)
{
  const double v = kmh_to_ms(70.0);
  const double delta = deg_to_rad(1.0);
  const auto sys = build_system(kVehicle, ModelKind::km, v);
  Eigen::VectorXd x = Eigen::Vector3d(0.0, 0.0, delta);
  const Eigen::VectorXd a = oracle::rk4_linear(sys.A, Eigen::VectorXd(sys.B), x, 0.0, 4.0, 1e-3);
  const Eigen::VectorXd b = oracle::rk4_linear(sys.A, Eigen::VectorXd(sys.B), x, 0.0, 5.0, 1e-3);
  EXPECT_NEAR(b(1) - a(1), v * delta / kVehicle.wheelbase(), 1e-10);
}

TEST(BuildSystem, RejectsNonPositiveSpeed)
{
  EXPECT_THROW(build_system(kVehicle, ModelKind::dm, 0.0), DomainError);
  EXPECT_THROW(build_system(kVehicle, ModelKind::km, -1.0), DomainError);
}

TEST(BuildSystem, RebuildAtSpeedReusesParameters)
{
  const auto sys = build_system(kVehicle, ModelKind::dm, 10.0);
  const auto moved = at_speed(sys, 30.0);
  EXPECT_EQ(moved.p.values, sys.p.values);
  EXPECT_EQ(Eigen::MatrixXd(moved.A), Eigen::MatrixXd(build_system(kVehicle, ModelKind::dm, 30.0).A));
}

TEST(SteadyState, AngleAtEightyKmh)
{
  const double v = kmh_to_ms(80.0);
  const double delta = steady_state_angle(kVehicle, 5.0, v);
  EXPECT_NEAR(delta, 0.0398, 5e-5);
  EXPECT_NEAR(settled_lateral_accel(ModelKind::dm, v, delta), 5.0, 1e-3);
}

TEST(SteadyState, ZeroDemandGivesZero)
{
  EXPECT_EQ(steady_state_angle(kVehicle, 0.0, 12.0), 0.0);
  EXPECT_EQ(steady_state_rate(kVehicle, 0.0, 12.0), 0.0);
}

TEST(SteadyState, AngleDecreasesWithSpeed)
{
  double prev = std::numeric_limits<double>::infinity();
  for (double kmh = 30.0; kmh <= 120.0; kmh += 1.0) {
    const double d = steady_state_angle(kVehicle, 5.0, kmh_to_ms(kmh));
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(SteadyState, RateSharesTheAngleBracket)
{
  const double v = kmh_to_ms(80.0);
  EXPECT_NEAR(steady_state_rate(kVehicle, 5.0, v), 0.0398, 5e-5);
  EXPECT_DOUBLE_EQ(steady_state_rate(kVehicle, 5.0, v), steady_state_angle(kVehicle, 5.0, v));
}

TEST(SteadyState, RejectsZeroSpeed)
{
  EXPECT_THROW(steady_state_angle(kVehicle, 5.0, 0.0), DomainError);
  EXPECT_THROW(steady_state_angle(kVehicle, 5.0, 10.0, ModelKind::pmm), UnsupportedError);
}

TEST(SteadyState, SettlesToRequestedAccelerationAcrossSpeeds)
{
  for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km}) {
    for (double kmh = 30.0; kmh <= 130.0; kmh += 10.0) {
      const double v = kmh_to_ms(kmh);
      const double delta = steady_state_angle(kVehicle, 5.0, v, kind);
      EXPECT_NEAR(settled_lateral_accel(kind, v, delta), 5.0, 1e-3) << to_string(kind) << " " << kmh;
    }
  }
}

TEST(Friction, LimitAboveComfortAtModerateFriction)
{
  const double v = kmh_to_ms(80.0);
  EXPECT_GT(friction_angle_limit(kVehicle, 0.3, v), steady_state_angle(kVehicle, 5.0, v));
}

TEST(Friction, LimitVanishesWithFriction)
{
  const double v = kmh_to_ms(80.0);
  const double unit = friction_angle_limit(kVehicle, 1.0, v);
  EXPECT_NEAR(friction_angle_limit(kVehicle, 1e-9, v), 1e-9 * unit, 1e-24);
  EXPECT_LT(friction_angle_limit(kVehicle, 1e-9, v), 1e-9);
  EXPECT_THROW(friction_angle_limit(kVehicle, 0.0, v), DomainError);
  EXPECT_THROW(friction_angle_limit(kVehicle, -0.1, v), DomainError);
}

TEST(Friction, LimitMeetsComfortNearThreshold)
{
  const double v = kmh_to_ms(80.0);
  const double comfort = steady_state_angle(kVehicle, 5.0, v);
  EXPECT_NEAR(friction_angle_limit(kVehicle, 0.285, v) / comfort, 1.0, 5e-3);
}

TEST(Friction, ThresholdValues)
{
  EXPECT_NEAR(friction_threshold(kVehicle, 5.0), 0.285, 5e-3);
  VehicleParams sym = kVehicle;
  sym.rear_axle = sym.front_axle;
  EXPECT_DOUBLE_EQ(friction_threshold(sym, sym.gravity), 0.5);
}

TEST(Friction, ThresholdIsWhereTheMinimumSwitches)
{
  const double v = kmh_to_ms(80.0);
  for (double a_smax : {2.5, 5.0}) {
    auto diff = [&](double mu) {
      return friction_angle_limit(kVehicle, mu, v) - steady_state_angle(kVehicle, a_smax, v);
    };
    double lo = 1e-3;
    double hi = 1.2;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (diff(mid) < 0.0 ? lo : hi) = mid;
    }
    const double mu_star = friction_threshold(kVehicle, a_smax);
    EXPECT_NEAR(mu_star, 0.5 * (lo + hi), 1e-12);
    EXPECT_LT(diff(mu_star * 0.99), 0.0);
    EXPECT_GT(diff(mu_star * 1.01), 0.0);
  }
  EXPECT_NEAR(friction_threshold(kVehicle, 2.5), 0.1423, 1e-4);
}

TEST(Limits, ComfortBindsOnDryRoad)
{
  const double v = kmh_to_ms(80.0);
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, v, ModelKind::dm);
  EXPECT_EQ(lim.delta_max, lim.delta_ss);
  EXPECT_EQ(lim.omega_max, lim.omega_ss);
}

TEST(Limits, FrictionBindsOnSlipperyRoad)
{
  const auto lim = steering_limits(kVehicle, kComfort, 0.1, kmh_to_ms(80.0), ModelKind::dm);
  EXPECT_EQ(lim.delta_max, lim.delta_max_mu);
}

TEST(Limits, SaturateAtPhysicalLimits)
{
  ComfortBounds loose = kComfort;
  loose.max_lat_accel = 1e9;
  loose.max_lat_jerk = 1e9;
  const auto lim = steering_limits(kVehicle, loose, 1e9, kmh_to_ms(80.0), ModelKind::dm);
  EXPECT_EQ(lim.delta_max, kVehicle.max_steer_angle);
  EXPECT_EQ(lim.omega_max, kVehicle.max_steer_rate);
}

TEST(Limits, PointMassUsesAccelerationAndJerk)
{
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, 20.0, ModelKind::pmm);
  EXPECT_EQ(lim.delta_max, kComfort.max_lat_accel);
  EXPECT_EQ(lim.omega_max, kComfort.max_lat_jerk);
  EXPECT_DOUBLE_EQ(saturation_time(lim, 0.0), 1.0);
}

TEST(Limits, ExactMinimumOverRandomDraws)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  std::uniform_real_distribution<double> mu(0.05, 1.2);
  std::uniform_real_distribution<double> speed(5.0, 40.0);
  int above_critical = 0;
  for (int i = 0; i < 1000; ++i) {
    VehicleParams vp = kVehicle;
    vp.mass *= scale(rng);
    vp.front_stiffness *= scale(rng);
    vp.rear_stiffness *= scale(rng);
    vp.max_steer_angle *= scale(rng) * 0.05;
    vp.max_steer_rate *= scale(rng) * 0.1;
    ComfortBounds cb = kComfort;
    cb.max_lat_accel *= scale(rng);
    cb.max_lat_jerk *= scale(rng);
    const double v = speed(rng);
    const double m = mu(rng);
    if (detail::steady_state_bracket(vp, v) <= 0.0) {
      EXPECT_THROW(steering_limits(vp, cb, m, v, ModelKind::dm), DomainError);
      ++above_critical;
      continue;
    }
    for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km}) {
      const auto lim = steering_limits(vp, cb, m, v, kind);
      EXPECT_EQ(lim.delta_max, std::min({vp.max_steer_angle, lim.delta_ss, lim.delta_max_mu}));
      EXPECT_EQ(lim.omega_max, std::min(vp.max_steer_rate, lim.omega_ss));
      EXPECT_GE(lim.delta_max, 0.0);
      EXPECT_GE(lim.omega_max, 0.0);
    }
  }
  EXPECT_LT(above_critical, 200);
}

// Reference point travel by RK4 on [lateral state; x] with x' = v_x - v_s psi,
// where v_s is the model's lateral velocity.
double travel_oracle(
  const LateralSystem & sys, const Eigen::VectorXd & x0, double omega, double t_sa, double t_s)
{
  const int n = sys.dimension();
  const Eigen::MatrixXd a = sys.A;
  const Eigen::VectorXd b = sys.B;
  const double v = sys.v_x;
  double lat_gain = 0.0;  // v_s = lat_gain * delta
  if (sys.kind == ModelKind::sscm) {
    const auto & p = sys.p;
    lat_gain = (p(1) - p(3) * v * v) / (p(2) + p(4) * v * v) * v;
  } else {
    lat_gain = sys.p(1) * v;
  }
  auto rhs = [&](double t, const Eigen::VectorXd & s) {
    Eigen::VectorXd d(n + 1);
    const double u = t < t_sa ? omega : 0.0;
    d.head(n) = a * s.head(n) + b * u;
    d(n) = v - lat_gain * s(2) * s(1);
    return d;
  };
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n + 1);
  s.head(n) = x0;
  const double split = std::min(t_sa, t_s);
  s = oracle::rk4(rhs, s, 0.0, split, 1e-4);
  if (t_s > split) {
    s = oracle::rk4(rhs, s, split, t_s, 1e-4);
  }
  return s(n);
}

TEST(ClosedForm, PointMassTravelsAtConstantSpeed)
{
  const auto sys = build_system(kVehicle, ModelKind::pmm, 20.0);
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, 20.0, ModelKind::pmm);
  LateralState x(3);
  x << 1.0, 0.3, -2.0;
  EXPECT_DOUBLE_EQ(longitudinal_closed_form(sys, x, 2.5, 1.0, lim, 3.0), 3.0 + 50.0);
}

TEST(ClosedForm, ZeroDurationStaysPut)
{
  const auto sys = build_system(kVehicle, ModelKind::km, 20.0);
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, 20.0, ModelKind::km);
  EXPECT_DOUBLE_EQ(longitudinal_closed_form(sys, LateralState::Zero(3), 0.0, 0.4, lim, 7.0), 7.0);
}

TEST(ClosedForm, DynamicModelHasNone)
{
  const auto sys = build_system(kVehicle, ModelKind::dm, 20.0);
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, 20.0, ModelKind::dm);
  EXPECT_THROW(longitudinal_closed_form(sys, LateralState::Zero(5), 1.0, 1.0, lim, 0.0), UnsupportedError);
  EXPECT_THROW(
    longitudinal_closed_form(build_system(kVehicle, ModelKind::km, 20.0), LateralState::Zero(3), -1.0, 1.0, lim, 0.0),
    DomainError);
}

TEST(ClosedForm, SteadyCorneringSinglePhaseMatchesQuadrature)
{
  const double v = kmh_to_ms(70.0);
  const auto sys = build_system(kVehicle, ModelKind::sscm, v);
  const auto lim = steering_limits(kVehicle, kComfort, 0.9, v, ModelKind::sscm);
  const LateralState x0 = LateralState::Zero(3);
  const double t_sa = saturation_time(lim, 0.0);
  ASSERT_GT(t_sa, 0.8);
  EXPECT_NEAR(
    longitudinal_closed_form(sys, x0, 0.8, t_sa, lim, 0.0),
    travel_oracle(sys, x0, lim.omega_max, t_sa, 0.8), 1e-4);
}

TEST(ClosedForm, RandomScenariosMatchQuadrature)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> speed(kmh_to_ms(30.0), kmh_to_ms(130.0));
  std::uniform_real_distribution<double> angle(deg_to_rad(-3.0), deg_to_rad(3.0));
  std::uniform_real_distribution<double> dur(0.0, 5.0);
  std::uniform_real_distribution<double> lat(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const auto kind = i % 2 == 0 ? ModelKind::sscm : ModelKind::km;
    const double v = speed(rng);
    const auto sys = build_system(kVehicle, kind, v);
    const auto lim = steering_limits(kVehicle, kComfort, 0.9, v, kind);
    LateralState x0(3);
    x0 << lat(rng), angle(rng), angle(rng) * 0.05;
    const double t_s = dur(rng);
    const double t_sa = std::max(0.0, saturation_time(lim, x0(2)));
    const double got = longitudinal_closed_form(sys, x0, t_s, t_sa, lim, 0.0);
    EXPECT_NEAR(got, travel_oracle(sys, x0, lim.omega_max, t_sa, t_s), 1e-4)
      << to_string(kind) << " draw " << i;
  }
}

TEST(Determinism, RepeatedCallsAreBitIdentical)
{
  for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km, ModelKind::pmm}) {
    const auto a = build_system(kVehicle, kind, 21.3);
    const auto b = build_system(kVehicle, kind, 21.3);
    EXPECT_EQ(Eigen::MatrixXd(a.A), Eigen::MatrixXd(b.A));
    EXPECT_EQ(Eigen::MatrixXd(a.C), Eigen::MatrixXd(b.C));
    const auto la = steering_limits(kVehicle, kComfort, 0.7, 21.3, kind);
    const auto lb = steering_limits(kVehicle, kComfort, 0.7, 21.3, kind);
    EXPECT_EQ(la.delta_max, lb.delta_max);
    EXPECT_EQ(la.omega_max, lb.omega_max);
  }
}

TEST(ModelKind, NamesRoundTrip)
{
  for (auto kind : {ModelKind::dm, ModelKind::sscm, ModelKind::km, ModelKind::pmm}) {
    EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_model_kind("bicycle"));
  EXPECT_EQ(state_dimension(ModelKind::dm), 5);
  EXPECT_EQ(state_dimension(ModelKind::pmm), 3);
}

}  // namespace
