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

#ifndef CRITZONE__STEERING_HPP_
#define CRITZONE__STEERING_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critzone/error.hpp"
#include "critzone/models.hpp"
#include "critzone/propagate.hpp"
#include "critzone/scenario.hpp"

namespace critzone
{

enum class RootSolver { newton, halley };

constexpr std::string_view to_string(RootSolver solver)
{
  return solver == RootSolver::newton ? "newton" : "halley";
}

inline std::optional<RootSolver> parse_root_solver(std::string_view text)
{
  if (text == "newton") {
    return RootSolver::newton;
  }
  if (text == "halley") {
    return RootSolver::halley;
  }
  return std::nullopt;
}

struct RootConfig
{
  double t0{100.0};   // start far to the right of every root [s]
  double tol{1e-6};   // stop when |g_s| < tol [m]
  double step{1.0};   // damping in (0, 1]
  int max_iter{100};
  RootSolver solver{RootSolver::halley};

  void validate() const
  {
    if (!(t0 > 0.0)) {
      throw DomainError("root finder start t0 must be positive");
    }
    if (!(tol > 0.0)) {
      throw DomainError("root finder tolerance must be positive");
    }
    if (!(step > 0.0 && step <= 1.0)) {
      throw DomainError("root finder step must lie in (0, 1]");
    }
    if (max_iter < 1) {
      throw DomainError("root finder max_iter must be at least 1");
    }
  }
};

/// Front-right corner reaching y_L + y_margin under a constant input.
struct BoundaryProblem
{
  LateralSystem system;
  LateralState x0;
  double u{0.0};
  double y_L{0.0};
  double y_margin{0.0};
  double width{0.0};

  double target() const { return y_L + y_margin; }
};

/// g_s and its first two time derivatives at one horizon.
struct Residual
{
  double g{0.0};
  double dg{0.0};
  double ddg{0.0};
};

/// Residual of a lateral state that already sits at the horizon of interest.
inline Residual residual_at_state(const BoundaryProblem & pb, const LateralState & x)
{
  const auto & sys = pb.system;
  const auto row = sys.C.row(0);
  const LateralState xd = derivative(sys, x, pb.u);
  Residual r;
  r.g = row.dot(x) - 0.5 * pb.width - pb.target();
  r.dg = row.dot(xd);
  r.ddg = row.dot(sys.A * xd);
  return r;
}

inline Residual evaluate_residual(const BoundaryProblem & pb, double t, TransitionCache & cache)
{
  return residual_at_state(pb, cache.propagate(pb.x0, pb.u, t));
}

inline Residual evaluate_residual(const BoundaryProblem & pb, double t)
{
  require_dimension(pb.system, pb.x0);
  return residual_at_state(pb, propagate(pb.system, pb.x0, pb.u, t));
}

inline double g_s(const BoundaryProblem & pb, double t) { return evaluate_residual(pb, t).g; }
inline double g_s_dot(const BoundaryProblem & pb, double t) { return evaluate_residual(pb, t).dg; }
inline double g_s_ddot(const BoundaryProblem & pb, double t) { return evaluate_residual(pb, t).ddg; }

struct RootResult
{
  double root{0.0};
  int iterations{0};  // residual evaluations, including the accepting one
  bool no_risk{false};  // no positive root: the corner is already clear
  bool tangent{false};  // |g_s'| < 1e-12 at the accepted root (double root)
};

inline constexpr double kTangencyThreshold = 1e-12;

/// Right-start Newton or Halley iteration on a residual functor
/// f(t) -> Residual. Starting past the largest root keeps every iterate on
/// the locally convex, monotone branch, so the largest root is found.
template<typename ResidualFn>
RootResult solve_from_right(ResidualFn && f, const RootConfig & config)
{
  config.validate();
  double t = config.t0;
  RootResult out;
  std::optional<double> g_at_zero;
  for (int k = 0; k < config.max_iter; ++k) {
    const Residual r = f(t);
    ++out.iterations;
    if (std::abs(r.g) < config.tol) {
      out.root = t;
      out.tangent = std::abs(r.dg) < kTangencyThreshold;
      return out;
    }
    if (r.dg == 0.0 || !std::isfinite(r.dg)) {
      throw SingularityError(t, "g_s' vanishes at t = " + std::to_string(t));
    }
    double denom = r.dg;
    if (config.solver == RootSolver::halley) {
      denom = r.dg - r.g * r.ddg / (2.0 * r.dg);
      if (denom == 0.0 || !std::isfinite(denom)) {
        throw SingularityError(t, "Halley denominator vanishes at t = " + std::to_string(t));
      }
    }
    double next = t - config.step * r.g / denom;
    if (next < 0.0) {
      // Heading past t = 0: either nothing to avoid, or an overshoot.
      if (!g_at_zero) {
        g_at_zero = f(0.0).g;
        ++out.iterations;
      }
      if (*g_at_zero >= -config.tol) {
        out.root = 0.0;
        out.no_risk = true;
        return out;
      }
      next = 0.5 * t;
    }
    t = next;
  }
  throw NonConvergenceError(
    t, out.iterations,
    "root finder did not converge in " + std::to_string(config.max_iter) + " iterations");
}

inline RootResult find_root(const BoundaryProblem & pb, const RootConfig & config, TransitionCache & cache)
{
  require_dimension(pb.system, pb.x0);
  return solve_from_right([&](double t) { return evaluate_residual(pb, t, cache); }, config);
}

inline RootResult newton_raphson(const BoundaryProblem & pb, RootConfig config)
{
  config.solver = RootSolver::newton;
  TransitionCache cache(pb.system);
  return find_root(pb, config, cache);
}

inline RootResult halley(const BoundaryProblem & pb, RootConfig config)
{
  config.solver = RootSolver::halley;
  TransitionCache cache(pb.system);
  return find_root(pb, config, cache);
}

/// Piecewise-constant steering: rate omega until t_sa, then angle held.
struct Manoeuvre
{
  LateralSystem system;
  LateralState x0;
  double omega{0.0};
  double t_sa{0.0};
  LateralState at_switch;  // x(t_sa)

  LateralState state_at(double t, TransitionCache & cache) const
  {
    if (t <= t_sa) {
      return cache.propagate(x0, omega, t);
    }
    return cache.propagate(at_switch, 0.0, t - t_sa);
  }
};

inline Manoeuvre make_manoeuvre(
  const LateralSystem & sys, const LateralState & x0, const SteeringLimits & lim,
  TransitionCache & cache)
{
  Manoeuvre m;
  m.system = sys;
  m.x0 = x0;
  m.omega = lim.omega_max;
  // An actuator already past its limit holds its initial value.
  m.t_sa = std::max(0.0, saturation_time(lim, x0(actuator_index(sys.kind))));
  m.at_switch = cache.propagate(x0, m.omega, m.t_sa);
  return m;
}

struct Sample
{
  double t{0.0};
  LateralState x;
};

/// States at t = 0, dt, 2 dt, ... and at t_end itself. Consecutive samples
/// are chained through the dt transition pair, so only a handful of matrix
/// exponentials are evaluated regardless of the sample count.
inline std::vector<Sample> sample_manoeuvre(
  const Manoeuvre & m, double t_end, double dt, TransitionCache & cache)
{
  if (!(dt > 0.0)) {
    throw DomainError("sampling interval must be positive");
  }
  std::vector<Sample> out;
  const auto steps = static_cast<size_t>(std::floor(t_end / dt));
  out.reserve(steps + 2);
  const TransitionPair & step = cache.at(dt);
  LateralState x = m.x0;
  bool switched = m.t_sa <= 0.0;
  if (switched) {
    x = m.at_switch;
  }
  out.push_back({0.0, x});
  for (size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (!switched && t > m.t_sa) {
      x = m.state_at(t, cache);
      switched = true;
    } else {
      x = apply(step, x, switched ? 0.0 : m.omega);
    }
    out.push_back({t, x});
  }
  if (out.back().t < t_end) {
    out.push_back({t_end, m.state_at(t_end, cache)});
  }
  return out;
}

/// Reference-point longitudinal speed v_x - v_s psi (small angles).
inline double longitudinal_rate(const LateralSystem & sys, const LateralState & x)
{
  const double v = sys.v_x;
  switch (sys.kind) {
    case ModelKind::dm:
      return v - x(2) * x(1);
    case ModelKind::sscm:
      return v - detail::sscm_lateral_gain(sys.p, v) * v * x(2) * x(1);
    case ModelKind::km:
      return v - sys.p(1) * v * x(2) * x(1);
    case ModelKind::pmm:
      return v;
  }
  return v;
}

/// Trapezoidal integral of the longitudinal rate over the samples.
inline double integrate_longitudinal(const LateralSystem & sys, const std::vector<Sample> & samples)
{
  double s = 0.0;
  for (size_t k = 1; k < samples.size(); ++k) {
    const double h = samples[k].t - samples[k - 1].t;
    s += 0.5 * h * (longitudinal_rate(sys, samples[k - 1].x) + longitudinal_rate(sys, samples[k].x));
  }
  return s;
}

inline double heading(ModelKind kind, const LateralState & x)
{
  const auto idx = heading_index(kind);
  return idx ? x(*idx) : 0.0;
}

struct SteeringTime
{
  double t_s{0.0};
  double t_sj{0.0};
  double t_sa{0.0};
  bool no_risk{false};
  bool tangent{false};
  int iterations{0};
  LateralState final_state;
};

/// Steering duration of the J-manoeuvre: one root solve at full rate, and a
/// second one at held angle when the angle saturates first.
inline SteeringTime steering_time(
  const BoundaryProblem & pb, const SteeringLimits & lim, const RootConfig & config,
  TransitionCache & cache)
{
  SteeringTime out;
  BoundaryProblem phase1 = pb;
  phase1.u = lim.omega_max;
  const RootResult r1 = find_root(phase1, config, cache);
  out.iterations = r1.iterations;
  out.t_sj = r1.root;
  const Manoeuvre m = make_manoeuvre(pb.system, pb.x0, lim, cache);
  out.t_sa = m.t_sa;
  if (r1.no_risk || out.t_sj <= 0.0) {
    out.no_risk = true;
    out.t_s = 0.0;
    out.final_state = pb.x0;
    return out;
  }
  if (out.t_sa >= out.t_sj) {
    out.t_s = out.t_sj;
    out.tangent = r1.tangent;
    out.final_state = cache.propagate(pb.x0, lim.omega_max, out.t_s);
    return out;
  }
  BoundaryProblem phase2 = pb;
  phase2.x0 = m.at_switch;
  phase2.u = 0.0;
  const RootResult r2 = find_root(phase2, config, cache);
  out.iterations += r2.iterations;
  out.tangent = r2.tangent;
  out.t_s = out.t_sa + r2.root;
  out.final_state = cache.propagate(m.at_switch, 0.0, r2.root);
  return out;
}

enum class SteerAlgorithm {
  backward_integrated = 2,
  backward_simplified = 3,
  forward = 4,
};

constexpr std::string_view to_string(SteerAlgorithm a)
{
  switch (a) {
    case SteerAlgorithm::backward_integrated:
      return "backward-integrated";
    case SteerAlgorithm::backward_simplified:
      return "backward-simplified";
    case SteerAlgorithm::forward:
      return "forward";
  }
  return "unknown";
}

inline std::optional<SteerAlgorithm> parse_algorithm(std::string_view text)
{
  if (text == "2" || text == "alg2") {
    return SteerAlgorithm::backward_integrated;
  }
  if (text == "3" || text == "alg3") {
    return SteerAlgorithm::backward_simplified;
  }
  if (text == "4" || text == "alg4") {
    return SteerAlgorithm::forward;
  }
  return std::nullopt;
}

struct SteerOptions
{
  RootConfig root;
  double dt_integration{0.01};  // trapezoid step for the DM longitudinal integral
};

struct SteerOutcome
{
  SteerAlgorithm algorithm{SteerAlgorithm::backward_integrated};
  double t_s{0.0};
  double t_sj{0.0};
  double t_sa{0.0};
  LateralState final_state;
  double dx_s{0.0};  // x_FR(t_s) - x_L(t_s)
  bool avoidable{true};
  bool no_risk{false};
  bool tangent{false};
  int iterations{0};
  // Gap (lead rear to ego front) at which this manoeuvre ends exactly at
  // x_margin. Backward algorithms only; NaN for the forward check.
  double required_gap{std::numeric_limits<double>::quiet_NaN()};
};

/// System, limits and initial state for one scenario and model.
struct SteerSetup
{
  LateralSystem system;
  SteeringLimits limits;
  LateralState x0;
  BoundaryProblem problem;
};

inline SteerSetup make_setup(const Scenario & sc, ModelKind kind)
{
  sc.validate();
  SteerSetup s;
  s.system = build_system(sc.params, kind, sc.v_x);
  s.limits = steering_limits(sc.params, sc.comfort, sc.mu, sc.v_x, kind);
  s.x0 = sc.initial_state(kind);
  s.problem = BoundaryProblem{s.system, s.x0, s.limits.omega_max, sc.y_L, sc.y_margin, sc.params.width};
  return s;
}

namespace detail
{

// Travel of the reference point over the manoeuvre.
inline double steering_travel(
  const SteerSetup & s, const SteeringTime & st, const SteerOptions & opt, TransitionCache & cache)
{
  switch (s.system.kind) {
    case ModelKind::dm: {
      const Manoeuvre m = make_manoeuvre(s.system, s.x0, s.limits, cache);
      return integrate_longitudinal(s.system, sample_manoeuvre(m, st.t_s, opt.dt_integration, cache));
    }
    case ModelKind::sscm:
    case ModelKind::km:
    case ModelKind::pmm:
      return longitudinal_closed_form(s.system, s.x0, st.t_s, st.t_sa, s.limits, 0.0);
  }
  return 0.0;
}

inline SteerOutcome backward(
  const Scenario & sc, ModelKind kind, const SteerOptions & opt, SteerAlgorithm algorithm)
{
  const SteerSetup s = make_setup(sc, kind);
  TransitionCache cache(s.system);
  const SteeringTime st = steering_time(s.problem, s.limits, opt.root, cache);
  SteerOutcome out;
  out.algorithm = algorithm;
  out.t_s = st.t_s;
  out.t_sj = st.t_sj;
  out.t_sa = st.t_sa;
  out.final_state = st.final_state;
  out.iterations = st.iterations;
  out.no_risk = st.no_risk;
  out.tangent = st.tangent;
  if (st.no_risk) {
    out.dx_s = -sc.gap;
    out.avoidable = true;
    out.required_gap = sc.x_margin;
    return out;
  }
  // Ego front-right corner ahead of the ego start, lead rear ahead of the
  // ego front at t = 0 by the gap.
  double corner_advance = 0.0;
  if (algorithm == SteerAlgorithm::backward_simplified) {
    corner_advance = sc.v_x * st.t_s;
  } else {
    corner_advance = detail::steering_travel(s, st, opt, cache) +
                     0.5 * sc.params.width * heading(kind, st.final_state);
  }
  const double lead_advance = sc.v_L * st.t_s;
  out.dx_s = corner_advance - lead_advance - sc.gap;
  out.required_gap = corner_advance - lead_advance + sc.x_margin;
  out.avoidable = -out.dx_s >= sc.x_margin;
  return out;
}

}  // namespace detail

/// Backward steering check with the longitudinal travel integrated along the
/// manoeuvre (trapezoid for DM, closed form for the other models).
inline SteerOutcome avoid_by_steering_backward(
  const Scenario & sc, ModelKind kind, const SteerOptions & opt = {})
{
  return detail::backward(sc, kind, opt, SteerAlgorithm::backward_integrated);
}

/// Backward steering check with the front corner advancing at v_x.
inline SteerOutcome avoid_by_steering_simplified(
  const Scenario & sc, ModelKind kind, const SteerOptions & opt = {})
{
  return detail::backward(sc, kind, opt, SteerAlgorithm::backward_simplified);
}

/// Forward check: steer until the gap closes to x_margin, then test the
/// front-right corner against the lead's corner. No root finding.
inline SteerOutcome avoid_by_steering_forward(
  const Scenario & sc, ModelKind kind, const SteerOptions & /*opt*/ = {})
{
  if (!(sc.v_x > sc.v_L)) {
    throw DomainError("forward steering check needs v_x > v_L");
  }
  const SteerSetup s = make_setup(sc, kind);
  TransitionCache cache(s.system);
  SteerOutcome out;
  out.algorithm = SteerAlgorithm::forward;
  const Manoeuvre m = make_manoeuvre(s.system, s.x0, s.limits, cache);
  out.t_sa = m.t_sa;
  if (!std::isfinite(sc.gap)) {
    out.t_s = std::numeric_limits<double>::infinity();
    out.final_state = s.x0;
    out.avoidable = true;
    return out;
  }
  out.t_s = (sc.gap - sc.x_margin) / sc.relative_speed();
  if (out.t_s < 0.0) {
    // Already inside the longitudinal margin.
    out.t_s = 0.0;
    out.final_state = s.x0;
    out.dx_s = -sc.gap;
    out.avoidable = false;
    return out;
  }
  out.final_state = m.state_at(out.t_s, cache);
  out.dx_s = -sc.x_margin;
  const double y_fr = output(s.system, out.final_state, 0.0)(0) - 0.5 * sc.params.width;
  out.avoidable = y_fr >= sc.target();
  return out;
}

inline SteerOutcome avoid_by_steering(
  const Scenario & sc, ModelKind kind, SteerAlgorithm algorithm, const SteerOptions & opt = {})
{
  switch (algorithm) {
    case SteerAlgorithm::backward_integrated:
      return avoid_by_steering_backward(sc, kind, opt);
    case SteerAlgorithm::backward_simplified:
      return avoid_by_steering_simplified(sc, kind, opt);
    case SteerAlgorithm::forward:
      return avoid_by_steering_forward(sc, kind, opt);
  }
  return {};
}

}  // namespace critzone

#endif  // CRITZONE__STEERING_HPP_
