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

#ifndef CRITZONE__BENCH_HPP_
#define CRITZONE__BENCH_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "critzone/error.hpp"
#include "critzone/models.hpp"
#include "critzone/propagate.hpp"
#include "critzone/scenario.hpp"
#include "critzone/steering.hpp"
#include "critzone/units.hpp"

namespace critzone
{

struct PhaseStats
{
  double median_us{0.0};
  double p95_us{0.0};
};

struct BenchEntry
{
  ModelKind model{ModelKind::dm};
  SteerAlgorithm algorithm{SteerAlgorithm::backward_integrated};
  PhaseStats solve;        // steering time (root finding or the direct formula)
  PhaseStats states;       // lateral states along / at the end of the manoeuvre
  PhaseStats integration;  // longitudinal position at t_s
  PhaseStats total;
  int iterations{0};       // residual evaluations of the last run
};

struct SolverBench
{
  RootSolver solver{RootSolver::halley};
  PhaseStats total;
  int iterations{0};
  double root{0.0};
};

struct BenchReport
{
  int warmup{0};
  int runs{0};
  std::vector<BenchEntry> entries;
  std::vector<SolverBench> solvers;

  const BenchEntry * find(ModelKind m, SteerAlgorithm a) const
  {
    for (const auto & e : entries) {
      if (e.model == m && e.algorithm == a) {
        return &e;
      }
    }
    return nullptr;
  }
};

struct BenchConfig
{
  int warmup{100};
  int runs{1000};
  std::vector<ModelKind> models{ModelKind::dm, ModelKind::sscm, ModelKind::km, ModelKind::pmm};
  std::vector<SteerAlgorithm> algorithms{
    SteerAlgorithm::backward_integrated, SteerAlgorithm::backward_simplified,
    SteerAlgorithm::forward};
  SteerOptions steer;
};

/// DM at 80 km/h starting at [2.75 m, 2 deg, 0.5 m/s, 0 deg/s, -2 deg] with
/// the lead corner 2 m to the left: g_s has three roots.
inline BoundaryProblem three_root_problem(const VehicleParams & vp = {}, const ComfortBounds & cb = {})
{
  const double v_x = units::kmh_to_ms(80.0);
  const auto sys = build_system(vp, ModelKind::dm, v_x);
  const auto lim = steering_limits(vp, cb, 0.9, v_x, ModelKind::dm);
  LateralState x0(5);
  x0 << 2.75, units::deg_to_rad(2.0), 0.5, 0.0, units::deg_to_rad(-2.0);
  return BoundaryProblem{sys, x0, lim.omega_max, 2.0, 0.0, vp.width};
}

namespace detail
{

using Clock = std::chrono::steady_clock;

inline double micros(Clock::time_point a, Clock::time_point b)
{
  return std::chrono::duration<double, std::micro>(b - a).count();
}

inline PhaseStats summarize(std::vector<double> v)
{
  PhaseStats s;
  if (v.empty()) {
    return s;
  }
  std::sort(v.begin(), v.end());
  s.median_us = v[v.size() / 2];
  s.p95_us = v[std::min(v.size() - 1, static_cast<size_t>(std::ceil(0.95 * v.size())) - 1)];
  return s;
}

// Keeps results observable so the optimizer cannot drop a phase.
inline volatile double bench_sink = 0.0;

struct PhaseTimes
{
  double solve{0.0};
  double states{0.0};
  double integration{0.0};
  int iterations{0};
};

inline PhaseTimes timed_steer(
  const Scenario & sc, ModelKind kind, SteerAlgorithm algorithm, const SteerOptions & opt)
{
  PhaseTimes pt;
  const auto t0 = Clock::now();
  const SteerSetup s = make_setup(sc, kind);
  TransitionCache cache(s.system);
  SteeringTime st;
  if (algorithm == SteerAlgorithm::forward) {
    st.t_s = (sc.gap - sc.x_margin) / sc.relative_speed();
  } else {
    st = steering_time(s.problem, s.limits, opt.root, cache);
    pt.iterations = st.iterations;
  }
  const auto t1 = Clock::now();

  std::vector<Sample> samples;
  if (algorithm == SteerAlgorithm::forward) {
    const Manoeuvre m = make_manoeuvre(s.system, s.x0, s.limits, cache);
    st.final_state = m.state_at(std::max(0.0, st.t_s), cache);
  } else if (algorithm == SteerAlgorithm::backward_integrated && kind == ModelKind::dm) {
    const Manoeuvre m = make_manoeuvre(s.system, s.x0, s.limits, cache);
    samples = sample_manoeuvre(m, st.t_s, opt.dt_integration, cache);
  }
  const auto t2 = Clock::now();

  double result = 0.0;
  if (algorithm == SteerAlgorithm::forward) {
    result = output(s.system, st.final_state, 0.0)(0);
  } else if (algorithm == SteerAlgorithm::backward_simplified) {
    result = sc.v_x * st.t_s;
  } else if (kind == ModelKind::dm) {
    result = integrate_longitudinal(s.system, samples);
  } else {
    result = longitudinal_closed_form(s.system, s.x0, st.t_s, st.t_sa, s.limits, 0.0);
  }
  const auto t3 = Clock::now();
  bench_sink = bench_sink + result;

  pt.solve = micros(t0, t1);
  pt.states = micros(t1, t2);
  pt.integration = micros(t2, t3);
  return pt;
}

}  // namespace detail

/// Phase-split timings per (model, algorithm) plus a Newton/Halley
/// comparison on the three-root problem. Single-threaded by design.
inline BenchReport bench(const Scenario & sc, const BenchConfig & cfg = {})
{
  if (cfg.warmup < 0 || cfg.runs < 1) {
    throw DomainError("bench needs warmup >= 0 and runs >= 1");
  }
  sc.validate();
  BenchReport report;
  report.warmup = cfg.warmup;
  report.runs = cfg.runs;
  // Runs are interleaved across all pairs so that clock and cache drift
  // affect every pair alike.
  struct Series
  {
    ModelKind model;
    SteerAlgorithm algorithm;
    std::vector<double> solve, states, integration, total;
    int iterations{0};
  };
  std::vector<Series> series;
  for (const auto model : cfg.models) {
    for (const auto algorithm : cfg.algorithms) {
      series.push_back({model, algorithm, {}, {}, {}, {}, 0});
    }
  }
  for (int i = 0; i < cfg.warmup + cfg.runs; ++i) {
    for (auto & s : series) {
      const auto pt = detail::timed_steer(sc, s.model, s.algorithm, cfg.steer);
      s.iterations = pt.iterations;
      if (i < cfg.warmup) {
        continue;
      }
      s.solve.push_back(pt.solve);
      s.states.push_back(pt.states);
      s.integration.push_back(pt.integration);
      s.total.push_back(pt.solve + pt.states + pt.integration);
    }
  }
  for (auto & s : series) {
    BenchEntry e;
    e.model = s.model;
    e.algorithm = s.algorithm;
    e.solve = detail::summarize(std::move(s.solve));
    e.states = detail::summarize(std::move(s.states));
    e.integration = detail::summarize(std::move(s.integration));
    e.total = detail::summarize(std::move(s.total));
    e.iterations = s.iterations;
    report.entries.push_back(e);
  }

  const BoundaryProblem pb = three_root_problem(sc.params, sc.comfort);
  for (const auto solver : {RootSolver::newton, RootSolver::halley}) {
    RootConfig rc = cfg.steer.root;
    rc.solver = solver;
    SolverBench sb;
    sb.solver = solver;
    std::vector<double> times;
    for (int i = 0; i < cfg.warmup + cfg.runs; ++i) {
      const auto t0 = detail::Clock::now();
      TransitionCache cache(pb.system);
      const RootResult r = find_root(pb, rc, cache);
      const auto t1 = detail::Clock::now();
      if (i >= cfg.warmup) {
        times.push_back(detail::micros(t0, t1));
      }
      sb.iterations = r.iterations;
      sb.root = r.root;
    }
    sb.total = detail::summarize(times);
    report.solvers.push_back(sb);
  }
  return report;
}

}  // namespace critzone

#endif  // CRITZONE__BENCH_HPP_
