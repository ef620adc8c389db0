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

#ifndef CRITZONE__ZONE_HPP_
#define CRITZONE__ZONE_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "critzone/braking.hpp"
#include "critzone/error.hpp"
#include "critzone/scenario.hpp"
#include "critzone/steering.hpp"

namespace critzone
{

struct ZoneOptions
{
  SteerOptions steer;
  double forward_step{0.2};  // gap increment of the forward search [m]
  double forward_max_gap{500.0};
  double lane_check_dt{0.01};
  bool keep_trajectories{false};
  double trajectory_dt{0.01};
  unsigned threads{1};
};

struct TrajectoryPoint
{
  double t{0.0};
  double x{0.0};    // reference point, relative to its start [m]
  double y{0.0};    // reference point [m]
  double psi{0.0};  // [rad]
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Steering boundary at one lateral offset.
struct BoundaryPoint
{
  double offset{0.0};
  double distance{std::numeric_limits<double>::quiet_NaN()};
  double t_s{0.0};
  double final_heading{0.0};
  bool excluded{false};  // the boundary manoeuvre leaves the lane
  int iterations{0};
  Trajectory trajectory;
};

struct ZoneBoundary
{
  std::vector<double> offsets;
  std::vector<double> steer_distance;
  std::vector<double> steer_ttc;
  std::vector<bool> excluded;
  std::vector<double> final_heading;
  std::vector<Trajectory> trajectories;
  double brake_distance{0.0};
  double brake_ttc{0.0};
  double relative_speed{0.0};
};

namespace detail
{

inline Trajectory trace(const Manoeuvre & m, double t_end, double dt, TransitionCache & cache)
{
  const auto samples = sample_manoeuvre(m, t_end, dt, cache);
  Trajectory out;
  out.reserve(samples.size());
  double x = 0.0;
  for (size_t k = 0; k < samples.size(); ++k) {
    if (k > 0) {
      const double h = samples[k].t - samples[k - 1].t;
      x += 0.5 * h *
           (longitudinal_rate(m.system, samples[k - 1].x) + longitudinal_rate(m.system, samples[k].x));
    }
    out.push_back({samples[k].t, x, samples[k].x(0), heading(m.system.kind, samples[k].x)});
  }
  return out;
}

// Lowest point reached by the front-right corner, relative to the target.
inline double lowest_front_right(
  const Scenario & sc, const Manoeuvre & m, double t_end, double dt, TransitionCache & cache)
{
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto & s : sample_manoeuvre(m, t_end, dt, cache)) {
    lowest = std::min(lowest, output(m.system, s.x, 0.0)(0) - 0.5 * sc.params.width);
  }
  return lowest - sc.target();
}

}  // namespace detail

/// Gap at which steering started now just clears the lead, for one offset.
inline BoundaryPoint steer_boundary(
  Scenario sc, ModelKind kind, SteerAlgorithm algorithm, double offset,
  const ZoneOptions & opt = {})
{
  sc.offset = offset;
  BoundaryPoint bp;
  bp.offset = offset;
  double t_s = 0.0;
  LateralState final_state;
  if (algorithm == SteerAlgorithm::forward) {
    bool found = false;
    for (int k = 0;; ++k) {
      sc.gap = sc.x_margin + opt.forward_step * k;
      if (sc.gap > opt.forward_max_gap) {
        break;
      }
      const auto out = avoid_by_steering_forward(sc, kind, opt.steer);
      if (out.avoidable) {
        found = true;
        bp.distance = sc.gap;
        t_s = out.t_s;
        final_state = out.final_state;
        break;
      }
    }
    if (!found) {
      throw NonConvergenceError(
        opt.forward_max_gap, 0, "forward search found no avoidable gap below " +
                                  std::to_string(opt.forward_max_gap) + " m");
    }
  } else {
    const auto out = avoid_by_steering(sc, kind, algorithm, opt.steer);
    bp.distance = out.required_gap;
    bp.iterations = out.iterations;
    t_s = out.t_s;
    final_state = out.final_state;
  }
  bp.t_s = t_s;
  bp.final_heading = heading(kind, final_state);

  const SteerSetup s = make_setup(sc, kind);
  TransitionCache cache(s.system);
  const Manoeuvre m = make_manoeuvre(s.system, s.x0, s.limits, cache);
  // The start itself sits on the lane edge at offset -lane_width; allow for
  // rounding there.
  bp.excluded =
    detail::lowest_front_right(sc, m, t_s, opt.lane_check_dt, cache) < -sc.lane_width - 1e-9;
  if (opt.keep_trajectories) {
    bp.trajectory = detail::trace(m, t_s, opt.trajectory_dt, cache);
  }
  return bp;
}

inline double steer_boundary_distance(
  const Scenario & sc, ModelKind kind, SteerAlgorithm algorithm, double offset,
  const ZoneOptions & opt = {})
{
  return steer_boundary(sc, kind, algorithm, offset, opt).distance;
}

/// Offsets MIN:MAX:STEP, inclusive of MAX when it lies on the grid.
inline std::vector<double> make_grid(double lo, double hi, double step)
{
  if (!(step > 0.0) || !(hi >= lo)) {
    throw DomainError("grid needs step > 0 and max >= min");
  }
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(n + 1));
  for (long k = 0; k <= n; ++k) {
    grid.push_back(lo + static_cast<double>(k) * step);
  }
  return grid;
}

inline std::vector<double> parse_grid(std::string_view spec)
{
  const auto a = spec.find(':');
  const auto b = a == std::string_view::npos ? a : spec.find(':', a + 1);
  if (b == std::string_view::npos) {
    throw ParseError(0, "grid must be MIN:MAX:STEP, got '" + std::string(spec) + "'");
  }
  try {
    const double lo = std::stod(std::string(spec.substr(0, a)));
    const double hi = std::stod(std::string(spec.substr(a + 1, b - a - 1)));
    const double step = std::stod(std::string(spec.substr(b + 1)));
    return make_grid(lo, hi, step);
  } catch (const std::logic_error &) {
    throw ParseError(0, "grid must be MIN:MAX:STEP, got '" + std::string(spec) + "'");
  }
}

/// 0.1 m spacing across one lane.
inline std::vector<double> default_grid() { return make_grid(-3.7, 0.0, 0.1); }

/// Ten uniformly placed offsets across one lane.
inline std::vector<double> ten_point_grid()
{
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) {
    grid.push_back(-3.7 + 3.7 * k / 9.0);
  }
  return grid;
}

/// Steering boundary over the grid plus the model-independent braking
/// boundary. Offsets are solved in parallel; results land by grid index.
inline ZoneBoundary compute_zone(
  const Scenario & sc, ModelKind kind, SteerAlgorithm algorithm, const std::vector<double> & grid,
  const ZoneOptions & opt = {})
{
  sc.validate();
  for (size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw DomainError("offset grid must be strictly increasing");
    }
  }
  std::vector<BoundaryPoint> points(grid.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (size_t k = next++; k < grid.size(); k = next++) {
      try {
        points[k] = steer_boundary(sc, kind, algorithm, grid[k], opt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, grid.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  ZoneBoundary z;
  z.relative_speed = sc.relative_speed();
  z.offsets = grid;
  for (auto & p : points) {
    z.steer_distance.push_back(p.distance);
    z.steer_ttc.push_back(p.distance / z.relative_speed);
    z.excluded.push_back(p.excluded);
    z.final_heading.push_back(p.final_heading);
    if (opt.keep_trajectories) {
      z.trajectories.push_back(std::move(p.trajectory));
    }
  }
  z.brake_distance = brake_boundary_distance(z.relative_speed, sc.a_b0, sc.comfort, sc.x_margin);
  z.brake_ttc = z.brake_distance / z.relative_speed;
  return z;
}

struct ZoneComparison
{
  std::vector<double> distance_delta;  // b - a [m]
  std::vector<double> ttc_delta;       // b - a [s]
  double max_abs_distance{0.0};
  double max_abs_ttc{0.0};
};

inline ZoneComparison compare_zones(const ZoneBoundary & a, const ZoneBoundary & b)
{
  if (a.offsets != b.offsets) {
    throw DomainError("zones were computed on different offset grids");
  }
  ZoneComparison c;
  for (size_t k = 0; k < a.offsets.size(); ++k) {
    const double dd = b.steer_distance[k] - a.steer_distance[k];
    const double dt = b.steer_ttc[k] - a.steer_ttc[k];
    c.distance_delta.push_back(dd);
    c.ttc_delta.push_back(dt);
    if (std::isfinite(dd)) {
      c.max_abs_distance = std::max(c.max_abs_distance, std::abs(dd));
    }
    if (std::isfinite(dt)) {
      c.max_abs_ttc = std::max(c.max_abs_ttc, std::abs(dt));
    }
  }
  return c;
}

}  // namespace critzone

#endif  // CRITZONE__ZONE_HPP_
