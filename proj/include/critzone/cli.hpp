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

#ifndef CRITZONE__CLI_HPP_
#define CRITZONE__CLI_HPP_

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "critzone/bench.hpp"
#include "critzone/braking.hpp"
#include "critzone/error.hpp"
#include "critzone/scenario_io.hpp"
#include "critzone/steering.hpp"
#include "critzone/units.hpp"
#include "critzone/zone.hpp"

namespace critzone::cli
{

enum class Command { brake, steer, zone, bench, sweep };
enum class Format { csv, json };

inline std::optional<Command> parse_command(std::string_view s)
{
  if (s == "brake") return Command::brake;
  if (s == "steer") return Command::steer;
  if (s == "zone") return Command::zone;
  if (s == "bench") return Command::bench;
  if (s == "sweep") return Command::sweep;
  return std::nullopt;
}

inline std::optional<Format> parse_format(std::string_view s)
{
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

struct RunConfig
{
  Command command{Command::zone};
  std::string scenario_path;  // empty: built-in defaults
  ModelKind model{ModelKind::dm};
  SteerAlgorithm algorithm{SteerAlgorithm::backward_integrated};
  RootSolver solver{RootSolver::halley};
  std::string out_path;       // empty: standard output
  Format format{Format::csv};
  std::vector<double> grid{default_grid()};
  unsigned threads{1};
  double dt_integration{0.01};
  double t0{100.0};
  double tol{1e-6};
  int bench_warmup{100};
  int bench_runs{1000};
};

/// Process exit status for each error category.
constexpr int exit_code(ErrorCategory c)
{
  switch (c) {
    case ErrorCategory::non_convergence:
    case ErrorCategory::singularity:
      return 3;
    case ErrorCategory::io:
      return 4;
    case ErrorCategory::domain:
    case ErrorCategory::scenario:
    case ErrorCategory::unsupported:
    case ErrorCategory::parse:
      return 2;
  }
  return 2;
}

namespace detail
{

// Shortest round-trip text; byte-stable across runs.
inline std::string num(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return critzone::detail::shortest(v);
}

inline std::string verdict(const SteerOutcome & o)
{
  if (o.no_risk) {
    return "no risk of collision";
  }
  return o.avoidable ? "avoidable" : "not avoidable";
}

inline SteerOptions steer_options(const RunConfig & cfg)
{
  SteerOptions opt;
  opt.root.t0 = cfg.t0;
  opt.root.tol = cfg.tol;
  opt.root.solver = cfg.solver;
  opt.dt_integration = cfg.dt_integration;
  return opt;
}

inline ZoneOptions zone_options(const RunConfig & cfg)
{
  ZoneOptions opt;
  opt.steer = steer_options(cfg);
  opt.threads = cfg.threads;
  return opt;
}

inline void brake_report(const Scenario & sc, Format fmt, std::ostream & out)
{
  const auto o = avoid_by_braking(sc.initial_brake_state(), sc.comfort, sc.x_margin);
  const double boundary = brake_boundary_distance(sc.relative_speed(), sc.a_b0, sc.comfort, sc.x_margin);
  if (fmt == Format::json) {
    nlohmann::json j = {
      {"braking_needed", o.braking_needed}, {"t_b_s", o.t_b}, {"t_bj_s", o.t_bj},
      {"t_ba_s", o.t_ba}, {"final_dx_m", o.final_state.dx}, {"avoidable", o.avoidable},
      {"boundary_distance_m", boundary}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "t_b_s,t_bj_s,t_ba_s,final_dx_m,avoidable,boundary_distance_m\n";
  out << num(o.t_b) << ',' << num(o.t_bj) << ',' << num(o.t_ba) << ',' << num(o.final_state.dx)
      << ',' << (o.avoidable ? "true" : "false") << ',' << num(boundary) << '\n';
}

inline void steer_report(const Scenario & sc, const RunConfig & cfg, std::ostream & out)
{
  const auto o = avoid_by_steering(sc, cfg.model, cfg.algorithm, steer_options(cfg));
  const double psi_deg = units::rad_to_deg(heading(cfg.model, o.final_state));
  if (cfg.format == Format::json) {
    nlohmann::json j = {
      {"model", to_string(cfg.model)}, {"algorithm", to_string(cfg.algorithm)},
      {"verdict", verdict(o)}, {"t_s_s", o.t_s}, {"t_sj_s", o.t_sj}, {"t_sa_s", o.t_sa},
      {"dx_s_m", o.dx_s}, {"required_gap_m", o.required_gap}, {"final_heading_deg", psi_deg},
      {"iterations", o.iterations}, {"tangent", o.tangent}};
    out << j.dump(2) << '\n';
    return;
  }
  out << "model,algorithm,verdict,t_s_s,t_sj_s,t_sa_s,dx_s_m,required_gap_m,final_heading_deg,"
         "iterations\n";
  out << to_string(cfg.model) << ',' << to_string(cfg.algorithm) << ',' << verdict(o) << ','
      << num(o.t_s) << ',' << num(o.t_sj) << ',' << num(o.t_sa) << ',' << num(o.dx_s) << ','
      << num(o.required_gap) << ',' << num(psi_deg) << ',' << o.iterations << '\n';
}

inline void zone_report(const Scenario & sc, const RunConfig & cfg, std::ostream & out)
{
  const auto z = compute_zone(sc, cfg.model, cfg.algorithm, cfg.grid, zone_options(cfg));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (cfg.format == Format::json) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t k = 0; k < z.offsets.size(); ++k) {
      rows.push_back({
        {"offset_m", z.offsets[k]}, {"steer_distance_m", z.steer_distance[k]},
        {"steer_ttc_s", z.steer_ttc[k]}, {"excluded", static_cast<bool>(z.excluded[k])},
        {"final_heading_deg", units::rad_to_deg(z.final_heading[k])}});
    }
    nlohmann::json j = {
      {"model", to_string(cfg.model)}, {"algorithm", to_string(cfg.algorithm)},
      {"brake_distance_m", z.brake_distance}, {"brake_ttc_s", z.brake_ttc}, {"points", rows}};
    out << j.dump(2) << '\n';
    return;
  }
  // Offsets whose boundary manoeuvre leaves the lane carry no steering value.
  out << "offset_m,steer_distance_m,steer_ttc_s,brake_distance_m,brake_ttc_s\n";
  for (size_t k = 0; k < z.offsets.size(); ++k) {
    const bool ex = z.excluded[k];
    out << num(z.offsets[k]) << ',' << num(ex ? nan : z.steer_distance[k]) << ','
        << num(ex ? nan : z.steer_ttc[k]) << ',' << num(z.brake_distance) << ','
        << num(z.brake_ttc) << '\n';
  }
}

inline void sweep_report(const Scenario & sc, const RunConfig & cfg, std::ostream & out)
{
  struct Variant
  {
    ModelKind model;
    SteerAlgorithm algorithm;
    std::string_view label;
  };
  const Variant variants[] = {
    {ModelKind::dm, SteerAlgorithm::backward_integrated, "dm"},
    {ModelKind::dm, SteerAlgorithm::backward_simplified, "dm3"},
    {ModelKind::sscm, SteerAlgorithm::backward_integrated, "sscm"},
    {ModelKind::km, SteerAlgorithm::backward_integrated, "km"},
    {ModelKind::pmm, SteerAlgorithm::backward_integrated, "pmm"},
  };
  nlohmann::json all = nlohmann::json::array();
  if (cfg.format == Format::csv) {
    out << "variant,offset_m,steer_distance_m,steer_ttc_s,excluded,final_heading_deg\n";
  }
  for (const auto & v : variants) {
    const auto z = compute_zone(sc, v.model, v.algorithm, cfg.grid, zone_options(cfg));
    for (size_t k = 0; k < z.offsets.size(); ++k) {
      const double psi = units::rad_to_deg(z.final_heading[k]);
      if (cfg.format == Format::csv) {
        out << v.label << ',' << num(z.offsets[k]) << ',' << num(z.steer_distance[k]) << ','
            << num(z.steer_ttc[k]) << ',' << (z.excluded[k] ? "true" : "false") << ',' << num(psi)
            << '\n';
      } else {
        all.push_back({
          {"variant", v.label}, {"offset_m", z.offsets[k]},
          {"steer_distance_m", z.steer_distance[k]}, {"steer_ttc_s", z.steer_ttc[k]},
          {"excluded", static_cast<bool>(z.excluded[k])}, {"final_heading_deg", psi}});
      }
    }
  }
  if (cfg.format == Format::json) {
    out << all.dump(2) << '\n';
  }
}

inline void bench_report(const Scenario & sc, const RunConfig & cfg, std::ostream & out)
{
  BenchConfig bc;
  bc.warmup = cfg.bench_warmup;
  bc.runs = cfg.bench_runs;
  bc.steer = steer_options(cfg);
  const auto r = bench(sc, bc);
  if (cfg.format == Format::json) {
    auto stats = [](const PhaseStats & s) {
      return nlohmann::json{{"median_us", s.median_us}, {"p95_us", s.p95_us}};
    };
    nlohmann::json entries = nlohmann::json::array();
    for (const auto & e : r.entries) {
      entries.push_back({
        {"model", to_string(e.model)}, {"algorithm", to_string(e.algorithm)},
        {"solve", stats(e.solve)}, {"states", stats(e.states)},
        {"integration", stats(e.integration)}, {"total", stats(e.total)},
        {"iterations", e.iterations}});
    }
    nlohmann::json solvers = nlohmann::json::array();
    for (const auto & s : r.solvers) {
      solvers.push_back({
        {"solver", to_string(s.solver)}, {"total", stats(s.total)}, {"iterations", s.iterations},
        {"root_s", s.root}});
    }
    out << nlohmann::json{{"warmup", r.warmup}, {"runs", r.runs}, {"entries", entries},
                          {"solvers", solvers}}
             .dump(2)
        << '\n';
    return;
  }
  out << "kind,model,algorithm,solve_median_us,solve_p95_us,states_median_us,states_p95_us,"
         "integration_median_us,integration_p95_us,total_median_us,total_p95_us,iterations\n";
  for (const auto & e : r.entries) {
    out << "steer," << to_string(e.model) << ',' << to_string(e.algorithm) << ','
        << num(e.solve.median_us) << ',' << num(e.solve.p95_us) << ',' << num(e.states.median_us)
        << ',' << num(e.states.p95_us) << ',' << num(e.integration.median_us) << ','
        << num(e.integration.p95_us) << ',' << num(e.total.median_us) << ','
        << num(e.total.p95_us) << ',' << e.iterations << '\n';
  }
  for (const auto & s : r.solvers) {
    out << "solver,dm," << to_string(s.solver) << ",,,,,,," << num(s.total.median_us) << ','
        << num(s.total.p95_us) << ',' << s.iterations << '\n';
  }
}

}  // namespace detail

/// Executes one command. Results go to cfg.out_path (or `out`), diagnostics
/// to `err`. Returns the process exit status.
inline int run(const RunConfig & cfg, std::ostream & out = std::cout, std::ostream & err = std::cerr)
{
  try {
    const Scenario sc = cfg.scenario_path.empty() ? parse_scenario("") : load_scenario(cfg.scenario_path);
    std::ostringstream buf;
    switch (cfg.command) {
      case Command::brake:
        detail::brake_report(sc, cfg.format, buf);
        break;
      case Command::steer:
        detail::steer_report(sc, cfg, buf);
        break;
      case Command::zone:
        detail::zone_report(sc, cfg, buf);
        break;
      case Command::sweep:
        detail::sweep_report(sc, cfg, buf);
        break;
      case Command::bench:
        detail::bench_report(sc, cfg, buf);
        break;
    }
    if (cfg.out_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file || !(file << buf.str()) || !file.flush()) {
        throw IoError("cannot write '" + cfg.out_path + "'");
      }
    }
    return 0;
  } catch (const Error & e) {
    err << "error[" << to_string(e.category()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  }
}

}  // namespace critzone::cli

#endif  // CRITZONE__CLI_HPP_
