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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "critzone/cli.hpp"

namespace
{

using critzone::ParseError;

template<typename T, typename Parser>
T parse_enum(const std::string & text, Parser parser, const char * what)
{
  if (const auto v = parser(text)) {
    return *v;
  }
  throw ParseError(0, std::string("invalid ") + what + " '" + text + "'");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Latest comfortable braking/steering and critical zones"};
  app.require_subcommand(1, 1);

  std::string scenario;
  std::string model = "dm";
  std::string algorithm = "2";
  std::string solver = "halley";
  std::string grid = "-3.7:0:0.1";
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
  double dt = 0.01;
  double t0 = 100.0;
  double tol = 1e-6;
  int warmup = 100;
  int runs = 1000;

  auto add_common = [&](CLI::App * sub) {
    sub->add_option("--scenario", scenario, "scenario file (key = value)");
    sub->add_option("--model", model, "dm | sscm | km | pmm");
    sub->add_option("--algorithm", algorithm, "2 | 3 | 4");
    sub->add_option("--solver", solver, "newton | halley");
    sub->add_option("--grid", grid, "lateral offsets MIN:MAX:STEP [m]");
    sub->add_option("--out", out, "output file (default: stdout)");
    sub->add_option("--format", format, "csv | json");
    sub->add_option("--threads", threads, "worker threads for offset sweeps");
    sub->add_option("--dt-integration", dt, "trapezoid step for the DM longitudinal integral [s]");
    sub->add_option("--t0", t0, "root finder start [s]");
    sub->add_option("--tol", tol, "root finder tolerance on g_s [m]");
  };
  const char * names[][2] = {
    {"brake", "latest comfortable braking"},
    {"steer", "steering check for the scenario"},
    {"zone", "critical zone over lateral offsets"},
    {"sweep", "zones for every model variant"},
    {"bench", "phase-split timing benchmark"},
  };
  for (const auto & [name, help] : names) {
    auto * sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string(name) == "bench") {
      sub->add_option("--warmup", warmup, "warm-up calls per case")->check(CLI::Range(100, 1000000));
      sub->add_option("--runs", runs, "measured calls per case")->check(CLI::Range(1000, 10000000));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::cerr << "error[parse]: " << e.what() << '\n';
    return critzone::cli::exit_code(critzone::ErrorCategory::parse);
  }

  critzone::cli::RunConfig cfg;
  try {
    const auto * sub = app.get_subcommands().front();
    cfg.command = parse_enum<critzone::cli::Command>(sub->get_name(), critzone::cli::parse_command, "command");
    cfg.model = parse_enum<critzone::ModelKind>(model, critzone::parse_model_kind, "model");
    cfg.algorithm = parse_enum<critzone::SteerAlgorithm>(algorithm, critzone::parse_algorithm, "algorithm");
    cfg.solver = parse_enum<critzone::RootSolver>(solver, critzone::parse_root_solver, "solver");
    cfg.format = parse_enum<critzone::cli::Format>(format, critzone::cli::parse_format, "format");
    cfg.grid = critzone::parse_grid(grid);
  } catch (const critzone::Error & e) {
    std::cerr << "error[" << critzone::to_string(e.category()) << "]: " << e.what() << '\n';
    return critzone::cli::exit_code(e.category());
  }
  cfg.scenario_path = scenario;
  cfg.out_path = out;
  cfg.threads = threads;
  cfg.dt_integration = dt;
  cfg.t0 = t0;
  cfg.tol = tol;
  cfg.bench_warmup = warmup;
  cfg.bench_runs = runs;
  return critzone::cli::run(cfg);
}
