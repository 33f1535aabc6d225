// Copyright 2026 The uavsim Authors.
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

// Command-line experiment runner.
//
//   uavsim run --config scenario.json --algorithm enhanced-q --cycles 2000 --seeds 1,2,3 --out run.csv
//   uavsim sweep-distance --config scenario.json --seeds 1,2 --out sweep.csv
//   uavsim selftest

#include "uavsim/config.hpp"
#include "uavsim/experiment.hpp"
#include "uavsim/selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using uavsim::Algorithm;

struct RunArgs {
  std::string config;
  std::string algorithm;
  std::vector<std::string> algorithms{"single-q", "opponent-q", "enhanced-q"};
  std::int64_t cycles = 2000;
  std::vector<std::uint64_t> seeds{1};
  std::string out;
  int window = 100;
  std::string checkpoint;
  std::string resume;
  std::vector<double> distances{100, 200, 300, 400};
  std::size_t finalWindow = 200;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

int cmd_run(const RunArgs& a) {
  const auto cfg = uavsim::load_config(a.config);
  const Algorithm algo = uavsim::parse_algorithm(a.algorithm);

  std::map<std::uint64_t, nlohmann::json> resumeBySeed;
  if (!a.resume.empty()) {
    std::ifstream f(a.resume);
    if (!f) throw std::runtime_error("cannot open checkpoint " + a.resume);
    for (const auto& r : nlohmann::json::parse(f).at("runs")) resumeBySeed[r.at("seed").get<std::uint64_t>()] = r;
  }

  std::ostringstream csv;
  csv << uavsim::kCsvHeader << '\n';
  nlohmann::json checkpoints = nlohmann::json::array();
  for (std::uint64_t seed : a.seeds) {
    const nlohmann::json* resume = nullptr;
    if (!a.resume.empty()) {
      auto it = resumeBySeed.find(seed);
      if (it == resumeBySeed.end()) throw std::invalid_argument("checkpoint has no run for seed " + std::to_string(seed));
      resume = &it->second;
    }
    const auto run = uavsim::run_seed(cfg, algo, seed, a.cycles, resume);
    const std::string runId = std::string(uavsim::to_string(algo)) + "-s" + std::to_string(seed);
    uavsim::write_rows(csv, runId, algo, run, a.window);
    checkpoints.push_back(run.checkpoint);
    const auto series = uavsim::per_cycle_reward(run.reports);
    std::cerr << runId << ": final-window reward "
              << uavsim::final_window_mean(series, std::min<std::size_t>(series.size(), a.finalWindow)) << '\n';
  }
  write_file(a.out, csv.str());
  if (!a.checkpoint.empty()) write_file(a.checkpoint, nlohmann::json{{"runs", checkpoints}}.dump() + "\n");
  return 0;
}

int cmd_sweep(const RunArgs& a) {
  const auto cfg = uavsim::load_config(a.config);
  std::vector<Algorithm> algos;
  for (const auto& name : a.algorithms) algos.push_back(uavsim::parse_algorithm(name));
  const auto rows = uavsim::sweep_distance(cfg, algos, a.distances, a.seeds, a.cycles, a.finalWindow);
  std::ostringstream csv;
  uavsim::write_sweep(csv, rows);
  write_file(a.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sense-and-send UAV network simulator with reinforcement-learning agents"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run = app.add_subcommand("run", "Train one algorithm and write per-cycle CSV rows");
  auto* sweep = app.add_subcommand("sweep-distance", "Final reward versus target distance");
  auto* selftest = app.add_subcommand("selftest", "Oracle and selector consistency checks");

  for (auto* sub : {run, sweep}) {
    sub->add_option("--config", args.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--cycles", args.cycles, "Training cycles per seed")->check(CLI::PositiveNumber);
    sub->add_option("--seeds", args.seeds, "Comma-separated seeds")->delimiter(',');
    sub->add_option("--out", args.out, "Output CSV path")->required();
  }
  run->add_option("--algorithm", args.algorithm,
                  "single-q, opponent-q, enhanced-q, bandit-assoc, actor-critic-power, dqn-alloc or baseline")
      ->required();
  run->add_option("--window", args.window, "Moving-average window in cycles")->check(CLI::PositiveNumber);
  run->add_option("--checkpoint", args.checkpoint, "Write learner and world state here after the run");
  run->add_option("--resume", args.resume, "Continue from a checkpoint file")->check(CLI::ExistingFile);
  run->add_option("--final-window", args.finalWindow, "Cycles averaged for the summary line");

  sweep->add_option("--algorithm", args.algorithms, "Algorithms to compare")->delimiter(',');
  sweep->add_option("--distances", args.distances, "Target ground distances in meters")->delimiter(',');
  sweep->add_option("--final-window", args.finalWindow, "Cycles averaged for the final reward");

  uavsim::SelftestOptions selftestOptions;
  selftest->add_option("--queries", selftestOptions.queries, "Random oracle queries");
  selftest->add_option("--samples", selftestOptions.samples, "Monte Carlo samples per query");
  selftest->add_option("--seed", selftestOptions.seed, "Seed for the checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(args);
    if (*sweep) return cmd_sweep(args);
    if (*selftest) return uavsim::run_selftest(selftestOptions, std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
