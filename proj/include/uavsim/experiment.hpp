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

#pragma once

#include "uavsim/protocol.hpp"
#include "uavsim/world.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uavsim {

enum class Algorithm { SingleQ, OpponentQ, EnhancedQ, BanditAssoc, ActorCriticPower, DqnAlloc, Baseline };

const char* to_string(Algorithm a);
/// Throws std::invalid_argument listing the recognized names.
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> all_algorithms();

/// Policies for one algorithm. Learners decay their schedules over
/// `horizon` cycles and draw from streams derived from `seed`.
PolicyBundle make_policies(Algorithm algorithm, const ScenarioConfig& config, std::int64_t horizon,
                           std::uint64_t seed);

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<CycleReport> reports;
  WorldState finalWorld;
  nlohmann::json checkpoint;  // world and learner state after the last cycle
};

/// Trains one algorithm for `cycles` cycles on one seed. With `resume`, the
/// world and learners continue from a checkpoint written by an earlier run
/// of the same algorithm and seed.
SeedRun run_seed(const ScenarioConfig& config, Algorithm algorithm, std::uint64_t seed, std::int64_t cycles,
                 const nlohmann::json* resume = nullptr);

inline constexpr std::string_view kCsvHeader =
    "run_id,seed,algorithm,cycle,uav_id,x_m,y_m,z_m,associated_bs,tx_power_dbm,sensing_valid,delivered,"
    "frames_used,reward,avg_reward_window";

/// Writes one row per (cycle, UAV). avg_reward_window is the UAV's trailing
/// mean reward over the last `window` cycles, current cycle included.
void write_rows(std::ostream& os, const std::string& runId, Algorithm algorithm, const SeedRun& run, int window);

/// Mean reward per UAV in every cycle.
std::vector<double> per_cycle_reward(const std::vector<CycleReport>& reports);

/// Mean of the last `window` entries (all of them if fewer).
double final_window_mean(const std::vector<double>& series, std::size_t window);

/// Trailing moving average with the given window.
std::vector<double> moving_average(const std::vector<double>& series, std::size_t window);

/// First cycle at which the trailing average reaches `fraction` of the final
/// window mean. Returns the series length if never reached.
std::size_t convergence_cycle(const std::vector<double>& series, std::size_t smoothing, std::size_t finalWindow,
                              double fraction = 0.9);

/// Copy of `config` with every target moved to `distance` meters (ground
/// distance) from the home BS of the UAVs sensing it, keeping its bearing.
/// Throws if the distance is not positive or a target leaves the region.
ScenarioConfig place_targets(const ScenarioConfig& config, double distance);

struct SweepRow {
  Algorithm algorithm;
  double distance = 0.0;
  std::uint64_t seed = 0;
  double finalReward = 0.0;
};

inline constexpr std::string_view kSweepHeader = "algorithm,distance_m,seed,final_reward";

std::vector<SweepRow> sweep_distance(const ScenarioConfig& config, const std::vector<Algorithm>& algorithms,
                                     const std::vector<double>& distances, const std::vector<std::uint64_t>& seeds,
                                     std::int64_t cycles, std::size_t finalWindow);

void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace uavsim
