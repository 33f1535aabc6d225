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

#include "uavsim/oracle.hpp"
#include "uavsim/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace uavsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using DeliveryDp = std::function<std::vector<double>(const DeliveryQuery&)>;

/// Random query: 1..maxUavs UAVs, 1..maxFrames frames, 0..3 subchannels, q and
/// sensing probabilities uniform with occasional exact 0 and 1.
DeliveryQuery random_query(Rng& rng, int maxUavs = 8, int maxFrames = 12);

/// DP against Monte Carlo on `queries` random queries. Each per-UAV estimate
/// must lie within 3 standard errors of the DP value, the standard error
/// taken at the DP probability.
CheckResult check_dp_against_mc(const DeliveryDp& dp, int queries, std::int64_t samples, std::uint64_t seed);

/// Value iteration on random MDPs: sweep deltas decrease and the result is
/// a Bellman fixed point within tolerance.
CheckResult check_value_iteration(std::uint64_t seed);

/// Greedy-action frequency of every epsilon-greedy selector against
/// (1 - eps) + eps / |A| over `draws` draws, tolerance 0.01.
std::vector<CheckResult> check_epsilon_greedy(std::int64_t draws, std::uint64_t seed);

struct SelftestOptions {
  int queries = 100;
  std::int64_t samples = 100000;
  std::uint64_t seed = 20260101;
  DeliveryDp dp = delivery_prob_dp;
};

/// Runs every check, printing one PASS/FAIL line each. True if all passed.
bool run_selftest(const SelftestOptions& options, std::ostream& out);

}  // namespace uavsim
