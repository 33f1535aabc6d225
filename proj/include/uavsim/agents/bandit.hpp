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

#include "uavsim/types.hpp"

#include <json.hpp>

#include <vector>

namespace uavsim {

/// Epsilon-greedy bandit over BSs. Arms are BS ids; estimates are running
/// means of the binary rewards.
struct BanditState {
  std::vector<int> arms;
  std::vector<double> estimate;
  std::vector<int> count;
  double epsilon = 0.3;

  explicit BanditState(std::vector<int> armIds = {}, double eps = 0.3);

  std::size_t armIndex(int arm) const;
};

/// Uniform arm with probability epsilon, else the best estimate (lowest id on ties).
int bandit_select(const BanditState& b, Rng& rng);

/// Incremental mean: count += 1; estimate += (reward - estimate) / count.
void bandit_update(BanditState& b, int arm, int reward);

nlohmann::json to_json(const BanditState& b);
BanditState bandit_from_json(const nlohmann::json& j);

}  // namespace uavsim
