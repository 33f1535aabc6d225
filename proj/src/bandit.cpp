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

#include "uavsim/agents/bandit.hpp"

#include "uavsim/agents/q_table.hpp"

#include <stdexcept>
#include <string>

namespace uavsim {

BanditState::BanditState(std::vector<int> armIds, double eps)
    : arms(std::move(armIds)), estimate(arms.size(), 0.0), count(arms.size(), 0), epsilon(eps) {}

std::size_t BanditState::armIndex(int arm) const {
  for (std::size_t n = 0; n < arms.size(); ++n)
    if (arms[n] == arm) return n;
  throw std::invalid_argument("unknown bandit arm " + std::to_string(arm));
}

int bandit_select(const BanditState& b, Rng& rng) {
  if (b.arms.empty()) throw std::invalid_argument("bandit has no arms");
  std::size_t best = 0;
  for (std::size_t n = 1; n < b.arms.size(); ++n) {
    if (b.estimate[n] > b.estimate[best] || (b.estimate[n] == b.estimate[best] && b.arms[n] < b.arms[best])) {
      best = n;
    }
  }
  return b.arms[epsilon_greedy_index(b.arms.size(), best, b.epsilon, rng)];
}

void bandit_update(BanditState& b, int arm, int reward) {
  if (reward != 0 && reward != 1) throw std::invalid_argument("bandit rewards must be 0 or 1");
  const std::size_t n = b.armIndex(arm);
  ++b.count[n];
  b.estimate[n] += (reward - b.estimate[n]) / b.count[n];
}

nlohmann::json to_json(const BanditState& b) {
  return {{"arms", b.arms}, {"estimate", b.estimate}, {"count", b.count}, {"epsilon", b.epsilon}};
}

BanditState bandit_from_json(const nlohmann::json& j) {
  BanditState b(j.at("arms").get<std::vector<int>>(), j.at("epsilon").get<double>());
  b.estimate = j.at("estimate").get<std::vector<double>>();
  b.count = j.at("count").get<std::vector<int>>();
  if (b.estimate.size() != b.arms.size() || b.count.size() != b.arms.size()) {
    throw std::invalid_argument("bandit snapshot has inconsistent arm arrays");
  }
  return b;
}

}  // namespace uavsim
