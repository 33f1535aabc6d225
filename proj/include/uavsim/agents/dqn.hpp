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

#include "uavsim/agents/mlp.hpp"
#include "uavsim/types.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <cstdint>
#include <deque>
#include <vector>

namespace uavsim {

/// Enumeration of joint subchannel allocations for a group of BSs. Per BS
/// the options are the subsets of its UAVs with at most K members (empty set
/// first, then by size, then lexicographically); joint actions combine one
/// option per BS in mixed radix with the first BS least significant.
class AllocationSpace {
 public:
  AllocationSpace() = default;
  AllocationSpace(std::vector<int> uavsPerBs, std::vector<int> subchannelsPerBs);

  int size() const { return size_; }
  std::size_t bsCount() const { return options_.size(); }

  /// Local member positions chosen at each BS.
  std::vector<std::vector<int>> decode(int action) const;

  /// Actions admissible for the given pending flags (per BS, per local
  /// member): at every BS either nothing or a subset of the pending UAVs of
  /// size min(K, pending count). Sorted ascending.
  std::vector<int> validActions(const std::vector<std::vector<bool>>& pending) const;

 private:
  std::vector<std::vector<std::vector<int>>> options_;
  std::vector<int> subchannels_;
  int size_ = 0;
};

struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next;
  std::vector<int> nextValid;  // empty when terminal
  bool terminal = false;
};

/// Bounded FIFO of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 10000) : capacity_(capacity) {}

  void push(Transition t) {
    if (capacity_ == 0) return;
    if (items_.size() == capacity_) items_.pop_front();
    items_.push_back(std::move(t));
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t n) const { return items_[n]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

struct DqnParams {
  int hidden = 64;
  std::size_t bufferCapacity = 10000;
  int batchSize = 64;
  int targetSync = 200;
  double stepSize = 1e-3;
  double discount = 0.9;
};

struct DqnState {
  Mlp<double> online;
  Mlp<double> target;
  Adam<double> optimizer;
  ReplayBuffer buffer;
  DqnParams params;
  std::int64_t steps = 0;
  double epsilon = 1.0;

  DqnState() = default;
  DqnState(int featureCount, int actionCount, const DqnParams& p, Rng& rng);

  int featureCount() const { return online.inputSize(); }
  int actionCount() const { return online.outputSize(); }
};

/// Epsilon-greedy over the online network restricted to `valid`; greedy ties
/// go to the lowest index.
int dqn_select(const DqnState& d, const Eigen::VectorXd& features, const std::vector<int>& valid, Rng& rng);

/// Greedy action among `valid` (lowest index on ties).
int dqn_greedy(const Mlp<double>& net, const Eigen::VectorXd& features, const std::vector<int>& valid);

/// Stores the transition, then one minibatch gradient step on the squared TD
/// error once the buffer holds a batch. Copies online into target every
/// targetSync steps.
void dqn_step(DqnState& d, Transition t, Rng& rng);

nlohmann::json to_json(const DqnState& d);
DqnState dqn_from_json(const nlohmann::json& j);

}  // namespace uavsim
