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

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace uavsim {

enum class AllocationRule { MaxSuccess };

/// One cell's transmission phase: UAVs in id order, each with a per-frame
/// success probability q and a probability that its sensory data is valid.
struct DeliveryQuery {
  std::vector<double> q;
  std::vector<double> sensingProb;
  int frames = 1;
  int subchannels = 1;
  AllocationRule rule = AllocationRule::MaxSuccess;

  void validate() const;
};

/// Query from geometry: sensing probabilities follow from UAV-target distances.
DeliveryQuery make_delivery_query(const std::vector<Position>& uavPositions,
                                  const std::vector<Position>& targetPositions, double sensingLambda,
                                  std::vector<double> q, int frames, int subchannels);

inline constexpr std::size_t kMaxExactUavs = 8;

/// Exact probability that each UAV delivers valid data within the cycle,
/// by dynamic programming over the set of still-pending UAVs.
std::vector<double> delivery_prob_dp(const DeliveryQuery& query);

struct DeliveryEstimate {
  std::vector<double> probability;
  std::vector<double> standardError;
};

/// Frame-by-frame Monte Carlo estimate of the same quantity.
DeliveryEstimate delivery_prob_mc(const DeliveryQuery& query, Rng& rng, std::int64_t samples);

/// Finite MDP with explicit tables. transition[a](s, s') is the probability
/// of moving to s' after taking a in s; reward(s, a) is the expected reward.
/// available(s, a) == 0 removes an action from a state.
struct ExplicitMdp {
  std::vector<Eigen::MatrixXd> transition;
  Eigen::MatrixXd reward;
  Eigen::MatrixXi available;

  int states() const { return static_cast<int>(reward.rows()); }
  int actions() const { return static_cast<int>(reward.cols()); }
  bool isAvailable(int s, int a) const { return available.size() == 0 || available(s, a) != 0; }
};

struct ValueIterationResult {
  Eigen::MatrixXd q;               // unavailable actions hold -inf
  std::vector<double> sweepDeltas; // sup-norm change per sweep
};

/// Synchronous value iteration until the optimal Q is within `tolerance` in
/// sup-norm.
ValueIterationResult value_iteration(const ExplicitMdp& mdp, double discount, double tolerance);

/// Greedy action per state, lowest action index on ties.
std::vector<int> greedy_policy(const Eigen::MatrixXd& q);

}  // namespace uavsim
