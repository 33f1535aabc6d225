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

#include "uavsim/agents/actor_critic.hpp"
#include "uavsim/agents/bandit.hpp"
#include "uavsim/agents/dqn.hpp"
#include "uavsim/agents/opponent.hpp"
#include "uavsim/agents/q_table.hpp"
#include "uavsim/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace uavsim {

// ---------------------------------------------------------------------------
// Association

/// Keeps every UAV on its current BS.
class FixedAssociation final : public AssociationPolicy {
 public:
  void select(const BeaconView&, Decisions&) override {}
};

/// Associates with the BS of largest mean gain in the last beacon report.
class StrongestGainAssociation final : public AssociationPolicy {
 public:
  void select(const BeaconView& view, Decisions& decisions) override;
};

/// One epsilon-greedy bandit per UAV, arms = BSs, reward = delivery.
class BanditAssociation final : public AssociationPolicy {
 public:
  BanditAssociation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

  void select(const BeaconView& view, Decisions& decisions) override;
  void learn(const CycleFeedback& fb) override;
  nlohmann::json snapshot() const override;
  void restore(const nlohmann::json& j) override;

  const BanditState& bandit(std::size_t uav) const { return bandits_[uav]; }

 private:
  std::vector<BanditState> bandits_;
  ExponentialSchedule epsilon_;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Trajectory

class HoverTrajectory final : public TrajectoryPolicy {
 public:
  void select(const BeaconView&, Decisions&) override {}
};

/// Joint state of a cell: lattice points of the UAVs served by one BS, in id order.
using CellState = std::vector<LatticeIndex>;

/// Indices of the UAVs sharing u's serving BS (active ones, plus u), in id order.
std::vector<std::size_t> cell_members(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u);
CellState cell_state(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u);

/// Independent Q-learner per UAV over its own moves. The state is the joint
/// cell state, as for the joint-action learners; reward = the observed binary
/// reward.
class SingleAgentQTrajectory final : public TrajectoryPolicy {
 public:
  SingleAgentQTrajectory(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

  void select(const BeaconView& view, Decisions& decisions) override;
  void learn(const CycleFeedback& fb) override;
  nlohmann::json snapshot() const override;
  void restore(const nlohmann::json& j) override;

  const SparseQTable<CellState, Move>& table(std::size_t uav) const { return tables_[uav]; }

 private:
  std::vector<SparseQTable<CellState, Move>> tables_;
  ExponentialSchedule epsilon_;
  Rng rng_;
};

/// Joint-action learner per UAV with opponent modeling over the UAVs of its
/// own cell. In enhanced mode the action set is restricted to moves towards
/// or on the BS-target plane and the update uses the exact probability of
/// delivering valid data instead of the sampled reward. That probability
/// uses per-frame success probabilities averaged over the LoS state at
/// zero shadowing, so it depends on positions and powers only.
class JointActionTrajectory final : public TrajectoryPolicy {
 public:
  enum class Mode { OpponentModeling, Enhanced };

  JointActionTrajectory(const ScenarioConfig& config, Mode mode, std::int64_t horizon, std::uint64_t seed);

  void select(const BeaconView& view, Decisions& decisions) override;
  void learn(const CycleFeedback& fb) override;
  nlohmann::json snapshot() const override;
  void restore(const nlohmann::json& j) override;

  const JointActionLearner<CellState, Move>& learner(std::size_t uav) const { return learners_[uav]; }
  Mode mode() const { return mode_; }

 private:
  struct CellView {
    CellState state;
    std::vector<std::size_t> members;  // uav indices, id order
    std::size_t self = 0;              // position of the UAV in members
  };

  CellView cell(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u) const;
  std::vector<OpponentInfo> opponents(const ScenarioConfig& cfg, std::span<const UavState> uavs,
                                      const CellView& c) const;
  std::vector<Move> actions(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u) const;
  /// Probability each UAV delivers valid data this cycle, from the oracle.
  std::vector<double> expected_rewards(const CycleFeedback& fb);

 public:
  /// Per-frame success probability averaged over the LoS state.
  static double expected_success_prob(const ScenarioConfig& cfg, const Position& uav, std::size_t bs,
                                      double txPowerDbm);

 private:

  Mode mode_;
  std::vector<JointActionLearner<CellState, Move>> learners_;
  ExponentialSchedule epsilon_;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Power

class MaxPower final : public PowerPolicy {
 public:
  void select(const BeaconView&, Decisions&) override {}
};

/// Actor-critic per UAV. Features: bias, normalized loss to the serving BS
/// from the last beacon report, remaining battery fraction.
class ActorCriticPower final : public PowerPolicy {
 public:
  ActorCriticPower(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

  void select(const BeaconView& view, Decisions& decisions) override;
  void learn(const CycleFeedback& fb) override;
  nlohmann::json snapshot() const override;
  void restore(const nlohmann::json& j) override;

  const ActorCriticState& state(std::size_t uav) const { return agents_[uav]; }
  /// Freezes the policy: no exploration noise, no learning.
  void setEvaluation(bool on) { evaluation_ = on; }

  static Eigen::VectorXd features(const ScenarioConfig& cfg, const UavState& s, const LinkTable& links,
                                  std::size_t u);

 private:
  std::vector<ActorCriticState> agents_;
  std::vector<Eigen::VectorXd> lastFeatures_;
  ExponentialSchedule stddev_;
  bool evaluation_ = false;
  Rng rng_;
};

// ---------------------------------------------------------------------------
// Subchannel allocation

/// Top-K pending UAVs by interference-free success probability, per BS.
class MaxSuccessAllocation final : public AllocationPolicy {
 public:
  Allocation select(const FrameView& view) override;
};

/// Shared bookkeeping for learned allocators: a fixed member layout per band
/// group, the enumerated action space, feature construction and per-frame
/// records turned into transitions at the end of the cycle.
class LearnedAllocationBase : public AllocationPolicy {
 public:
  Allocation select(const FrameView& view) final;
  void learn(const CycleFeedback& fb) final;

  struct Group {
    std::vector<std::size_t> bs;                    // BS indices
    std::vector<std::vector<std::size_t>> members;  // per BS, uav indices in id order
    AllocationSpace space;
  };

  /// Features: for each member, normalized loss to every BS of the group,
  /// then its pending flag; finally the fraction of frames remaining.
  static Eigen::VectorXd features(const Group& g, const FrameView& view);
  static std::vector<int> valid_actions(const Group& g, const FrameView& view);
  static int feature_count(const Group& g);

 protected:
  virtual int choose(std::size_t groupKey, const Group& g, const Eigen::VectorXd& features,
                     const std::vector<int>& valid, std::int64_t cycle) = 0;
  virtual void train(std::size_t groupKey, const Group& g, const Transition& t) = 0;
  virtual void onNewGroup(std::size_t groupKey, const Group& g) = 0;

  std::map<std::size_t, Group> groups_;

 private:
  struct FrameRecord {
    Eigen::VectorXd features;
    int action = 0;
    std::vector<int> valid;
  };
  std::map<std::size_t, std::vector<FrameRecord>> records_;
  std::int64_t cycle_ = 0;
};

class DqnAllocation final : public LearnedAllocationBase {
 public:
  DqnAllocation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

  nlohmann::json snapshot() const override;
  void restore(const nlohmann::json& j) override;

  const DqnState& dqn(std::size_t groupKey) const { return dqns_.at(groupKey); }
  const std::map<std::size_t, Group>& groups() const { return groups_; }

 protected:
  int choose(std::size_t groupKey, const Group& g, const Eigen::VectorXd& features, const std::vector<int>& valid,
             std::int64_t cycle) override;
  void train(std::size_t groupKey, const Group& g, const Transition& t) override;
  void onNewGroup(std::size_t groupKey, const Group& g) override;

 private:
  DqnParams params_;
  ExponentialSchedule epsilon_;
  std::map<std::size_t, DqnState> dqns_;
  std::optional<nlohmann::json> pendingRestore_;
  Rng rng_;
};

/// Tabular Q-learning over exact feature vectors; the reference learner for
/// the DQN allocator on small discrete tasks.
class TabularAllocation final : public LearnedAllocationBase {
 public:
  using Key = std::vector<long long>;

  TabularAllocation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed);

  static Key key_of(const Eigen::VectorXd& features);

  struct Visited {
    Eigen::VectorXd features;
    std::vector<int> valid;
  };

  const SparseQTable<Key, int>& table(std::size_t groupKey) const { return tables_.at(groupKey); }
  const std::map<Key, Visited>& visited(std::size_t groupKey) const { return visited_.at(groupKey); }
  const std::map<std::size_t, Group>& groups() const { return groups_; }

 protected:
  int choose(std::size_t groupKey, const Group& g, const Eigen::VectorXd& features, const std::vector<int>& valid,
             std::int64_t cycle) override;
  void train(std::size_t groupKey, const Group& g, const Transition& t) override;
  void onNewGroup(std::size_t groupKey, const Group& g) override;

 private:
  QLearningParams params_;
  ExponentialSchedule epsilon_;
  std::map<std::size_t, SparseQTable<Key, int>> tables_;
  std::map<std::size_t, std::map<Key, Visited>> visited_;
  Rng rng_;
};

}  // namespace uavsim
