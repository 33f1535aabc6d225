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

#include "uavsim/channel.hpp"
#include "uavsim/types.hpp"
#include "uavsim/world.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace uavsim {

enum class FrameOutcome { NoSubchannel, Failed, Success, Idle };

const char* to_string(FrameOutcome outcome);

struct UavState {
  LatticeIndex index;
  double batteryJ = 0.0;
  int bsId = 0;
  bool active = true;
};

/// links[u][b]: realization between UAV index u and BS index b (config order).
using LinkTable = std::vector<std::vector<LinkRealization>>;

struct WorldState {
  std::vector<UavState> uavs;
  LinkTable links;  // realized during the most recent transmission phase
  std::int64_t cycle = 0;
};

/// Start-of-episode state. Links are realized at the start positions so the
/// first beaconing phase has channel information to report.
WorldState initial_world(const ScenarioConfig& config, RngStreams& rng);

/// What every UAV hears at the end of the beaconing phase: locations,
/// batteries, associations and channel conditions as of the end of the
/// previous cycle. Sensing validity is never part of it.
struct BeaconView {
  const ScenarioConfig& config;
  std::int64_t cycle;
  std::span<const UavState> uavs;
  const LinkTable& links;
};

/// Per-UAV decisions taken at the end of the beaconing phase, indexed like
/// ScenarioConfig::uavs. The engine pre-fills current BS, hover and maximum
/// power; each policy overwrites its own field and sees earlier ones.
struct Decisions {
  std::vector<int> bsId;
  std::vector<LatticeIndex> destination;
  std::vector<double> txPowerDbm;
};

/// Inputs to one subchannel-allocation decision: one frame, one group of BSs
/// sharing a band. `pending` reflects outcomes through the previous frame.
struct FrameView {
  const ScenarioConfig& config;
  int frame;
  std::span<const std::size_t> groupBs;    // BS indices in the group
  std::span<const std::size_t> servingBs;  // per UAV index
  std::span<const std::uint8_t> member;    // per UAV index: served by this group
  std::span<const std::uint8_t> pending;   // per UAV index
  std::span<const double> successProb;     // per UAV index, interference-free
  std::span<const double> txPowerDbm;      // per UAV index
  const LinkTable& links;                  // current cycle
};

/// Selected UAV indices per BS of the group, in groupBs order.
using Allocation = std::vector<std::vector<std::size_t>>;

struct UavCycleRecord {
  int uavId = 0;
  LatticeIndex chosenAction;
  Position position = Position::Zero();
  double txPowerDbm = 0.0;
  int bsId = 0;
  bool active = true;
  bool sensingValid = false;
  std::vector<FrameOutcome> frames;
  bool delivered = false;
  int reward = 0;
  int framesUsed = 0;
  double txEnergyJ = 0.0;
  double batteryJ = 0.0;  // after the cycle
};

struct CycleReport {
  std::int64_t cycle = 0;
  std::vector<UavCycleRecord> uavs;

  int totalReward() const;
};

/// Outcome of a cycle as the UAVs learn it at the next beaconing: reward,
/// delivery and frame usage. Validity of undelivered data is not exposed.
struct UavFeedback {
  bool active = false;
  bool delivered = false;
  int reward = 0;
  int framesUsed = 0;
  std::vector<FrameOutcome> frames;
};

struct CycleFeedback {
  const ScenarioConfig& config;
  const WorldState& before;
  const WorldState& after;
  const Decisions& decisions;
  std::span<const UavFeedback> uavs;
  std::int64_t cycle;
};

class AssociationPolicy {
 public:
  virtual ~AssociationPolicy() = default;
  virtual void select(const BeaconView& view, Decisions& decisions) = 0;
  virtual void learn(const CycleFeedback&) {}
  virtual nlohmann::json snapshot() const { return nullptr; }
  virtual void restore(const nlohmann::json&) {}
};

class TrajectoryPolicy {
 public:
  virtual ~TrajectoryPolicy() = default;
  virtual void select(const BeaconView& view, Decisions& decisions) = 0;
  virtual void learn(const CycleFeedback&) {}
  virtual nlohmann::json snapshot() const { return nullptr; }
  virtual void restore(const nlohmann::json&) {}
};

class PowerPolicy {
 public:
  virtual ~PowerPolicy() = default;
  virtual void select(const BeaconView& view, Decisions& decisions) = 0;
  virtual void learn(const CycleFeedback&) {}
  virtual nlohmann::json snapshot() const { return nullptr; }
  virtual void restore(const nlohmann::json&) {}
};

class AllocationPolicy {
 public:
  virtual ~AllocationPolicy() = default;
  virtual Allocation select(const FrameView& view) = 0;
  virtual void learn(const CycleFeedback&) {}
  virtual nlohmann::json snapshot() const { return nullptr; }
  virtual void restore(const nlohmann::json&) {}
};

struct PolicyBundle {
  std::unique_ptr<AssociationPolicy> association;
  std::unique_ptr<TrajectoryPolicy> trajectory;
  std::unique_ptr<PowerPolicy> power;
  std::unique_ptr<AllocationPolicy> allocation;
};

/// Top-K selection by success probability; ties go to the lower id. Returns
/// the chosen ids in ascending order.
std::vector<int> allocate_max_success(std::span<const std::pair<int, double>> pending, int k);

struct CycleResult {
  WorldState world;
  CycleReport report;
};

/// Energy a UAV needs at the start of a cycle to stay in service.
double min_operating_energy(const ScenarioConfig& config);

/// One sense-and-send cycle: beaconing decisions, movement and sensing,
/// then framesPerCycle frames of allocation and transmission. Policies
/// learn from the cycle after it completes.
CycleResult run_cycle(const WorldState& world, PolicyBundle& policies,
                      const ScenarioConfig& config, RngStreams& rng);

/// Runs `cycles` consecutive cycles, handing each report to `sink`.
/// Returns the final world state.
WorldState run_episode(const WorldState& initial, PolicyBundle& policies, std::int64_t cycles,
                       const ScenarioConfig& config, RngStreams& rng,
                       const std::function<void(const CycleReport&)>& sink);

}  // namespace uavsim
