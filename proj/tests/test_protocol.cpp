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

#include "support.hpp"

#include "uavsim/policies.hpp"
#include "uavsim/protocol.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <utility>

namespace uavsim {
namespace {

PolicyBundle fixed_bundle() {
  PolicyBundle b;
  b.association = std::make_unique<FixedAssociation>();
  b.trajectory = std::make_unique<HoverTrajectory>();
  b.power = std::make_unique<MaxPower>();
  b.allocation = std::make_unique<MaxSuccessAllocation>();
  return b;
}

// Noise so low that every frame succeeds.
ScenarioConfig clear_config(int uavs, int k) {
  auto c = testing::small_config(uavs, k);
  c.channel.noiseDbm = -250.0;
  return c;
}

TEST(AllocateMaxSuccess, TopKByProbability) {
  const std::vector<std::pair<int, double>> pending{{1, 0.9}, {2, 0.2}, {3, 0.7}};
  EXPECT_EQ(allocate_max_success(pending, 2), (std::vector<int>{1, 3}));
  EXPECT_EQ(allocate_max_success(pending, 5), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(allocate_max_success(pending, 0).empty());
}

TEST(AllocateMaxSuccess, TiesGoToLowerId) {
  const std::vector<std::pair<int, double>> pending{{7, 0.5}, {3, 0.5}, {5, 0.5}};
  EXPECT_EQ(allocate_max_success(pending, 2), (std::vector<int>{3, 5}));
}

TEST(RunCycle, CertainLinkSucceedsInFirstFrame) {
  auto c = clear_config(1, 1);
  RngStreams rng(1);
  auto bundle = fixed_bundle();
  const auto r = run_cycle(initial_world(c, rng), bundle, c, rng);
  const auto& u = r.report.uavs.at(0);
  ASSERT_EQ(u.frames.size(), static_cast<std::size_t>(c.framesPerCycle));
  EXPECT_EQ(u.frames[0], FrameOutcome::Success);
  for (std::size_t f = 1; f < u.frames.size(); ++f) EXPECT_EQ(u.frames[f], FrameOutcome::Idle);
  EXPECT_TRUE(u.delivered);
  EXPECT_EQ(u.framesUsed, 1);
  EXPECT_EQ(u.reward, u.sensingValid ? 1 : 0);
}

TEST(RunCycle, SubchannelsLimitConcurrentSenders) {
  auto c = clear_config(3, 2);
  RngStreams rng(2);
  auto bundle = fixed_bundle();
  const auto r = run_cycle(initial_world(c, rng), bundle, c, rng);
  const auto& u = r.report.uavs;
  EXPECT_EQ(u[0].framesUsed, 1);
  EXPECT_EQ(u[1].framesUsed, 1);
  EXPECT_EQ(u[2].frames[0], FrameOutcome::NoSubchannel);
  EXPECT_EQ(u[2].frames[1], FrameOutcome::Success);
  EXPECT_EQ(u[2].framesUsed, 2);
}

TEST(RunCycle, NoSubchannelsMeansNoDelivery) {
  auto c = clear_config(2, 0);
  RngStreams rng(3);
  auto bundle = fixed_bundle();
  const auto r = run_cycle(initial_world(c, rng), bundle, c, rng);
  for (const auto& u : r.report.uavs) {
    EXPECT_FALSE(u.delivered);
    EXPECT_EQ(u.reward, 0);
    EXPECT_EQ(u.framesUsed, c.framesPerCycle);
    EXPECT_DOUBLE_EQ(u.txEnergyJ, 0.0);
    for (auto f : u.frames) EXPECT_EQ(f, FrameOutcome::NoSubchannel);
  }
}

TEST(RunCycle, FrameOutcomesAreConsistent) {
  auto c = testing::small_config(3, 1);
  c.channel.noiseDbm = -95.0;
  c.channel.shadowSigmaLosDb = 4.0;
  c.channel.shadowSigmaNlosDb = 6.0;
  RngStreams rng(4);
  auto bundle = fixed_bundle();
  WorldState w = initial_world(c, rng);
  for (int cycle = 0; cycle < 50; ++cycle) {
    auto r = run_cycle(w, bundle, c, rng);
    for (const auto& u : r.report.uavs) {
      const auto success = std::count(u.frames.begin(), u.frames.end(), FrameOutcome::Success);
      EXPECT_LE(success, 1);
      EXPECT_EQ(u.delivered, success == 1);
      if (u.delivered) {
        const auto first = std::find(u.frames.begin(), u.frames.end(), FrameOutcome::Success) - u.frames.begin();
        EXPECT_EQ(u.framesUsed, first + 1);
        for (auto it = u.frames.begin() + first + 1; it != u.frames.end(); ++it) EXPECT_EQ(*it, FrameOutcome::Idle);
      } else {
        EXPECT_EQ(u.framesUsed, c.framesPerCycle);
        EXPECT_EQ(std::count(u.frames.begin(), u.frames.end(), FrameOutcome::Idle), 0);
      }
      EXPECT_EQ(u.reward, (u.delivered && u.sensingValid) ? 1 : 0);
    }
    // At most K senders per frame on the single BS.
    for (int f = 0; f < c.framesPerCycle; ++f) {
      int senders = 0;
      for (const auto& u : r.report.uavs) {
        const auto o = u.frames[static_cast<std::size_t>(f)];
        senders += o == FrameOutcome::Success || o == FrameOutcome::Failed;
      }
      EXPECT_LE(senders, c.bss[0].subchannels);
    }
    w = std::move(r.world);
  }
}

TEST(RunCycle, EnergyAccounting) {
  auto c = testing::small_config(2, 1);
  c.channel.noiseDbm = -95.0;
  RngStreams rng(5);
  auto bundle = fixed_bundle();
  const WorldState w = initial_world(c, rng);
  const auto r = run_cycle(w, bundle, c, rng);
  const double frameJ = db_to_linear(c.channel.txPowerMaxDbm) * 1e-3 * c.frameDurationS;
  for (std::size_t u = 0; u < w.uavs.size(); ++u) {
    const auto& rec = r.report.uavs[u];
    const auto sent = std::count_if(rec.frames.begin(), rec.frames.end(), [](FrameOutcome o) {
      return o == FrameOutcome::Success || o == FrameOutcome::Failed;
    });
    EXPECT_NEAR(rec.txEnergyJ, static_cast<double>(sent) * frameJ, 1e-12);
    EXPECT_NEAR(rec.batteryJ, w.uavs[u].batteryJ - c.propulsionEnergyJ - rec.txEnergyJ, 1e-9);
    EXPECT_DOUBLE_EQ(r.world.uavs[u].batteryJ, rec.batteryJ);
  }
}

TEST(RunCycle, HoverKeepsPositions) {
  auto c = testing::small_config(3, 1);
  RngStreams rng(6);
  auto bundle = fixed_bundle();
  const WorldState w0 = initial_world(c, rng);
  std::vector<Position> start;
  for (const auto& u : c.uavs) start.push_back(to_position(c.lattice, u.start));
  run_episode(w0, bundle, 20, c, rng, [&](const CycleReport& rep) {
    for (std::size_t u = 0; u < rep.uavs.size(); ++u) EXPECT_TRUE(rep.uavs[u].position.isApprox(start[u]));
  });
}

TEST(RunCycle, DepletedBatteryGoesInactive) {
  auto c = testing::small_config(1, 1);
  c.uavs[0].batteryCapacity = min_operating_energy(c) * 1.5;
  RngStreams rng(7);
  auto bundle = fixed_bundle();
  std::vector<CycleReport> reps;
  const WorldState end =
      run_episode(initial_world(c, rng), bundle, 4, c, rng, [&](const CycleReport& r) { reps.push_back(r); });
  ASSERT_EQ(reps.size(), 4u);
  EXPECT_TRUE(reps[0].uavs[0].active);
  EXPECT_FALSE(reps[1].uavs[0].active);
  EXPECT_FALSE(end.uavs[0].active);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    EXPECT_FALSE(reps[i].uavs[0].delivered);
    EXPECT_EQ(reps[i].uavs[0].reward, 0);
    EXPECT_DOUBLE_EQ(reps[i].uavs[0].batteryJ, reps[1].uavs[0].batteryJ);
  }
}

TEST(RunEpisode, SameSeedSameReports) {
  auto c = testing::small_config(3, 1);
  c.channel.noiseDbm = -95.0;
  auto once = [&](std::uint64_t seed) {
    RngStreams rng(seed);
    auto bundle = fixed_bundle();
    std::vector<std::pair<int, bool>> trace;
    run_episode(initial_world(c, rng), bundle, 30, c, rng, [&](const CycleReport& r) {
      for (const auto& u : r.uavs) trace.emplace_back(u.framesUsed, u.sensingValid);
    });
    return trace;
  };
  EXPECT_EQ(once(11), once(11));
  EXPECT_NE(once(11), once(12));
}

class BadPower final : public PowerPolicy {
 public:
  void select(const BeaconView&, Decisions& d) override { d.txPowerDbm.assign(d.txPowerDbm.size(), 40.0); }
};

class TeleportTrajectory final : public TrajectoryPolicy {
 public:
  void select(const BeaconView&, Decisions& d) override {
    for (auto& dst : d.destination) dst.i += 3;
  }
};

class GreedyAllocation final : public AllocationPolicy {
 public:
  Allocation select(const FrameView& v) override {
    Allocation a(v.groupBs.size());
    for (std::size_t u = 0; u < v.member.size(); ++u)
      if (v.member[u]) a[0].push_back(u);
    return a;
  }
};

TEST(RunCycle, RejectsInvalidDecisions) {
  auto c = testing::small_config(3, 1);
  RngStreams rng(8);
  const WorldState w = initial_world(c, rng);

  auto power = fixed_bundle();
  power.power = std::make_unique<BadPower>();
  EXPECT_THROW(run_cycle(w, power, c, rng), std::logic_error);

  auto move = fixed_bundle();
  move.trajectory = std::make_unique<TeleportTrajectory>();
  EXPECT_THROW(run_cycle(w, move, c, rng), std::logic_error);

  auto alloc = fixed_bundle();
  alloc.allocation = std::make_unique<GreedyAllocation>();
  EXPECT_THROW(run_cycle(w, alloc, c, rng), std::logic_error);
}

TEST(FrameOutcome, Names) {
  EXPECT_STREQ(to_string(FrameOutcome::Success), "success");
  EXPECT_STREQ(to_string(FrameOutcome::NoSubchannel), "no-subchannel");
}

}  // namespace
}  // namespace uavsim
