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

#include "uavsim/world.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uavsim {
namespace {

LatticeSpec big_lattice() {
  LatticeSpec s;
  s.radius = 500.0;
  s.hMin = 50.0;
  s.hMax = 150.0;
  s.spacing = 50.0;
  return s;
}

TEST(Lattice, ToPositionIsAffine) {
  LatticeSpec s = big_lattice();
  s.center = Position(10.0, -20.0, 0.0);
  EXPECT_TRUE(to_position(s, {0, 0, 0}).isApprox(Position(10.0, -20.0, 50.0)));
  EXPECT_DOUBLE_EQ(to_position(s, {1, 0, 0}).x() - to_position(s, {0, 0, 0}).x(), 50.0);
  EXPECT_DOUBLE_EQ(to_position(s, {0, 0, 2}).z(), 150.0);
}

TEST(Lattice, RejectsPointsOutsideTheCylinder) {
  const LatticeSpec s = big_lattice();
  EXPECT_THROW(to_position(s, {11, 0, 0}), std::out_of_range);
  EXPECT_THROW(to_position(s, {8, 8, 0}), std::out_of_range);
  EXPECT_THROW(to_position(s, {0, 0, 3}), std::out_of_range);
  EXPECT_THROW(to_position(s, {0, 0, -1}), std::out_of_range);
  EXPECT_NO_THROW(to_position(s, {10, 0, 0}));
}

TEST(Lattice, RoundTripsEveryPoint) {
  const LatticeSpec s = big_lattice();
  const auto pts = lattice_points(s);
  ASSERT_FALSE(pts.empty());
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
  for (const auto& idx : pts) EXPECT_EQ(to_index(s, to_position(s, idx)), idx);
}

TEST(Lattice, ValidateRejectsBadSpecs) {
  LatticeSpec s = big_lattice();
  s.hMax = 120.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = big_lattice();
  s.hMin = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = big_lattice();
  s.spacing = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = big_lattice();
  s.radius = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(FeasibleActions, InteriorHas27) {
  const auto acts = feasible_actions(big_lattice(), {0, 0, 1});
  EXPECT_EQ(acts.size(), 27u);
}

TEST(FeasibleActions, BottomLayerHas18) {
  EXPECT_EQ(feasible_actions(big_lattice(), {0, 0, 0}).size(), 18u);
}

TEST(FeasibleActions, ContainsHoverAndOnlyValidNeighbours) {
  const LatticeSpec s = big_lattice();
  for (const auto& idx : lattice_points(s)) {
    const auto acts = feasible_actions(s, idx);
    ASSERT_GE(acts.size(), 1u);
    ASSERT_LE(acts.size(), 27u);
    EXPECT_NE(std::find(acts.begin(), acts.end(), idx), acts.end());
    for (const auto& a : acts) {
      EXPECT_TRUE(is_valid(s, a));
      EXPECT_LE(std::max({std::abs(a.i - idx.i), std::abs(a.j - idx.j), std::abs(a.k - idx.k)}), 1);
      const auto back = feasible_actions(s, a);
      EXPECT_NE(std::find(back.begin(), back.end(), idx), back.end());
    }
  }
}

TEST(Move, HoverIsSmallestAndRoundTrips) {
  const LatticeIndex from{2, -1, 0};
  const auto moves = moves_to(from, feasible_actions(big_lattice(), from));
  ASSERT_FALSE(moves.empty());
  EXPECT_EQ(moves.front(), (Move{0, 0, 0}));
  EXPECT_TRUE(std::is_sorted(moves.begin(), moves.end()));
  for (const Move& m : moves) EXPECT_EQ(move_between(from, apply_move(from, m)), m);
  EXPECT_LT((Move{0, 0, 1}), (Move{-1, -1, 0}));
}

TEST(PlaneDistance, PointLineDistance) {
  const Position bs(0, 0, 25), target(100, 0, 0);
  EXPECT_DOUBLE_EQ(plane_distance(Position(50, 0, 80), bs, target), 0.0);
  EXPECT_NEAR(plane_distance(Position(50, 30, 60), bs, target), 30.0, 1e-12);
  EXPECT_DOUBLE_EQ(plane_distance(Position(50, 30, 60), bs, target),
                   plane_distance(Position(50, -30, 60), bs, target));
}

TEST(PlaneDistance, DegeneratePlaneThrows) {
  EXPECT_THROW(plane_distance(Position(1, 1, 50), Position(0, 0, 25), Position(0, 0, 0)), std::domain_error);
}

TEST(PlaneDistance, InvariantUnderTranslationAndRotation) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int n = 0; n < 200; ++n) {
    const Position p(u(rng), u(rng), 80), bs(u(rng), u(rng), 25), t(u(rng), u(rng), 0);
    const double d = plane_distance(p, bs, t);
    const Position shift(u(rng), u(rng), 0);
    const double ang = u(rng) / 300.0 * std::numbers::pi;
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(ang, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    EXPECT_NEAR(plane_distance(p + shift, bs + shift, t + shift), d, 1e-9 * std::max(1.0, d));
    EXPECT_NEAR(plane_distance(rot * p, rot * bs, rot * t), d, 1e-9 * std::max(1.0, d));
  }
}

TEST(ReduceActions, OnPlaneKeepsOnlyOnPlaneMoves) {
  const LatticeSpec s = big_lattice();
  const Position bs(0, 0, 25), target(200, 0, 0);
  const LatticeIndex cur{1, 0, 1};
  const auto reduced = reduce_actions(s, cur, feasible_actions(s, cur), bs, target);
  EXPECT_EQ(reduced.size(), 9u);
  for (const auto& a : reduced) EXPECT_EQ(a.j, 0);
  EXPECT_NE(std::find(reduced.begin(), reduced.end(), cur), reduced.end());
}

TEST(ReduceActions, MatchesBruteForceOffPlane) {
  const LatticeSpec s = big_lattice();
  const Position bs(0, 0, 25), target(200, 0, 0);
  const LatticeIndex cur{2, 1, 1};
  const auto all = feasible_actions(s, cur);
  const auto reduced = reduce_actions(s, cur, all, bs, target);
  std::vector<LatticeIndex> brute;
  const double here = plane_distance(to_position(s, cur), bs, target);
  for (const auto& a : all)
    if (plane_distance(to_position(s, a), bs, target) <= here) brute.push_back(a);
  EXPECT_EQ(reduced, brute);
  EXPECT_EQ(reduced.size(), 18u);
}

TEST(ReduceActions, SubsetAndNonEmptyEverywhere) {
  const LatticeSpec s = big_lattice();
  const Position bs(-100, 40, 25), target(150, 220, 0);
  for (const auto& idx : lattice_points(s)) {
    const auto all = feasible_actions(s, idx);
    const auto reduced = reduce_actions(s, idx, all, bs, target);
    ASSERT_FALSE(reduced.empty());
    for (const auto& a : reduced) EXPECT_NE(std::find(all.begin(), all.end(), a), all.end());
  }
}

TEST(ScenarioConfig, ValidateCatchesInconsistencies) {
  auto c = testing::small_config();
  EXPECT_NO_THROW(c.validate());

  auto dup = c;
  dup.uavs[1].id = dup.uavs[0].id;
  EXPECT_THROW(dup.validate(), std::invalid_argument);

  auto noTarget = c;
  noTarget.uavs[0].targetId = 999;
  EXPECT_THROW(noTarget.validate(), std::invalid_argument);

  auto badStart = c;
  badStart.uavs[0].start = {50, 0, 0};
  EXPECT_THROW(badStart.validate(), std::invalid_argument);

  auto frames = c;
  frames.framesPerCycle = 0;
  EXPECT_THROW(frames.validate(), std::invalid_argument);

  auto gamma = c;
  gamma.discount = 1.0;
  EXPECT_THROW(gamma.validate(), std::invalid_argument);

  auto above = c;
  above.targets[0].position = Position(0, 0, 0);
  EXPECT_THROW(above.validate(), std::invalid_argument);
}

TEST(ScenarioConfig, HomeBsDefaultsToNearest) {
  auto c = testing::small_config(1);
  c.bss.push_back({2, Position(-190, 0, 25), 2, 2});
  c.uavs[0].homeBsId.reset();
  c.uavs[0].start = {-3, 0, 0};
  EXPECT_EQ(c.homeBs(c.uavs[0]), 2);
  c.uavs[0].homeBsId = 1;
  EXPECT_EQ(c.homeBs(c.uavs[0]), 1);
}

}  // namespace
}  // namespace uavsim
