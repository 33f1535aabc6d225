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

#include <compare>
#include <cstdint>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

namespace uavsim {

/// Cylindrical flying region discretized into a square lattice. The lattice
/// origin (0, 0, 0) sits above `center` at altitude hMin.
struct LatticeSpec {
  Position center = Position::Zero();
  double radius = 500.0;
  double hMin = 50.0;
  double hMax = 150.0;
  double spacing = 50.0;

  void validate() const;
  int layers() const;
  /// Largest |i| or |j| that can still fall inside the cylinder.
  int horizontalExtent() const;
};

struct BsSpec {
  int id = 0;
  Position position = Position::Zero();
  int subchannels = 2;
  int bandId = 0;
};

struct UavSpec {
  int id = 0;
  LatticeIndex start;
  int targetId = 0;
  double batteryCapacity = 1e5;
  /// BS the UAV is associated with before the first cycle; nearest BS if unset.
  std::optional<int> homeBsId;
};

struct TargetSpec {
  int id = 0;
  Position position = Position::Zero();
};

/// Hyperparameters shared by the learners. Schedules run from *Start to *End
/// with exponential decay over the episode length.
struct LearningParams {
  double alpha = 0.1;
  bool alphaDecay = true;  // alpha / sqrt(visits)
  double epsilonStart = 0.5;
  double epsilonEnd = 0.01;

  double banditEpsilonStart = 0.3;
  double banditEpsilonEnd = 0.01;

  double actorStep = 0.01;
  double criticStep = 0.05;
  double actorStdStartDb = 3.0;
  double actorStdEndDb = 0.3;
  double pathlossRefDb = 100.0;
  double pathlossScaleDb = 20.0;

  int dqnHidden = 64;
  int dqnBufferCapacity = 10000;
  int dqnBatchSize = 64;
  int dqnTargetSync = 200;
  double dqnStepSize = 1e-3;
  double dqnEpsilonStart = 1.0;
  double dqnEpsilonEnd = 0.05;
};

struct ScenarioConfig {
  LatticeSpec lattice;
  std::vector<BsSpec> bss;
  std::vector<UavSpec> uavs;
  std::vector<TargetSpec> targets;
  int framesPerCycle = 10;
  double discount = 0.9;
  ChannelParams channel;
  double sensingLambda = 0.01;
  std::uint64_t rngSeed = 1;
  double frameDurationS = 0.1;
  double propulsionEnergyJ = 50.0;
  LearningParams learning;

  /// Throws std::invalid_argument naming the offending entry.
  void validate() const;

  std::size_t bsIndex(int bsId) const;
  std::size_t targetIndex(int targetId) const;
  std::size_t uavIndex(int uavId) const;
  /// Home BS of a UAV, resolving the nearest-BS default.
  int homeBs(const UavSpec& uav) const;
};

bool is_valid(const LatticeSpec& spec, const LatticeIndex& idx);

Position to_position(const LatticeSpec& spec, const LatticeIndex& idx);

/// Nearest lattice index to a position; throws if it falls outside the cylinder.
LatticeIndex to_index(const LatticeSpec& spec, const Position& p);

/// Every valid lattice point, in lexicographic order.
std::vector<LatticeIndex> lattice_points(const LatticeSpec& spec);

/// Destinations reachable in one cycle: valid points within Chebyshev
/// distance 1, hover included, sorted.
std::vector<LatticeIndex> feasible_actions(const LatticeSpec& spec, const LatticeIndex& idx);

/// One cycle's displacement on the lattice. Moves order by the number of
/// axes they change, then lexicographically, so hover is the smallest.
struct Move {
  int di = 0;
  int dj = 0;
  int dk = 0;

  int axes() const { return (di != 0) + (dj != 0) + (dk != 0); }

  friend bool operator==(const Move&, const Move&) = default;
  friend std::strong_ordering operator<=>(const Move& a, const Move& b) {
    if (auto c = a.axes() <=> b.axes(); c != 0) return c;
    return std::tie(a.di, a.dj, a.dk) <=> std::tie(b.di, b.dj, b.dk);
  }
};

inline LatticeIndex apply_move(const LatticeIndex& from, const Move& m) {
  return {from.i + m.di, from.j + m.dj, from.k + m.dk};
}

inline Move move_between(const LatticeIndex& from, const LatticeIndex& to) {
  return {to.i - from.i, to.j - from.j, to.k - from.k};
}

/// Moves from `from` to each destination, in Move order.
std::vector<Move> moves_to(const LatticeIndex& from, const std::vector<LatticeIndex>& destinations);

/// Distance from p to the vertical plane through the BS and the target.
double plane_distance(const Position& p, const Position& bs, const Position& target);

/// Actions whose destination is no farther from the BS-target plane than the
/// current point. Never empty since hover always qualifies.
std::vector<LatticeIndex> reduce_actions(const LatticeSpec& spec, const LatticeIndex& current,
                                         const std::vector<LatticeIndex>& actions,
                                         const Position& bs, const Position& target);

}  // namespace uavsim
