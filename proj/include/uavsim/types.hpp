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

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <utility>

namespace uavsim {

/// Cartesian position in meters; z is height above ground.
using Position = Eigen::Vector3d;

using Rng = std::mt19937_64;

/// Integer coordinates of a point on the flying-space lattice. k counts
/// altitude layers upwards from the minimum altitude.
struct LatticeIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const LatticeIndex& idx) {
  return os << '(' << idx.i << ',' << idx.j << ',' << idx.k << ')';
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Engine seeded from a (seed, tag, id) triple. Streams for different tags
/// or ids are statistically independent.
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t id = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(id),
                    static_cast<std::uint32_t>(id >> 32)};
  return Rng(seq);
}

/// Per-entity random streams for the simulator. Each UAV draws its channel,
/// sensing and frame outcomes from its own stream so one cell's population
/// never perturbs another cell's randomness.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rng& uav(int uavId) { return get(kUavTag, uavId); }

  Rng& named(std::uint64_t tag, int id = 0) { return get(tag, id); }

 private:
  static constexpr std::uint64_t kUavTag = 0x55415601;

  Rng& get(std::uint64_t tag, int id) {
    auto key = std::make_pair(tag, id);
    auto it = streams_.find(key);
    if (it == streams_.end()) {
      it = streams_.emplace(key, make_stream(seed_, tag, static_cast<std::uint64_t>(id))).first;
    }
    return it->second;
  }

  std::uint64_t seed_;
  std::map<std::pair<std::uint64_t, int>, Rng> streams_;
};

}  // namespace uavsim
