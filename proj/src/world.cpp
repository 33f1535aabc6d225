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

#include "uavsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uavsim {

namespace {

std::string describe(const LatticeIndex& idx) {
  std::ostringstream os;
  os << idx;
  return os.str();
}

bool is_integer_multiple(double value, double step) {
  const double ratio = value / step;
  return std::abs(ratio - std::round(ratio)) < 1e-9;
}

template <class Spec>
void require_unique_ids(const std::vector<Spec>& items, const char* what) {
  std::set<int> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      throw std::invalid_argument(std::string("duplicate ") + what + " id " + std::to_string(item.id));
    }
  }
}

template <class Spec>
std::size_t find_index(const std::vector<Spec>& items, int id, const char* what) {
  for (std::size_t n = 0; n < items.size(); ++n) {
    if (items[n].id == id) return n;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " id " + std::to_string(id));
}

}  // namespace

void LatticeSpec::validate() const {
  if (!(radius > 0)) throw std::invalid_argument("lattice.radius_m must be positive");
  if (!(hMin > 0 && hMin < hMax)) throw std::invalid_argument("lattice requires 0 < h_min_m < h_max_m");
  if (!(spacing > 0)) throw std::invalid_argument("lattice.spacing_m must be positive");
  if (!is_integer_multiple(hMax - hMin, spacing)) {
    throw std::invalid_argument("lattice altitude range is not a multiple of spacing_m");
  }
  if (center.z() != 0.0) throw std::invalid_argument("lattice.center must lie on the ground");
}

int LatticeSpec::layers() const { return static_cast<int>(std::lround((hMax - hMin) / spacing)) + 1; }

int LatticeSpec::horizontalExtent() const { return static_cast<int>(std::floor(radius / spacing + 1e-9)); }

bool is_valid(const LatticeSpec& spec, const LatticeIndex& idx) {
  if (idx.k < 0 || idx.k >= spec.layers()) return false;
  const double dx = spec.spacing * idx.i;
  const double dy = spec.spacing * idx.j;
  return dx * dx + dy * dy <= spec.radius * spec.radius * (1.0 + 1e-12);
}

Position to_position(const LatticeSpec& spec, const LatticeIndex& idx) {
  if (idx.k < 0 || idx.k >= spec.layers()) {
    throw std::out_of_range("lattice index " + describe(idx) + " outside altitude layers [0, " +
                            std::to_string(spec.layers() - 1) + "]");
  }
  if (!is_valid(spec, idx)) {
    throw std::out_of_range("lattice index " + describe(idx) + " outside cylinder radius " +
                            std::to_string(spec.radius) + " m");
  }
  return spec.center + Position(spec.spacing * idx.i, spec.spacing * idx.j, spec.hMin + spec.spacing * idx.k);
}

LatticeIndex to_index(const LatticeSpec& spec, const Position& p) {
  const Position rel = p - spec.center;
  LatticeIndex idx{static_cast<int>(std::lround(rel.x() / spec.spacing)),
                   static_cast<int>(std::lround(rel.y() / spec.spacing)),
                   static_cast<int>(std::lround((rel.z() - spec.hMin) / spec.spacing))};
  if (!is_valid(spec, idx)) {
    throw std::out_of_range("position quantizes to " + describe(idx) + " outside the lattice");
  }
  return idx;
}

std::vector<LatticeIndex> lattice_points(const LatticeSpec& spec) {
  std::vector<LatticeIndex> points;
  const int extent = spec.horizontalExtent();
  for (int i = -extent; i <= extent; ++i)
    for (int j = -extent; j <= extent; ++j)
      for (int k = 0; k < spec.layers(); ++k)
        if (is_valid(spec, {i, j, k})) points.push_back({i, j, k});
  return points;
}

std::vector<LatticeIndex> feasible_actions(const LatticeSpec& spec, const LatticeIndex& idx) {
  if (!is_valid(spec, idx)) to_position(spec, idx);  // throws with the violated bound
  std::vector<LatticeIndex> out;
  out.reserve(27);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      for (int dk = -1; dk <= 1; ++dk) {
        const LatticeIndex next{idx.i + di, idx.j + dj, idx.k + dk};
        if (is_valid(spec, next)) out.push_back(next);
      }
  return out;
}

std::vector<Move> moves_to(const LatticeIndex& from, const std::vector<LatticeIndex>& destinations) {
  std::vector<Move> out;
  out.reserve(destinations.size());
  for (const auto& d : destinations) out.push_back(move_between(from, d));
  std::sort(out.begin(), out.end());
  return out;
}

double plane_distance(const Position& p, const Position& bs, const Position& target) {
  const Eigen::Vector2d dir = target.head<2>() - bs.head<2>();
  const double len = dir.norm();
  if (len == 0.0) {
    throw std::domain_error("BS and target share a ground projection; the BS-target plane is undefined");
  }
  const Eigen::Vector2d rel = p.head<2>() - bs.head<2>();
  return std::abs(dir.x() * rel.y() - dir.y() * rel.x()) / len;
}

std::vector<LatticeIndex> reduce_actions(const LatticeSpec& spec, const LatticeIndex& current,
                                         const std::vector<LatticeIndex>& actions,
                                         const Position& bs, const Position& target) {
  const double here = plane_distance(to_position(spec, current), bs, target);
  std::vector<LatticeIndex> out;
  for (const auto& a : actions) {
    if (plane_distance(to_position(spec, a), bs, target) <= here) out.push_back(a);
  }
  return out;
}

void ScenarioConfig::validate() const {
  lattice.validate();
  channel.validate();
  if (framesPerCycle < 1) throw std::invalid_argument("run.frames_per_cycle must be >= 1");
  if (!(discount >= 0.0 && discount < 1.0)) throw std::invalid_argument("run.discount must lie in [0, 1)");
  if (!(sensingLambda > 0)) throw std::invalid_argument("run.sensing_lambda_per_m must be positive");
  if (!(frameDurationS > 0)) throw std::invalid_argument("run.frame_duration_s must be positive");
  if (propulsionEnergyJ < 0) throw std::invalid_argument("run.propulsion_energy_j must be non-negative");
  if (bss.empty()) throw std::invalid_argument("bss: at least one base station is required");
  require_unique_ids(bss, "bs");
  require_unique_ids(uavs, "uav");
  require_unique_ids(targets, "target");
  for (const auto& bs : bss) {
    if (bs.subchannels < 0) {
      throw std::invalid_argument("bs " + std::to_string(bs.id) + " has a negative subchannel count");
    }
    if (bs.position.z() < 0) throw std::invalid_argument("bs " + std::to_string(bs.id) + " is below ground");
    if (bs.position.z() >= lattice.hMin) {
      throw std::invalid_argument("bs " + std::to_string(bs.id) + " antenna is not below h_min_m");
    }
  }
  for (const auto& t : targets) {
    if (t.position.z() < 0) throw std::invalid_argument("target " + std::to_string(t.id) + " is below ground");
    for (const auto& bs : bss) {
      if ((t.position.head<2>() - bs.position.head<2>()).norm() == 0.0) {
        throw std::invalid_argument("target " + std::to_string(t.id) + " lies directly above/below bs " +
                                    std::to_string(bs.id) + "; BS-target plane undefined");
      }
    }
  }
  for (const auto& u : uavs) {
    const std::string name = "uav " + std::to_string(u.id);
    if (!is_valid(lattice, u.start)) throw std::invalid_argument(name + " start index outside the lattice");
    if (!(u.batteryCapacity > 0)) throw std::invalid_argument(name + " battery_j must be positive");
    find_index(targets, u.targetId, "target");
    if (u.homeBsId) find_index(bss, *u.homeBsId, "bs");
  }
}

std::size_t ScenarioConfig::bsIndex(int bsId) const { return find_index(bss, bsId, "bs"); }

std::size_t ScenarioConfig::targetIndex(int targetId) const { return find_index(targets, targetId, "target"); }

std::size_t ScenarioConfig::uavIndex(int uavId) const { return find_index(uavs, uavId, "uav"); }

int ScenarioConfig::homeBs(const UavSpec& uav) const {
  if (uav.homeBsId) return *uav.homeBsId;
  const Position p = to_position(lattice, uav.start);
  int best = bss.front().id;
  double bestDist = std::numeric_limits<double>::infinity();
  for (const auto& bs : bss) {
    const double d = (bs.position - p).norm();
    if (d < bestDist) {
      bestDist = d;
      best = bs.id;
    }
  }
  return best;
}

}  // namespace uavsim
