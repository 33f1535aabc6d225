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

#include "uavsim/protocol.hpp"

#include "uavsim/sensing.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace uavsim {

namespace {

double dbm_to_watts(double dbm) { return db_to_linear(dbm) * 1e-3; }

bool adjacent(const LatticeIndex& a, const LatticeIndex& b) {
  return std::abs(a.i - b.i) <= 1 && std::abs(a.j - b.j) <= 1 && std::abs(a.k - b.k) <= 1;
}

/// BS indices grouped by band, bands in ascending id order.
std::vector<std::vector<std::size_t>> band_groups(const ScenarioConfig& cfg) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t b = 0; b < cfg.bss.size(); ++b) groups[cfg.bss[b].bandId].push_back(b);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [band, members] : groups) out.push_back(std::move(members));
  return out;
}

void check_world(const WorldState& world, const ScenarioConfig& cfg) {
  if (world.uavs.size() != cfg.uavs.size()) throw std::invalid_argument("world/config UAV count mismatch");
  if (world.links.size() != cfg.uavs.size()) throw std::invalid_argument("world link table has wrong UAV count");
  for (const auto& row : world.links) {
    if (row.size() != cfg.bss.size()) throw std::invalid_argument("world link table has wrong BS count");
  }
  for (const auto& u : world.uavs) {
    if (!is_valid(cfg.lattice, u.index)) throw std::invalid_argument("world holds an invalid lattice index");
    if (u.batteryJ < 0) throw std::invalid_argument("world holds a negative battery level");
    cfg.bsIndex(u.bsId);
  }
}

void check_allocation(const Allocation& alloc, const FrameView& view, const ScenarioConfig& cfg) {
  if (alloc.size() != view.groupBs.size()) {
    throw std::logic_error("allocation policy returned " + std::to_string(alloc.size()) +
                           " BS entries for a group of " + std::to_string(view.groupBs.size()));
  }
  std::vector<std::uint8_t> seen(view.member.size(), 0);
  for (std::size_t g = 0; g < alloc.size(); ++g) {
    const std::size_t b = view.groupBs[g];
    if (static_cast<int>(alloc[g].size()) > cfg.bss[b].subchannels) {
      throw std::logic_error("allocation exceeds the subchannel count of bs " + std::to_string(cfg.bss[b].id));
    }
    for (std::size_t u : alloc[g]) {
      if (u >= view.member.size() || view.servingBs[u] != b) {
        throw std::logic_error("allocation assigns a UAV not served by bs " + std::to_string(cfg.bss[b].id));
      }
      if (seen[u]++) throw std::logic_error("allocation assigns a UAV twice");
    }
  }
}

}  // namespace

const char* to_string(FrameOutcome outcome) {
  switch (outcome) {
    case FrameOutcome::NoSubchannel: return "no-subchannel";
    case FrameOutcome::Failed: return "failed";
    case FrameOutcome::Success: return "success";
    case FrameOutcome::Idle: return "idle";
  }
  return "?";
}

int CycleReport::totalReward() const {
  return std::accumulate(uavs.begin(), uavs.end(), 0, [](int acc, const UavCycleRecord& r) { return acc + r.reward; });
}

std::vector<int> allocate_max_success(std::span<const std::pair<int, double>> pending, int k) {
  std::vector<std::pair<int, double>> order(pending.begin(), pending.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), order.size());
  std::vector<int> chosen;
  for (std::size_t n = 0; n < take; ++n) chosen.push_back(order[n].first);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double min_operating_energy(const ScenarioConfig& config) {
  return config.propulsionEnergyJ + dbm_to_watts(config.channel.txPowerMinDbm) * config.frameDurationS;
}

WorldState initial_world(const ScenarioConfig& config, RngStreams& rng) {
  config.validate();
  WorldState world;
  world.uavs.reserve(config.uavs.size());
  world.links.resize(config.uavs.size());
  for (std::size_t u = 0; u < config.uavs.size(); ++u) {
    const auto& spec = config.uavs[u];
    world.uavs.push_back({spec.start, spec.batteryCapacity, config.homeBs(spec), true});
    const Position p = to_position(config.lattice, spec.start);
    for (const auto& bs : config.bss) {
      world.links[u].push_back(realize_link(rng.uav(spec.id), p, bs.position, config.channel));
    }
  }
  return world;
}

CycleResult run_cycle(const WorldState& world, PolicyBundle& policies, const ScenarioConfig& cfg,
                      RngStreams& rng) {
  check_world(world, cfg);
  const std::size_t nU = cfg.uavs.size();
  const std::size_t nB = cfg.bss.size();
  const int frames = cfg.framesPerCycle;
  const auto& ch = cfg.channel;

  // Beaconing phase.
  Decisions decisions;
  for (const auto& s : world.uavs) {
    decisions.bsId.push_back(s.bsId);
    decisions.destination.push_back(s.index);
    decisions.txPowerDbm.push_back(ch.txPowerMaxDbm);
  }
  const BeaconView view{cfg, world.cycle, world.uavs, world.links};
  policies.association->select(view, decisions);
  policies.trajectory->select(view, decisions);
  policies.power->select(view, decisions);

  CycleResult result{world, {}};
  WorldState& next = result.world;
  CycleReport& report = result.report;
  next.cycle = world.cycle + 1;
  report.cycle = world.cycle;
  report.uavs.resize(nU);

  // Sensing phase: move, then sense at the new point.
  const double minEnergy = min_operating_energy(cfg);
  std::vector<Position> positions(nU);
  for (std::size_t u = 0; u < nU; ++u) {
    auto& s = next.uavs[u];
    auto& rec = report.uavs[u];
    rec.uavId = cfg.uavs[u].id;
    if (s.active && s.batteryJ < minEnergy) s.active = false;
    if (s.active) {
      cfg.bsIndex(decisions.bsId[u]);
      if (!is_valid(cfg.lattice, decisions.destination[u]) || !adjacent(decisions.destination[u], s.index)) {
        std::ostringstream os;
        os << "uav " << rec.uavId << " chose infeasible destination " << decisions.destination[u] << " from "
           << s.index;
        throw std::logic_error(os.str());
      }
      const double p = decisions.txPowerDbm[u];
      if (!(p >= ch.txPowerMinDbm && p <= ch.txPowerMaxDbm)) {
        throw std::logic_error("uav " + std::to_string(rec.uavId) + " chose transmit power " + std::to_string(p) +
                               " dBm outside the allowed range");
      }
      s.bsId = decisions.bsId[u];
      s.index = decisions.destination[u];
      s.batteryJ -= cfg.propulsionEnergyJ;
    }
    positions[u] = to_position(cfg.lattice, s.index);
    rec.active = s.active;
    rec.chosenAction = s.index;
    rec.position = positions[u];
    rec.bsId = s.bsId;
    rec.txPowerDbm = s.active ? decisions.txPowerDbm[u] : 0.0;
  }

  for (std::size_t u = 0; u < nU; ++u) {
    Rng& stream = rng.uav(cfg.uavs[u].id);
    for (std::size_t b = 0; b < nB; ++b) {
      next.links[u][b] = realize_link(stream, positions[u], cfg.bss[b].position, ch);
    }
    if (next.uavs[u].active) {
      const Position& target = cfg.targets[cfg.targetIndex(cfg.uavs[u].targetId)].position;
      const double p = sensing_success_prob((positions[u] - target).norm(), cfg.sensingLambda);
      report.uavs[u].sensingValid = sample_sensing(stream, p);
    }
  }

  // Transmission phase.
  std::vector<std::size_t> serving(nU);
  std::vector<double> q(nU, 0.0), power(nU, 0.0), frameEnergy(nU, 0.0);
  for (std::size_t u = 0; u < nU; ++u) {
    serving[u] = cfg.bsIndex(next.uavs[u].bsId);
    if (!next.uavs[u].active) continue;
    power[u] = decisions.txPowerDbm[u];
    frameEnergy[u] = dbm_to_watts(power[u]) * cfg.frameDurationS;
    q[u] = frame_success_prob_mw(next.links[u][serving[u]], power[u], 0.0, ch);
  }
  const auto groups = band_groups(cfg);
  std::vector<std::uint8_t> succeeded(nU, 0), pending(nU, 0), member(nU, 0);
  for (auto& rec : report.uavs) rec.frames.assign(static_cast<std::size_t>(frames), FrameOutcome::NoSubchannel);

  for (int f = 0; f < frames; ++f) {
    for (std::size_t u = 0; u < nU; ++u) {
      pending[u] = next.uavs[u].active && !succeeded[u] && next.uavs[u].batteryJ >= frameEnergy[u];
    }
    std::vector<std::vector<std::size_t>> slots(nB);
    for (const auto& group : groups) {
      bool any = false;
      for (std::size_t u = 0; u < nU; ++u) {
        member[u] = std::find(group.begin(), group.end(), serving[u]) != group.end();
        any = any || member[u];
      }
      if (!any) continue;
      const FrameView fv{cfg, f, group, serving, member, pending, q, power, next.links};
      Allocation alloc = policies.allocation->select(fv);
      check_allocation(alloc, fv, cfg);
      for (std::size_t g = 0; g < group.size(); ++g) {
        auto& sel = alloc[g];
        std::sort(sel.begin(), sel.end(), [&](std::size_t a, std::size_t b) {
          return cfg.uavs[a].id < cfg.uavs[b].id;
        });
        slots[group[g]] = sel;
      }
    }

    std::vector<std::uint8_t> successNow(nU, 0), transmitted(nU, 0);
    for (std::size_t b = 0; b < nB; ++b) {
      for (std::size_t slot = 0; slot < slots[b].size(); ++slot) {
        const std::size_t u = slots[b][slot];
        if (!pending[u]) continue;
        double interference = 0.0;
        for (std::size_t other = 0; other < nB; ++other) {
          if (other == b || cfg.bss[other].bandId != cfg.bss[b].bandId) continue;
          if (slot >= slots[other].size()) continue;
          const std::size_t v = slots[other][slot];
          if (pending[v]) interference += db_to_linear(power[v]) * next.links[v][b].meanGainLinear;
        }
        const double qf = frame_success_prob_mw(next.links[u][b], power[u], interference, ch);
        transmitted[u] = 1;
        successNow[u] = bernoulli(rng.uav(cfg.uavs[u].id), qf);
      }
    }

    for (std::size_t u = 0; u < nU; ++u) {
      auto& rec = report.uavs[u];
      const auto fi = static_cast<std::size_t>(f);
      if (succeeded[u]) {
        rec.frames[fi] = FrameOutcome::Idle;
      } else if (transmitted[u]) {
        rec.frames[fi] = successNow[u] ? FrameOutcome::Success : FrameOutcome::Failed;
        next.uavs[u].batteryJ -= frameEnergy[u];
        rec.txEnergyJ += frameEnergy[u];
        if (successNow[u]) {
          succeeded[u] = 1;
          rec.delivered = true;
          rec.framesUsed = f + 1;
        }
      }
    }
  }

  std::vector<UavFeedback> feedback(nU);
  for (std::size_t u = 0; u < nU; ++u) {
    auto& rec = report.uavs[u];
    auto& s = next.uavs[u];
    if (!rec.delivered) rec.framesUsed = frames;
    rec.reward = (rec.delivered && rec.sensingValid) ? 1 : 0;
    s.batteryJ = std::max(s.batteryJ, 0.0);
    rec.batteryJ = s.batteryJ;
    if (s.active && s.batteryJ < minEnergy) s.active = false;
    feedback[u] = {rec.active, rec.delivered, rec.reward, rec.framesUsed, rec.frames};
  }

  const CycleFeedback fb{cfg, world, next, decisions, feedback, world.cycle};
  policies.association->learn(fb);
  policies.trajectory->learn(fb);
  policies.power->learn(fb);
  policies.allocation->learn(fb);
  return result;
}

WorldState run_episode(const WorldState& initial, PolicyBundle& policies, std::int64_t cycles,
                       const ScenarioConfig& config, RngStreams& rng,
                       const std::function<void(const CycleReport&)>& sink) {
  if (cycles < 1) throw std::invalid_argument("an episode needs at least one cycle");
  WorldState world = initial;
  for (std::int64_t c = 0; c < cycles; ++c) {
    CycleResult r = run_cycle(world, policies, config, rng);
    if (sink) sink(r.report);
    world = std::move(r.world);
  }
  return world;
}

}  // namespace uavsim
