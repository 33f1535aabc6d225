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

#include "uavsim/experiment.hpp"

#include "uavsim/agents/q_table.hpp"
#include "uavsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavsim {

namespace {

struct AlgorithmName {
  Algorithm algorithm;
  const char* name;
};

constexpr AlgorithmName kNames[] = {
    {Algorithm::SingleQ, "single-q"},
    {Algorithm::OpponentQ, "opponent-q"},
    {Algorithm::EnhancedQ, "enhanced-q"},
    {Algorithm::BanditAssoc, "bandit-assoc"},
    {Algorithm::ActorCriticPower, "actor-critic-power"},
    {Algorithm::DqnAlloc, "dqn-alloc"},
    {Algorithm::Baseline, "baseline"},
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000" so equal values print identically.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

/// Seed for a resumed segment, so it does not replay the first segment's draws.
std::uint64_t segment_seed(std::uint64_t seed, std::int64_t startCycle) {
  return startCycle == 0 ? seed : seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(startCycle));
}

nlohmann::json world_to_json(const WorldState& w) {
  nlohmann::json uavs = nlohmann::json::array();
  for (const auto& u : w.uavs) uavs.push_back({{"index", u.index}, {"battery_j", u.batteryJ}, {"bs", u.bsId}, {"active", u.active}});
  nlohmann::json links = nlohmann::json::array();
  for (const auto& row : w.links) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& l : row) r.push_back({l.los, l.shadowingDb, l.pathlossDb, l.meanGainLinear});
    links.push_back(r);
  }
  return {{"cycle", w.cycle}, {"uavs", uavs}, {"links", links}};
}

WorldState world_from_json(const nlohmann::json& j) {
  WorldState w;
  w.cycle = j.at("cycle").get<std::int64_t>();
  for (const auto& u : j.at("uavs")) {
    w.uavs.push_back({u.at("index").get<LatticeIndex>(), u.at("battery_j").get<double>(), u.at("bs").get<int>(),
                      u.at("active").get<bool>()});
  }
  for (const auto& row : j.at("links")) {
    std::vector<LinkRealization> r;
    for (const auto& l : row) {
      r.push_back({l.at(0).get<bool>(), l.at(1).get<double>(), l.at(2).get<double>(), l.at(3).get<double>()});
    }
    w.links.push_back(std::move(r));
  }
  return w;
}

}  // namespace

const char* to_string(Algorithm a) {
  for (const auto& n : kNames)
    if (n.algorithm == a) return n.name;
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.algorithm;
  std::string known;
  for (const auto& n : kNames) known += std::string(known.empty() ? "" : ", ") + n.name;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected one of: " + known + ")");
}

std::vector<Algorithm> all_algorithms() {
  std::vector<Algorithm> out;
  for (const auto& n : kNames) out.push_back(n.algorithm);
  return out;
}

PolicyBundle make_policies(Algorithm algorithm, const ScenarioConfig& cfg, std::int64_t horizon,
                           std::uint64_t seed) {
  PolicyBundle p;
  p.association = std::make_unique<FixedAssociation>();
  p.trajectory = std::make_unique<HoverTrajectory>();
  p.power = std::make_unique<MaxPower>();
  p.allocation = std::make_unique<MaxSuccessAllocation>();
  switch (algorithm) {
    case Algorithm::SingleQ:
      p.trajectory = std::make_unique<SingleAgentQTrajectory>(cfg, horizon, seed);
      break;
    case Algorithm::OpponentQ:
      p.trajectory =
          std::make_unique<JointActionTrajectory>(cfg, JointActionTrajectory::Mode::OpponentModeling, horizon, seed);
      break;
    case Algorithm::EnhancedQ:
      p.trajectory = std::make_unique<JointActionTrajectory>(cfg, JointActionTrajectory::Mode::Enhanced, horizon, seed);
      break;
    case Algorithm::BanditAssoc:
      p.association = std::make_unique<BanditAssociation>(cfg, horizon, seed);
      break;
    case Algorithm::ActorCriticPower:
      p.power = std::make_unique<ActorCriticPower>(cfg, horizon, seed);
      break;
    case Algorithm::DqnAlloc:
      p.allocation = std::make_unique<DqnAllocation>(cfg, horizon, seed);
      break;
    case Algorithm::Baseline:
      p.association = std::make_unique<StrongestGainAssociation>();
      break;
  }
  return p;
}

SeedRun run_seed(const ScenarioConfig& config, Algorithm algorithm, std::uint64_t seed, std::int64_t cycles,
                 const nlohmann::json* resume) {
  if (cycles < 1) throw std::invalid_argument("cycles must be at least 1");
  config.validate();

  WorldState world;
  std::int64_t start = 0;
  if (resume) {
    if (resume->at("algorithm").get<std::string>() != to_string(algorithm)) {
      throw std::invalid_argument("checkpoint was written by algorithm " + resume->at("algorithm").get<std::string>());
    }
    if (resume->at("seed").get<std::uint64_t>() != seed) {
      throw std::invalid_argument("checkpoint was written for a different seed");
    }
    world = world_from_json(resume->at("world"));
    if (world.uavs.size() != config.uavs.size()) throw std::invalid_argument("checkpoint does not match the config");
    start = world.cycle;
  }

  const std::uint64_t s = segment_seed(seed, start);
  RngStreams rng(s);
  if (!resume) world = initial_world(config, rng);
  PolicyBundle policies = make_policies(algorithm, config, start + cycles, s);
  if (resume) {
    const auto& p = resume->at("policies");
    policies.association->restore(p.at("association"));
    policies.trajectory->restore(p.at("trajectory"));
    policies.power->restore(p.at("power"));
    policies.allocation->restore(p.at("allocation"));
  }

  SeedRun run;
  run.seed = seed;
  run.reports.reserve(static_cast<std::size_t>(cycles));
  run.finalWorld = run_episode(world, policies, cycles, config, rng,
                               [&](const CycleReport& r) { run.reports.push_back(r); });
  run.checkpoint = {{"algorithm", to_string(algorithm)},
                    {"seed", seed},
                    {"world", world_to_json(run.finalWorld)},
                    {"policies",
                     {{"association", policies.association->snapshot()},
                      {"trajectory", policies.trajectory->snapshot()},
                      {"power", policies.power->snapshot()},
                      {"allocation", policies.allocation->snapshot()}}}};
  return run;
}

void write_rows(std::ostream& os, const std::string& runId, Algorithm algorithm, const SeedRun& run, int window) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  std::vector<std::deque<int>> recent;
  std::vector<int> sums;
  for (const auto& report : run.reports) {
    if (recent.size() < report.uavs.size()) {
      recent.resize(report.uavs.size());
      sums.resize(report.uavs.size(), 0);
    }
    for (std::size_t u = 0; u < report.uavs.size(); ++u) {
      const auto& r = report.uavs[u];
      recent[u].push_back(r.reward);
      sums[u] += r.reward;
      if (recent[u].size() > static_cast<std::size_t>(window)) {
        sums[u] -= recent[u].front();
        recent[u].pop_front();
      }
      const double avg = static_cast<double>(sums[u]) / static_cast<double>(recent[u].size());
      os << runId << ',' << run.seed << ',' << to_string(algorithm) << ',' << report.cycle << ',' << r.uavId << ','
         << fixed6(r.position.x()) << ',' << fixed6(r.position.y()) << ',' << fixed6(r.position.z()) << ','
         << r.bsId << ',' << fixed6(r.txPowerDbm) << ',' << (r.sensingValid ? 1 : 0) << ','
         << (r.delivered ? 1 : 0) << ',' << r.framesUsed << ',' << r.reward << ',' << fixed6(avg) << '\n';
    }
  }
}

std::vector<double> per_cycle_reward(const std::vector<CycleReport>& reports) {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) {
    out.push_back(r.uavs.empty() ? 0.0 : static_cast<double>(r.totalReward()) / static_cast<double>(r.uavs.size()));
  }
  return out;
}

double final_window_mean(const std::vector<double>& series, std::size_t window) {
  if (series.empty()) throw std::invalid_argument("final_window_mean of an empty series");
  const std::size_t n = std::min(window, series.size());
  return std::accumulate(series.end() - static_cast<std::ptrdiff_t>(n), series.end(), 0.0) / static_cast<double>(n);
}

std::vector<double> moving_average(const std::vector<double>& series, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving-average window must be positive");
  std::vector<double> out(series.size());
  double sum = 0.0;
  for (std::size_t n = 0; n < series.size(); ++n) {
    sum += series[n];
    if (n >= window) sum -= series[n - window];
    out[n] = sum / static_cast<double>(std::min(n + 1, window));
  }
  return out;
}

std::size_t convergence_cycle(const std::vector<double>& series, std::size_t smoothing, std::size_t finalWindow,
                              double fraction) {
  const double target = fraction * final_window_mean(series, finalWindow);
  const auto smooth = moving_average(series, smoothing);
  // Only full smoothing windows count, so an early lucky cycle is not convergence.
  for (std::size_t n = smoothing - 1; n < smooth.size(); ++n) {
    if (smooth[n] >= target) return n;
  }
  return series.size();
}

ScenarioConfig place_targets(const ScenarioConfig& config, double distance) {
  if (!(distance > 0)) throw std::invalid_argument("target distance must be positive");
  ScenarioConfig out = config;
  for (auto& t : out.targets) {
    const UavSpec* owner = nullptr;
    for (const auto& u : config.uavs) {
      if (u.targetId == t.id) {
        owner = &u;
        break;
      }
    }
    if (!owner) continue;
    const Position& bs = config.bss[config.bsIndex(config.homeBs(*owner))].position;
    Eigen::Vector2d dir(t.position.x() - bs.x(), t.position.y() - bs.y());
    if (dir.norm() == 0.0) throw std::invalid_argument("target " + std::to_string(t.id) + " has no bearing from its BS");
    dir.normalize();
    t.position.x() = bs.x() + distance * dir.x();
    t.position.y() = bs.y() + distance * dir.y();
    const Eigen::Vector2d offset(t.position.x() - config.lattice.center.x(), t.position.y() - config.lattice.center.y());
    if (offset.norm() > config.lattice.radius) {
      std::ostringstream os;
      os << "target " << t.id << " at distance " << distance << " m falls outside the region";
      throw std::invalid_argument(os.str());
    }
  }
  out.validate();
  return out;
}

std::vector<SweepRow> sweep_distance(const ScenarioConfig& config, const std::vector<Algorithm>& algorithms,
                                     const std::vector<double>& distances, const std::vector<std::uint64_t>& seeds,
                                     std::int64_t cycles, std::size_t finalWindow) {
  std::vector<ScenarioConfig> placed;
  for (double d : distances) placed.push_back(place_targets(config, d));
  std::vector<SweepRow> rows;
  for (Algorithm a : algorithms) {
    for (std::size_t n = 0; n < distances.size(); ++n) {
      for (std::uint64_t seed : seeds) {
        const SeedRun run = run_seed(placed[n], a, seed, cycles);
        rows.push_back({a, distances[n], seed, final_window_mean(per_cycle_reward(run.reports), finalWindow)});
      }
    }
  }
  return rows;
}

void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.algorithm) << ',' << fixed6(r.distance) << ',' << r.seed << ',' << fixed6(r.finalReward) << '\n';
  }
}

}  // namespace uavsim
