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

#include "uavsim/policies.hpp"

#include "uavsim/oracle.hpp"
#include "uavsim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavsim {

namespace {

constexpr std::uint64_t kPolicyTag = 0x504f4c00;

Rng policy_stream(std::uint64_t seed, std::uint64_t which) { return make_stream(seed, kPolicyTag + which); }

QLearningParams q_params(const ScenarioConfig& cfg) {
  return {cfg.learning.alpha, cfg.learning.alphaDecay, cfg.discount};
}

std::vector<int> bs_ids(const ScenarioConfig& cfg) {
  std::vector<int> ids;
  for (const auto& bs : cfg.bss) ids.push_back(bs.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const Position& target_of(const ScenarioConfig& cfg, std::size_t u) {
  return cfg.targets[cfg.targetIndex(cfg.uavs[u].targetId)].position;
}

}  // namespace

// ---------------------------------------------------------------------------
// Association

void StrongestGainAssociation::select(const BeaconView& view, Decisions& decisions) {
  for (std::size_t u = 0; u < view.uavs.size(); ++u) {
    if (!view.uavs[u].active) continue;
    std::size_t best = 0;
    for (std::size_t b = 1; b < view.config.bss.size(); ++b) {
      const double g = view.links[u][b].meanGainLinear;
      const double bestGain = view.links[u][best].meanGainLinear;
      if (g > bestGain || (g == bestGain && view.config.bss[b].id < view.config.bss[best].id)) best = b;
    }
    decisions.bsId[u] = view.config.bss[best].id;
  }
}

BanditAssociation::BanditAssociation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed)
    : epsilon_{config.learning.banditEpsilonStart, config.learning.banditEpsilonEnd, horizon},
      rng_(policy_stream(seed, 1)) {
  for (std::size_t u = 0; u < config.uavs.size(); ++u) bandits_.emplace_back(bs_ids(config), epsilon_.start);
}

void BanditAssociation::select(const BeaconView& view, Decisions& decisions) {
  for (std::size_t u = 0; u < view.uavs.size(); ++u) {
    if (!view.uavs[u].active) continue;
    bandits_[u].epsilon = epsilon_.at(view.cycle);
    decisions.bsId[u] = bandit_select(bandits_[u], rng_);
  }
}

void BanditAssociation::learn(const CycleFeedback& fb) {
  for (std::size_t u = 0; u < fb.uavs.size(); ++u) {
    if (!fb.uavs[u].active) continue;
    bandit_update(bandits_[u], fb.decisions.bsId[u], fb.uavs[u].delivered ? 1 : 0);
  }
}

nlohmann::json BanditAssociation::snapshot() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : bandits_) arr.push_back(to_json(b));
  return {{"kind", "bandit-assoc"}, {"bandits", arr}};
}

void BanditAssociation::restore(const nlohmann::json& j) {
  const auto& arr = j.at("bandits");
  if (arr.size() != bandits_.size()) throw std::invalid_argument("bandit snapshot has the wrong UAV count");
  for (std::size_t u = 0; u < bandits_.size(); ++u) bandits_[u] = bandit_from_json(arr[u]);
}

// ---------------------------------------------------------------------------
// Trajectory

std::vector<std::size_t> cell_members(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u) {
  std::vector<std::size_t> members;
  for (std::size_t v = 0; v < uavs.size(); ++v) {
    if ((uavs[v].active || v == u) && uavs[v].bsId == uavs[u].bsId) members.push_back(v);
  }
  std::sort(members.begin(), members.end(),
            [&](std::size_t a, std::size_t b) { return cfg.uavs[a].id < cfg.uavs[b].id; });
  return members;
}

CellState cell_state(const ScenarioConfig& cfg, std::span<const UavState> uavs, std::size_t u) {
  CellState s;
  for (std::size_t v : cell_members(cfg, uavs, u)) s.push_back(uavs[v].index);
  return s;
}

SingleAgentQTrajectory::SingleAgentQTrajectory(const ScenarioConfig& config, std::int64_t horizon,
                                               std::uint64_t seed)
    : tables_(config.uavs.size(), SparseQTable<CellState, Move>(q_params(config))),
      epsilon_{config.learning.epsilonStart, config.learning.epsilonEnd, horizon},
      rng_(policy_stream(seed, 2)) {}

void SingleAgentQTrajectory::select(const BeaconView& view, Decisions& decisions) {
  const double eps = epsilon_.at(view.cycle);
  for (std::size_t u = 0; u < view.uavs.size(); ++u) {
    if (!view.uavs[u].active) continue;
    const LatticeIndex& here = view.uavs[u].index;
    const auto moves = moves_to(here, feasible_actions(view.config.lattice, here));
    const CellState s = cell_state(view.config, view.uavs, u);
    decisions.destination[u] = apply_move(here, q_select<CellState, Move>(tables_[u], s, moves, eps, rng_));
  }
}

void SingleAgentQTrajectory::learn(const CycleFeedback& fb) {
  for (std::size_t u = 0; u < fb.uavs.size(); ++u) {
    if (!fb.uavs[u].active) continue;
    const LatticeIndex& here = fb.before.uavs[u].index;
    const LatticeIndex& next = fb.after.uavs[u].index;
    std::vector<Move> nextMoves;
    if (fb.after.uavs[u].active) nextMoves = moves_to(next, feasible_actions(fb.config.lattice, next));
    q_update<CellState, Move>(tables_[u], cell_state(fb.config, fb.before.uavs, u), move_between(here, next),
                              fb.uavs[u].reward, cell_state(fb.config, fb.after.uavs, u), nextMoves);
  }
}

nlohmann::json SingleAgentQTrajectory::snapshot() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tables_) arr.push_back(t.toJson());
  return {{"kind", "single-q"}, {"tables", arr}};
}

void SingleAgentQTrajectory::restore(const nlohmann::json& j) {
  const auto& arr = j.at("tables");
  if (arr.size() != tables_.size()) throw std::invalid_argument("Q snapshot has the wrong UAV count");
  for (std::size_t u = 0; u < tables_.size(); ++u) {
    tables_[u] = SparseQTable<CellState, Move>::fromJson(arr[u]);
  }
}

JointActionTrajectory::JointActionTrajectory(const ScenarioConfig& config, Mode mode, std::int64_t horizon,
                                             std::uint64_t seed)
    : mode_(mode),
      learners_(config.uavs.size(), JointActionLearner<CellState, Move>(q_params(config))),
      epsilon_{config.learning.epsilonStart, config.learning.epsilonEnd, horizon},
      rng_(policy_stream(seed, mode == Mode::Enhanced ? 4 : 3)) {}

JointActionTrajectory::CellView JointActionTrajectory::cell(const ScenarioConfig& cfg,
                                                            std::span<const UavState> uavs, std::size_t u) const {
  CellView c;
  c.members = cell_members(cfg, uavs, u);
  for (std::size_t n = 0; n < c.members.size(); ++n) {
    c.state.push_back(uavs[c.members[n]].index);
    if (c.members[n] == u) c.self = n;
  }
  return c;
}

std::vector<OpponentInfo> JointActionTrajectory::opponents(const ScenarioConfig& cfg, std::span<const UavState> uavs,
                                                           const CellView& c) const {
  std::vector<OpponentInfo> out;
  for (std::size_t n = 0; n < c.members.size(); ++n) {
    if (n == c.self) continue;
    const std::size_t v = c.members[n];
    out.push_back({cfg.uavs[v].id, actions(cfg, uavs, v).size()});
  }
  return out;
}

std::vector<Move> JointActionTrajectory::actions(const ScenarioConfig& cfg, std::span<const UavState> uavs,
                                                 std::size_t u) const {
  const LatticeIndex& here = uavs[u].index;
  auto all = feasible_actions(cfg.lattice, here);
  if (mode_ == Mode::Enhanced) {
    const Position& bs = cfg.bss[cfg.bsIndex(uavs[u].bsId)].position;
    all = reduce_actions(cfg.lattice, here, all, bs, target_of(cfg, u));
  }
  return moves_to(here, all);
}

double JointActionTrajectory::expected_success_prob(const ScenarioConfig& cfg, const Position& uav, std::size_t bs,
                                                    double txPowerDbm) {
  const Position& bsPos = cfg.bss[bs].position;
  const double pLos = los_probability(elevation_angle_deg(uav, bsPos), cfg.channel);
  const double qLos = frame_success_prob_mw(mean_link(uav, bsPos, true, cfg.channel), txPowerDbm, 0.0, cfg.channel);
  const double qNlos = frame_success_prob_mw(mean_link(uav, bsPos, false, cfg.channel), txPowerDbm, 0.0, cfg.channel);
  return pLos * qLos + (1.0 - pLos) * qNlos;
}

void JointActionTrajectory::select(const BeaconView& view, Decisions& decisions) {
  const double eps = epsilon_.at(view.cycle);
  for (std::size_t u = 0; u < view.uavs.size(); ++u) {
    if (!view.uavs[u].active) continue;
    const CellView c = cell(view.config, view.uavs, u);
    const auto opp = opponents(view.config, view.uavs, c);
    const auto acts = actions(view.config, view.uavs, u);
    const Move m = learners_[u].select(c.state, std::span<const Move>(acts), std::span<const OpponentInfo>(opp), eps, rng_);
    decisions.destination[u] = apply_move(view.uavs[u].index, m);
  }
}

std::vector<double> JointActionTrajectory::expected_rewards(const CycleFeedback& fb) {
  const auto& cfg = fb.config;
  const auto& after = fb.after;
  std::vector<double> out(fb.uavs.size(), 0.0);
  // One oracle query per serving BS, over the UAVs that transmitted there.
  for (std::size_t b = 0; b < cfg.bss.size(); ++b) {
    std::vector<std::size_t> members;
    for (std::size_t u = 0; u < fb.uavs.size(); ++u) {
      if (fb.uavs[u].active && cfg.bsIndex(after.uavs[u].bsId) == b) members.push_back(u);
    }
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t c) { return cfg.uavs[a].id < cfg.uavs[c].id; });
    std::vector<Position> positions, targets;
    std::vector<double> q;
    for (std::size_t u : members) {
      positions.push_back(to_position(cfg.lattice, after.uavs[u].index));
      targets.push_back(target_of(cfg, u));
      q.push_back(expected_success_prob(cfg, positions.back(), b, fb.decisions.txPowerDbm[u]));
    }
    const DeliveryQuery query =
        make_delivery_query(positions, targets, cfg.sensingLambda, q, cfg.framesPerCycle, cfg.bss[b].subchannels);
    std::vector<double> p;
    if (members.size() <= kMaxExactUavs) {
      p = delivery_prob_dp(query);
    } else {
      p = delivery_prob_mc(query, rng_, 10000).probability;
    }
    for (std::size_t n = 0; n < members.size(); ++n) out[members[n]] = p[n];
  }
  return out;
}

void JointActionTrajectory::learn(const CycleFeedback& fb) {
  const auto& cfg = fb.config;
  std::vector<double> expected;
  if (mode_ == Mode::Enhanced) expected = expected_rewards(fb);

  for (std::size_t u = 0; u < fb.uavs.size(); ++u) {
    if (!fb.uavs[u].active) continue;
    const CellView before = cell(cfg, fb.before.uavs, u);
    const auto opp = opponents(cfg, fb.before.uavs, before);
    std::vector<Move> oppActions;
    for (std::size_t n = 0; n < before.members.size(); ++n) {
      if (n == before.self) continue;
      const std::size_t v = before.members[n];
      oppActions.push_back(move_between(fb.before.uavs[v].index, fb.after.uavs[v].index));
    }
    const double reward = mode_ == Mode::Enhanced ? expected[u] : static_cast<double>(fb.uavs[u].reward);

    const CellView next = cell(cfg, fb.after.uavs, u);
    const auto nextOpp = opponents(cfg, fb.after.uavs, next);
    std::vector<Move> nextActions;
    if (fb.after.uavs[u].active) nextActions = actions(cfg, fb.after.uavs, u);

    learners_[u].update(before.state, move_between(fb.before.uavs[u].index, fb.after.uavs[u].index), oppActions, opp,
                        reward, next.state, nextActions, nextOpp);
  }
}

nlohmann::json JointActionTrajectory::snapshot() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : learners_) arr.push_back(l.toJson());
  return {{"kind", mode_ == Mode::Enhanced ? "enhanced-q" : "opponent-q"}, {"learners", arr}};
}

void JointActionTrajectory::restore(const nlohmann::json& j) {
  const auto& arr = j.at("learners");
  if (arr.size() != learners_.size()) throw std::invalid_argument("learner snapshot has the wrong UAV count");
  for (std::size_t u = 0; u < learners_.size(); ++u) {
    learners_[u] = JointActionLearner<CellState, Move>::fromJson(arr[u]);
  }
}

// ---------------------------------------------------------------------------
// Power

ActorCriticPower::ActorCriticPower(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed)
    : lastFeatures_(config.uavs.size()),
      stddev_{config.learning.actorStdStartDb, config.learning.actorStdEndDb, horizon},
      rng_(policy_stream(seed, 5)) {
  for (std::size_t u = 0; u < config.uavs.size(); ++u) {
    ActorCriticState s(3, config.channel.txPowerMinDbm, config.channel.txPowerMaxDbm);
    s.actorStep = config.learning.actorStep;
    s.criticStep = config.learning.criticStep;
    s.discount = config.discount;
    s.stddev = stddev_.start;
    agents_.push_back(std::move(s));
  }
}

Eigen::VectorXd ActorCriticPower::features(const ScenarioConfig& cfg, const UavState& s, const LinkTable& links,
                                           std::size_t u) {
  const auto& lp = cfg.learning;
  const double loss = links[u][cfg.bsIndex(s.bsId)].lossDb();
  Eigen::VectorXd phi(3);
  phi << 1.0, (loss - lp.pathlossRefDb) / lp.pathlossScaleDb, s.batteryJ / cfg.uavs[u].batteryCapacity;
  return phi;
}

void ActorCriticPower::select(const BeaconView& view, Decisions& decisions) {
  for (std::size_t u = 0; u < view.uavs.size(); ++u) {
    if (!view.uavs[u].active) continue;
    UavState s = view.uavs[u];
    s.bsId = decisions.bsId[u];
    lastFeatures_[u] = features(view.config, s, view.links, u);
    agents_[u].stddev = evaluation_ ? 0.0 : stddev_.at(view.cycle);
    decisions.txPowerDbm[u] = ac_select_power(agents_[u], lastFeatures_[u], rng_);
  }
}

void ActorCriticPower::learn(const CycleFeedback& fb) {
  if (evaluation_) return;
  for (std::size_t u = 0; u < fb.uavs.size(); ++u) {
    if (!fb.uavs[u].active || lastFeatures_[u].size() == 0) continue;
    const auto& s = fb.after.uavs[u];
    const Eigen::VectorXd next = features(fb.config, s, fb.after.links, u);
    ac_update(agents_[u], lastFeatures_[u], fb.decisions.txPowerDbm[u], fb.uavs[u].reward, next, !s.active);
  }
}

nlohmann::json ActorCriticPower::snapshot() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : agents_) arr.push_back(to_json(a));
  return {{"kind", "actor-critic-power"}, {"agents", arr}};
}

void ActorCriticPower::restore(const nlohmann::json& j) {
  const auto& arr = j.at("agents");
  if (arr.size() != agents_.size()) throw std::invalid_argument("actor-critic snapshot has the wrong UAV count");
  for (std::size_t u = 0; u < agents_.size(); ++u) agents_[u] = actor_critic_from_json(arr[u]);
}

// ---------------------------------------------------------------------------
// Subchannel allocation

Allocation MaxSuccessAllocation::select(const FrameView& view) {
  Allocation out(view.groupBs.size());
  for (std::size_t g = 0; g < view.groupBs.size(); ++g) {
    const std::size_t b = view.groupBs[g];
    std::vector<std::pair<int, double>> pending;
    for (std::size_t u = 0; u < view.member.size(); ++u) {
      if (view.pending[u] && view.servingBs[u] == b) pending.emplace_back(view.config.uavs[u].id, view.successProb[u]);
    }
    for (int id : allocate_max_success(pending, view.config.bss[b].subchannels)) {
      out[g].push_back(view.config.uavIndex(id));
    }
  }
  return out;
}

int LearnedAllocationBase::feature_count(const Group& g) {
  int members = 0;
  for (const auto& m : g.members) members += static_cast<int>(m.size());
  return members * (static_cast<int>(g.bs.size()) + 1) + 1;
}

Eigen::VectorXd LearnedAllocationBase::features(const Group& g, const FrameView& view) {
  const auto& lp = view.config.learning;
  Eigen::VectorXd phi(feature_count(g));
  Eigen::Index n = 0;
  for (const auto& members : g.members) {
    for (std::size_t u : members) {
      for (std::size_t b : g.bs) phi(n++) = (view.links[u][b].lossDb() - lp.pathlossRefDb) / lp.pathlossScaleDb;
      phi(n++) = view.pending[u] ? 1.0 : 0.0;
    }
  }
  const int frames = view.config.framesPerCycle;
  phi(n) = static_cast<double>(frames - view.frame) / static_cast<double>(frames);
  return phi;
}

std::vector<int> LearnedAllocationBase::valid_actions(const Group& g, const FrameView& view) {
  std::vector<std::vector<bool>> pending;
  for (const auto& members : g.members) {
    std::vector<bool> flags;
    for (std::size_t u : members) flags.push_back(view.pending[u] != 0);
    pending.push_back(std::move(flags));
  }
  return g.space.validActions(pending);
}

Allocation LearnedAllocationBase::select(const FrameView& view) {
  const std::size_t key = view.groupBs.front();
  std::vector<std::vector<std::size_t>> members(view.groupBs.size());
  for (std::size_t g = 0; g < view.groupBs.size(); ++g) {
    for (std::size_t u = 0; u < view.member.size(); ++u) {
      if (view.member[u] && view.servingBs[u] == view.groupBs[g]) members[g].push_back(u);
    }
    std::sort(members[g].begin(), members[g].end(), [&](std::size_t a, std::size_t b) {
      return view.config.uavs[a].id < view.config.uavs[b].id;
    });
  }

  auto it = groups_.find(key);
  if (it == groups_.end()) {
    Group g;
    g.bs.assign(view.groupBs.begin(), view.groupBs.end());
    g.members = members;
    std::vector<int> sizes, channels;
    for (std::size_t n = 0; n < g.bs.size(); ++n) {
      sizes.push_back(static_cast<int>(members[n].size()));
      channels.push_back(view.config.bss[g.bs[n]].subchannels);
    }
    g.space = AllocationSpace(sizes, channels);
    it = groups_.emplace(key, std::move(g)).first;
    onNewGroup(key, it->second);
  } else if (it->second.members != members) {
    throw std::logic_error("learned allocation needs a fixed set of UAVs per BS");
  }
  const Group& g = it->second;

  FrameRecord rec;
  rec.features = features(g, view);
  rec.valid = valid_actions(g, view);
  rec.action = choose(key, g, rec.features, rec.valid, cycle_);

  Allocation out(g.bs.size());
  const auto picks = g.space.decode(rec.action);
  for (std::size_t n = 0; n < g.bs.size(); ++n) {
    for (int m : picks[n]) out[n].push_back(g.members[n][static_cast<std::size_t>(m)]);
  }
  auto& recs = records_[key];
  if (view.frame == 0) recs.clear();
  recs.push_back(std::move(rec));
  return out;
}

void LearnedAllocationBase::learn(const CycleFeedback& fb) {
  for (auto& [key, recs] : records_) {
    const Group& g = groups_.at(key);
    for (std::size_t f = 0; f < recs.size(); ++f) {
      double reward = 0.0;
      for (const auto& members : g.members) {
        for (std::size_t u : members) {
          if (fb.uavs[u].frames[f] == FrameOutcome::Success) reward += 1.0;
        }
      }
      Transition t;
      t.state = recs[f].features;
      t.action = recs[f].action;
      t.reward = reward;
      t.terminal = f + 1 == recs.size();
      if (!t.terminal) {
        t.next = recs[f + 1].features;
        t.nextValid = recs[f + 1].valid;
      } else {
        t.next = recs[f].features;
      }
      train(key, g, t);
    }
    recs.clear();
  }
  cycle_ = fb.cycle + 1;
}

DqnAllocation::DqnAllocation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed)
    : epsilon_{config.learning.dqnEpsilonStart, config.learning.dqnEpsilonEnd, horizon},
      rng_(policy_stream(seed, 6)) {
  const auto& lp = config.learning;
  params_.hidden = lp.dqnHidden;
  params_.bufferCapacity = static_cast<std::size_t>(lp.dqnBufferCapacity);
  params_.batchSize = lp.dqnBatchSize;
  params_.targetSync = lp.dqnTargetSync;
  params_.stepSize = lp.dqnStepSize;
  params_.discount = config.discount;
}

void DqnAllocation::onNewGroup(std::size_t key, const Group& g) {
  DqnState d(feature_count(g), g.space.size(), params_, rng_);
  if (pendingRestore_) {
    for (const auto& entry : pendingRestore_->at("groups")) {
      if (entry.at("key").get<std::size_t>() == key) {
        d = dqn_from_json(entry.at("dqn"));
        if (d.featureCount() != feature_count(g) || d.actionCount() != g.space.size()) {
          throw std::invalid_argument("DQN snapshot does not match the group layout");
        }
      }
    }
  }
  dqns_.insert_or_assign(key, std::move(d));
}

int DqnAllocation::choose(std::size_t key, const Group&, const Eigen::VectorXd& features,
                          const std::vector<int>& valid, std::int64_t cycle) {
  DqnState& d = dqns_.at(key);
  d.epsilon = epsilon_.at(cycle);
  return dqn_select(d, features, valid, rng_);
}

void DqnAllocation::train(std::size_t key, const Group&, const Transition& t) { dqn_step(dqns_.at(key), t, rng_); }

nlohmann::json DqnAllocation::snapshot() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [key, d] : dqns_) groups.push_back({{"key", key}, {"dqn", to_json(d)}});
  return {{"kind", "dqn-alloc"}, {"groups", groups}};
}

void DqnAllocation::restore(const nlohmann::json& j) {
  // Networks are rebuilt lazily once the group layout is known.
  pendingRestore_ = j;
  dqns_.clear();
  groups_.clear();
}

TabularAllocation::TabularAllocation(const ScenarioConfig& config, std::int64_t horizon, std::uint64_t seed)
    : params_(q_params(config)),
      epsilon_{config.learning.dqnEpsilonStart, config.learning.dqnEpsilonEnd, horizon},
      rng_(policy_stream(seed, 7)) {}

TabularAllocation::Key TabularAllocation::key_of(const Eigen::VectorXd& features) {
  Key k;
  for (Eigen::Index n = 0; n < features.size(); ++n) k.push_back(std::llround(features(n) * 1e6));
  return k;
}

void TabularAllocation::onNewGroup(std::size_t key, const Group&) {
  tables_.insert_or_assign(key, SparseQTable<Key, int>(params_));
  visited_[key];
}

int TabularAllocation::choose(std::size_t key, const Group&, const Eigen::VectorXd& features,
                              const std::vector<int>& valid, std::int64_t cycle) {
  const Key k = key_of(features);
  visited_[key].insert_or_assign(k, Visited{features, valid});
  return q_select<Key, int>(tables_.at(key), k, valid, epsilon_.at(cycle), rng_);
}

void TabularAllocation::train(std::size_t key, const Group&, const Transition& t) {
  std::vector<int> next;
  if (!t.terminal) next = t.nextValid;
  q_update<Key, int>(tables_.at(key), key_of(t.state), t.action, t.reward, key_of(t.next), next);
}

}  // namespace uavsim
