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

#include "uavsim/agents/q_table.hpp"

#include <json.hpp>

#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace uavsim {

/// Per-state action counts of each opponent.
template <class State, class Action>
class OpponentStats {
 public:
  void observe(const State& s, int opponent, const Action& a) {
    auto& counts = stats_[s][opponent];
    ++counts.perAction[a];
    ++counts.total;
  }

  int count(const State& s, int opponent, const Action& a) const {
    const Counts* c = find(s, opponent);
    if (!c) return 0;
    auto it = c->perAction.find(a);
    return it == c->perAction.end() ? 0 : it->second;
  }

  int total(const State& s, int opponent) const {
    const Counts* c = find(s, opponent);
    return c ? c->total : 0;
  }

  /// Empirical frequency of `a`; uniform over `priorSize` actions before the
  /// first observation.
  double frequency(const State& s, int opponent, const Action& a, std::size_t priorSize) const {
    const Counts* c = find(s, opponent);
    if (!c || c->total == 0) return priorSize == 0 ? 0.0 : 1.0 / static_cast<double>(priorSize);
    auto it = c->perAction.find(a);
    return it == c->perAction.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(c->total);
  }

  nlohmann::json toJson() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [s, perOpp] : stats_)
      for (const auto& [opp, counts] : perOpp)
        for (const auto& [a, n] : counts.perAction) out.push_back({s, opp, a, n});
    return out;
  }

  static OpponentStats fromJson(const nlohmann::json& j) {
    OpponentStats st;
    for (const auto& e : j) {
      auto& counts = st.stats_[e.at(0).get<State>()][e.at(1).get<int>()];
      const int n = e.at(3).get<int>();
      counts.perAction[e.at(2).get<Action>()] += n;
      counts.total += n;
    }
    return st;
  }

 private:
  struct Counts {
    std::map<Action, int> perAction;
    int total = 0;
  };

  const Counts* find(const State& s, int opponent) const {
    auto it = stats_.find(s);
    if (it == stats_.end()) return nullptr;
    auto jt = it->second.find(opponent);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  std::map<State, std::map<int, Counts>> stats_;
};

/// Q-values over (state, own action, opponents' joint action). Only visited
/// entries are stored.
template <class State, class Action>
class JointQTable {
 public:
  using JointAction = std::vector<Action>;
  using Row = std::map<JointAction, typename SparseQTable<State, Action>::Entry>;

  JointQTable() = default;
  explicit JointQTable(QLearningParams params) : params_(params) {}

  const QLearningParams& params() const { return params_; }

  double value(const State& s, const Action& own, const JointAction& opp) const {
    const Row* r = row(s, own);
    if (!r) return 0.0;
    auto it = r->find(opp);
    return it == r->end() ? 0.0 : it->second.value;
  }

  typename SparseQTable<State, Action>::Entry& entry(const State& s, const Action& own, const JointAction& opp) {
    return table_[s][own][opp];
  }

  void set(const State& s, const Action& own, const JointAction& opp, double v) { entry(s, own, opp).value = v; }

  const Row* row(const State& s, const Action& own) const {
    auto it = table_.find(s);
    if (it == table_.end()) return nullptr;
    auto jt = it->second.find(own);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [s, byOwn] : table_)
      for (const auto& [a, r] : byOwn) n += r.size();
    return n;
  }

  nlohmann::json toJson() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [s, byOwn] : table_)
      for (const auto& [a, r] : byOwn)
        for (const auto& [opp, e] : r) entries.push_back({s, a, opp, e.value, e.visits});
    return {{"alpha", params_.alpha}, {"alpha_decay", params_.alphaDecay},
            {"discount", params_.discount}, {"entries", entries}};
  }

  static JointQTable fromJson(const nlohmann::json& j) {
    JointQTable t({j.at("alpha").get<double>(), j.at("alpha_decay").get<bool>(), j.at("discount").get<double>()});
    for (const auto& e : j.at("entries")) {
      auto& entry = t.entry(e.at(0).get<State>(), e.at(1).get<Action>(), e.at(2).get<JointAction>());
      entry.value = e.at(3).get<double>();
      entry.visits = e.at(4).get<int>();
    }
    return t;
  }

 private:
  QLearningParams params_;
  std::map<State, std::map<Action, Row>> table_;
};

/// An opponent as seen from one state: its id and the size of its action
/// set there (used for the uniform prior).
struct OpponentInfo {
  int id = 0;
  std::size_t actionCount = 1;
};

/// Expected Q of an own action with opponents drawn independently from their
/// empirical frequencies. Unvisited joint entries are zero, so only stored
/// entries contribute.
template <class State, class Action>
double om_expected_value(const JointQTable<State, Action>& q, const OpponentStats<State, Action>& stats,
                         const State& s, const Action& own, std::span<const OpponentInfo> opponents) {
  const auto* r = q.row(s, own);
  if (!r) return 0.0;
  double total = 0.0;
  for (const auto& [joint, e] : *r) {
    if (joint.size() != opponents.size()) throw std::logic_error("joint action arity does not match opponents");
    double w = 1.0;
    for (std::size_t o = 0; o < opponents.size() && w != 0.0; ++o) {
      w *= stats.frequency(s, opponents[o].id, joint[o], opponents[o].actionCount);
    }
    total += w * e.value;
  }
  return total;
}

/// Joint-action learner with opponent modeling. Selection maximizes the
/// expected Q under the opponents' empirical action frequencies.
template <class State, class Action>
class JointActionLearner {
 public:
  using JointAction = std::vector<Action>;

  JointActionLearner() = default;
  explicit JointActionLearner(QLearningParams params) : q_(params) {}

  double expectedValue(const State& s, const Action& own, std::span<const OpponentInfo> opponents) const {
    return om_expected_value(q_, stats_, s, own, opponents);
  }

  /// Best own action under the opponent model; ties go to the smallest action.
  Action greedy(const State& s, std::span<const Action> actions, std::span<const OpponentInfo> opponents) const {
    if (actions.empty()) throw std::invalid_argument("greedy selection over an empty action set");
    const Action* best = &actions.front();
    double bestValue = expectedValue(s, *best, opponents);
    for (const Action& a : actions.subspan(1)) {
      const double v = expectedValue(s, a, opponents);
      if (v > bestValue || (v == bestValue && a < *best)) {
        best = &a;
        bestValue = v;
      }
    }
    return *best;
  }

  Action select(const State& s, std::span<const Action> actions, std::span<const OpponentInfo> opponents,
                double epsilon, Rng& rng) const {
    if (actions.empty()) throw std::invalid_argument("selection over an empty action set");
    const Action g = greedy(s, actions, opponents);
    const auto gi = static_cast<std::size_t>(std::find(actions.begin(), actions.end(), g) - actions.begin());
    return actions[epsilon_greedy_index(actions.size(), gi, epsilon, rng)];
  }

  double maxExpectedValue(const State& s, std::span<const Action> actions,
                          std::span<const OpponentInfo> opponents) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Action& a : actions) best = std::max(best, expectedValue(s, a, opponents));
    return best;
  }

  /// Records the opponents' actions at s, then
  ///   Q(s,own,opp) <- (1-alpha) Q + alpha (reward + gamma max_a' E[Q(s',a')]).
  /// Empty `nextActions` marks a terminal transition.
  void update(const State& s, const Action& own, const JointAction& opp, std::span<const OpponentInfo> opponents,
              double reward, const State& next, std::span<const Action> nextActions,
              std::span<const OpponentInfo> nextOpponents) {
    if (opp.size() != opponents.size()) throw std::invalid_argument("opponent action count mismatch");
    for (std::size_t o = 0; o < opp.size(); ++o) stats_.observe(s, opponents[o].id, opp[o]);
    const double bootstrap = nextActions.empty() ? 0.0 : maxExpectedValue(next, nextActions, nextOpponents);
    auto& e = q_.entry(s, own, opp);
    ++e.visits;
    const double alpha = q_.params().rate(e.visits);
    e.value = (1.0 - alpha) * e.value + alpha * (reward + q_.params().discount * bootstrap);
  }

  const JointQTable<State, Action>& table() const { return q_; }
  JointQTable<State, Action>& table() { return q_; }
  const OpponentStats<State, Action>& stats() const { return stats_; }
  OpponentStats<State, Action>& stats() { return stats_; }

  nlohmann::json toJson() const { return {{"q", q_.toJson()}, {"stats", stats_.toJson()}}; }

  static JointActionLearner fromJson(const nlohmann::json& j) {
    JointActionLearner l;
    l.q_ = JointQTable<State, Action>::fromJson(j.at("q"));
    l.stats_ = OpponentStats<State, Action>::fromJson(j.at("stats"));
    return l;
  }

 private:
  JointQTable<State, Action> q_;
  OpponentStats<State, Action> stats_;
};

}  // namespace uavsim
