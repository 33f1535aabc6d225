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

#include "uavsim/types.hpp"
#include "uavsim/world.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>

namespace uavsim {

inline void to_json(nlohmann::json& j, const LatticeIndex& idx) { j = {idx.i, idx.j, idx.k}; }
inline void from_json(const nlohmann::json& j, LatticeIndex& idx) {
  idx = {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

inline void to_json(nlohmann::json& j, const Move& m) { j = {m.di, m.dj, m.dk}; }
inline void from_json(const nlohmann::json& j, Move& m) {
  m = {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

/// Exponential interpolation from `start` at t = 0 to `end` at t = horizon,
/// constant afterwards. Falls back to linear interpolation when either
/// endpoint is zero.
struct ExponentialSchedule {
  double start = 0.0;
  double end = 0.0;
  std::int64_t horizon = 1;

  double at(std::int64_t t) const {
    if (horizon <= 0 || t >= horizon) return end;
    if (t <= 0) return start;
    const double frac = static_cast<double>(t) / static_cast<double>(horizon);
    if (start > 0 && end > 0) return start * std::pow(end / start, frac);
    return start + (end - start) * frac;
  }
};

/// Learning-rate and discount settings of a tabular learner.
struct QLearningParams {
  double alpha = 0.1;
  bool alphaDecay = true;
  double discount = 0.9;

  double rate(int visits) const {
    return alphaDecay ? alpha / std::sqrt(static_cast<double>(std::max(visits, 1))) : alpha;
  }
};

/// Q-table storing only visited (state, action) pairs; everything else reads 0.
template <class State, class Action>
class SparseQTable {
 public:
  struct Entry {
    double value = 0.0;
    int visits = 0;
  };

  SparseQTable() = default;
  explicit SparseQTable(QLearningParams params) : params_(params) {}

  const QLearningParams& params() const { return params_; }

  double value(const State& s, const Action& a) const {
    auto it = table_.find({s, a});
    return it == table_.end() ? 0.0 : it->second.value;
  }

  int visits(const State& s, const Action& a) const {
    auto it = table_.find({s, a});
    return it == table_.end() ? 0 : it->second.visits;
  }

  void set(const State& s, const Action& a, double v) { table_[{s, a}].value = v; }

  Entry& entry(const State& s, const Action& a) { return table_[{s, a}]; }

  std::size_t size() const { return table_.size(); }

  /// Highest-valued action; ties go to the smallest action.
  Action greedy(const State& s, std::span<const Action> actions) const {
    if (actions.empty()) throw std::invalid_argument("greedy selection over an empty action set");
    const Action* best = &actions.front();
    double bestValue = value(s, *best);
    for (const Action& a : actions.subspan(1)) {
      const double v = value(s, a);
      if (v > bestValue || (v == bestValue && a < *best)) {
        best = &a;
        bestValue = v;
      }
    }
    return *best;
  }

  double maxValue(const State& s, std::span<const Action> actions) const {
    if (actions.empty()) throw std::invalid_argument("max over an empty action set");
    double best = value(s, actions.front());
    for (const Action& a : actions.subspan(1)) best = std::max(best, value(s, a));
    return best;
  }

  nlohmann::json toJson() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, e] : table_) entries.push_back({key.first, key.second, e.value, e.visits});
    return {{"alpha", params_.alpha}, {"alpha_decay", params_.alphaDecay},
            {"discount", params_.discount}, {"entries", entries}};
  }

  static SparseQTable fromJson(const nlohmann::json& j) {
    SparseQTable t({j.at("alpha").get<double>(), j.at("alpha_decay").get<bool>(), j.at("discount").get<double>()});
    for (const auto& e : j.at("entries")) {
      auto& entry = t.table_[{e.at(0).get<State>(), e.at(1).get<Action>()}];
      entry.value = e.at(2).get<double>();
      entry.visits = e.at(3).get<int>();
    }
    return t;
  }

 private:
  QLearningParams params_;
  std::map<std::pair<State, Action>, Entry> table_;
};

/// Index chosen by epsilon-greedy: uniform with probability epsilon, else `greedyIndex`.
inline std::size_t epsilon_greedy_index(std::size_t count, std::size_t greedyIndex, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
  }
  return greedyIndex;
}

template <class State, class Action>
Action q_select(const SparseQTable<State, Action>& q, const State& s, std::span<const Action> actions,
                double epsilon, Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("q_select over an empty action set");
  const Action greedy = q.greedy(s, actions);
  const auto gi = static_cast<std::size_t>(std::find(actions.begin(), actions.end(), greedy) - actions.begin());
  return actions[epsilon_greedy_index(actions.size(), gi, epsilon, rng)];
}

/// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')).
/// An empty `nextActions` marks a terminal transition.
template <class State, class Action>
void q_update(SparseQTable<State, Action>& q, const State& s, const Action& a, double reward, const State& next,
              std::span<const Action> nextActions) {
  const double bootstrap = nextActions.empty() ? 0.0 : q.maxValue(next, nextActions);
  auto& e = q.entry(s, a);
  ++e.visits;
  const double alpha = q.params().rate(e.visits);
  e.value = (1.0 - alpha) * e.value + alpha * (reward + q.params().discount * bootstrap);
}

}  // namespace uavsim
