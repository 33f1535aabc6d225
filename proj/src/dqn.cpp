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

#include "uavsim/agents/dqn.hpp"

#include "uavsim/agents/q_table.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace uavsim {

namespace {

/// Subsets of {0..n-1} of size <= k: empty first, then by size, then lexicographic.
std::vector<std::vector<int>> bounded_subsets(int n, int k) {
  std::vector<std::vector<int>> out{{}};
  for (int size = 1; size <= std::min(n, k); ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int s = 0; s < size; ++s) pick[static_cast<std::size_t>(s)] = s;
    while (true) {
      out.push_back(pick);
      int pos = size - 1;
      while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++pick[static_cast<std::size_t>(pos)];
      for (int s = pos + 1; s < size; ++s) pick[static_cast<std::size_t>(s)] = pick[static_cast<std::size_t>(s - 1)] + 1;
    }
  }
  return out;
}

}  // namespace

AllocationSpace::AllocationSpace(std::vector<int> uavsPerBs, std::vector<int> subchannelsPerBs)
    : subchannels_(std::move(subchannelsPerBs)) {
  if (uavsPerBs.size() != subchannels_.size()) throw std::invalid_argument("allocation space size mismatch");
  size_ = 1;
  for (std::size_t b = 0; b < uavsPerBs.size(); ++b) {
    options_.push_back(bounded_subsets(uavsPerBs[b], std::max(subchannels_[b], 0)));
    size_ *= static_cast<int>(options_.back().size());
  }
}

std::vector<std::vector<int>> AllocationSpace::decode(int action) const {
  if (action < 0 || action >= size_) throw std::out_of_range("allocation action index out of range");
  std::vector<std::vector<int>> out;
  for (const auto& opts : options_) {
    const int radix = static_cast<int>(opts.size());
    out.push_back(opts[static_cast<std::size_t>(action % radix)]);
    action /= radix;
  }
  return out;
}

std::vector<int> AllocationSpace::validActions(const std::vector<std::vector<bool>>& pending) const {
  if (pending.size() != options_.size()) throw std::invalid_argument("pending flags do not match the BS count");
  // Admissible option indices per BS.
  std::vector<std::vector<int>> perBs(options_.size());
  for (std::size_t b = 0; b < options_.size(); ++b) {
    const int pendingCount = static_cast<int>(std::count(pending[b].begin(), pending[b].end(), true));
    const int want = std::min(std::max(subchannels_[b], 0), pendingCount);
    for (std::size_t o = 0; o < options_[b].size(); ++o) {
      const auto& subset = options_[b][o];
      const int sz = static_cast<int>(subset.size());
      if (sz != 0 && sz != want) continue;
      const bool allPending = std::all_of(subset.begin(), subset.end(), [&](int m) {
        return static_cast<std::size_t>(m) < pending[b].size() && pending[b][static_cast<std::size_t>(m)];
      });
      if (allPending) perBs[b].push_back(static_cast<int>(o));
    }
  }
  std::vector<int> actions{0};
  int stride = 1;
  for (std::size_t b = 0; b < options_.size(); ++b) {
    std::vector<int> next;
    for (int base : actions)
      for (int o : perBs[b]) next.push_back(base + o * stride);
    actions = std::move(next);
    stride *= static_cast<int>(options_[b].size());
  }
  std::sort(actions.begin(), actions.end());
  return actions;
}

DqnState::DqnState(int featureCount, int actionCount, const DqnParams& p, Rng& rng)
    : online({featureCount, p.hidden, p.hidden, actionCount}, rng),
      target(online),
      optimizer(online, p.stepSize),
      buffer(p.bufferCapacity),
      params(p) {}

int dqn_greedy(const Mlp<double>& net, const Eigen::VectorXd& features, const std::vector<int>& valid) {
  if (valid.empty()) throw std::invalid_argument("DQN selection over an empty action set");
  const Eigen::VectorXd out = net.forward(features);
  int best = valid.front();
  for (int a : valid) {
    if (a < 0 || a >= out.size()) throw std::out_of_range("DQN action outside the network output");
    if (out(a) > out(best) || (out(a) == out(best) && a < best)) best = a;
  }
  return best;
}

int dqn_select(const DqnState& d, const Eigen::VectorXd& features, const std::vector<int>& valid, Rng& rng) {
  if (features.size() != d.featureCount()) {
    throw std::invalid_argument("DQN feature length " + std::to_string(features.size()) + " != " +
                                std::to_string(d.featureCount()));
  }
  const int greedy = dqn_greedy(d.online, features, valid);
  const auto gi = static_cast<std::size_t>(std::find(valid.begin(), valid.end(), greedy) - valid.begin());
  return valid[epsilon_greedy_index(valid.size(), gi, d.epsilon, rng)];
}

void dqn_step(DqnState& d, Transition t, Rng& rng) {
  d.buffer.push(std::move(t));
  if (d.params.batchSize <= 0 || d.buffer.size() < static_cast<std::size_t>(d.params.batchSize)) return;

  const int batch = d.params.batchSize;
  const int nf = d.featureCount();
  Eigen::MatrixXd states(nf, batch);
  std::vector<const Transition*> picked;
  std::uniform_int_distribution<std::size_t> pick(0, d.buffer.size() - 1);
  for (int n = 0; n < batch; ++n) {
    const Transition& tr = d.buffer[pick(rng)];
    picked.push_back(&tr);
    states.col(n) = tr.state;
  }

  const Eigen::MatrixXd q = d.online.forward(states);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (int n = 0; n < batch; ++n) {
    const Transition& tr = *picked[static_cast<std::size_t>(n)];
    double y = tr.reward;
    if (!tr.terminal && !tr.nextValid.empty()) {
      const Eigen::VectorXd nq = d.target.forward(tr.next);
      double best = -std::numeric_limits<double>::infinity();
      for (int a : tr.nextValid) best = std::max(best, nq(a));
      y += d.params.discount * best;
    }
    // d/dQ of 0.5 * mean squared TD error.
    grad(tr.action, n) = (q(tr.action, n) - y) / batch;
  }
  d.optimizer.apply(d.online, d.online.backward(states, grad));

  ++d.steps;
  if (d.params.targetSync > 0 && d.steps % d.params.targetSync == 0) d.target = d.online;
}

nlohmann::json to_json(const DqnState& d) {
  return {{"online", d.online.toJson()},
          {"target", d.target.toJson()},
          {"hidden", d.params.hidden},
          {"buffer_capacity", d.params.bufferCapacity},
          {"batch_size", d.params.batchSize},
          {"target_sync", d.params.targetSync},
          {"step_size", d.params.stepSize},
          {"discount", d.params.discount},
          {"steps", d.steps},
          {"epsilon", d.epsilon}};
}

DqnState dqn_from_json(const nlohmann::json& j) {
  DqnState d;
  d.params.hidden = j.at("hidden").get<int>();
  d.params.bufferCapacity = j.at("buffer_capacity").get<std::size_t>();
  d.params.batchSize = j.at("batch_size").get<int>();
  d.params.targetSync = j.at("target_sync").get<int>();
  d.params.stepSize = j.at("step_size").get<double>();
  d.params.discount = j.at("discount").get<double>();
  d.online = Mlp<double>::fromJson(j.at("online"));
  d.target = Mlp<double>::fromJson(j.at("target"));
  d.optimizer = Adam<double>(d.online, d.params.stepSize);
  d.buffer = ReplayBuffer(d.params.bufferCapacity);
  d.steps = j.at("steps").get<std::int64_t>();
  d.epsilon = j.at("epsilon").get<double>();
  return d;
}

}  // namespace uavsim
