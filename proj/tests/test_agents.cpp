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

#include "uavsim/agents/actor_critic.hpp"
#include "uavsim/agents/bandit.hpp"
#include "uavsim/agents/dqn.hpp"
#include "uavsim/agents/mlp.hpp"
#include "uavsim/agents/opponent.hpp"
#include "uavsim/agents/q_table.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

namespace uavsim {
namespace {

// ---------------------------------------------------------------------------
// Bandit

TEST(Bandit, GreedyPicksBestEstimate) {
  BanditState b({1, 2, 3}, 0.0);
  b.estimate = {0.8, 0.3, 0.5};
  Rng rng(1);
  for (int n = 0; n < 50; ++n) EXPECT_EQ(bandit_select(b, rng), 1);
  b.estimate = {0.4, 0.4, 0.1};
  for (int n = 0; n < 50; ++n) EXPECT_EQ(bandit_select(b, rng), 1);
}

TEST(Bandit, FullExplorationIsUniform) {
  BanditState b({4, 5, 6}, 1.0);
  b.estimate = {1.0, 0.0, 0.0};
  Rng rng(2);
  std::map<int, int> hits;
  const int n = 90000;
  for (int k = 0; k < n; ++k) ++hits[bandit_select(b, rng)];
  for (int arm : {4, 5, 6}) EXPECT_NEAR(hits[arm] / static_cast<double>(n), 1.0 / 3.0, 0.01);
}

TEST(Bandit, RunningMean) {
  BanditState b({1, 2});
  bandit_update(b, 2, 1);
  bandit_update(b, 2, 0);
  bandit_update(b, 2, 1);
  EXPECT_DOUBLE_EQ(b.estimate[1], 2.0 / 3.0);
  EXPECT_EQ(b.count[1], 3);
  EXPECT_EQ(b.count[0], 0);
  EXPECT_THROW(bandit_update(b, 9, 1), std::invalid_argument);
  EXPECT_THROW(bandit_update(b, 1, 2), std::invalid_argument);
  Rng rng(3);
  EXPECT_THROW(bandit_select(BanditState{}, rng), std::invalid_argument);
}

TEST(Bandit, JsonRoundTrip) {
  BanditState b({3, 7}, 0.2);
  bandit_update(b, 7, 1);
  const BanditState c = bandit_from_json(to_json(b));
  EXPECT_EQ(c.arms, b.arms);
  EXPECT_EQ(c.estimate, b.estimate);
  EXPECT_EQ(c.count, b.count);
  EXPECT_DOUBLE_EQ(c.epsilon, b.epsilon);
  auto bad = to_json(b);
  bad["count"] = {1};
  EXPECT_THROW(bandit_from_json(bad), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Schedules and tabular Q

TEST(Schedule, ExponentialAndLinear) {
  const ExponentialSchedule e{0.5, 0.01, 100};
  EXPECT_DOUBLE_EQ(e.at(0), 0.5);
  EXPECT_DOUBLE_EQ(e.at(100), 0.01);
  EXPECT_DOUBLE_EQ(e.at(1000), 0.01);
  EXPECT_NEAR(e.at(50), std::sqrt(0.5 * 0.01), 1e-12);
  const ExponentialSchedule lin{1.0, 0.0, 10};
  EXPECT_DOUBLE_EQ(lin.at(5), 0.5);
  EXPECT_DOUBLE_EQ(lin.at(-3), 1.0);
}

TEST(QTable, FreshUpdate) {
  SparseQTable<int, int> q;
  const std::vector<int> next{0, 1};
  q_update<int, int>(q, 0, 1, 1.0, 1, next);
  EXPECT_DOUBLE_EQ(q.value(0, 1), 0.1);
  EXPECT_EQ(q.visits(0, 1), 1);
  q_update<int, int>(q, 0, 0, 0.0, 1, next);
  EXPECT_DOUBLE_EQ(q.value(0, 0), 0.0);
}

TEST(QTable, BootstrapAndDecay) {
  SparseQTable<int, int> q({0.5, true, 0.9});
  q.set(1, 0, 2.0);
  const std::vector<int> next{0, 1};
  q_update<int, int>(q, 0, 0, 1.0, 1, next);
  EXPECT_DOUBLE_EQ(q.value(0, 0), 0.5 * (1.0 + 0.9 * 2.0));
  q_update<int, int>(q, 0, 0, 1.0, 1, next);
  const double a2 = 0.5 / std::sqrt(2.0);
  EXPECT_NEAR(q.value(0, 0), (1 - a2) * 1.4 + a2 * 2.8, 1e-12);
  // Terminal: no bootstrap.
  q_update<int, int>(q, 5, 0, 1.0, 1, std::span<const int>{});
  EXPECT_DOUBLE_EQ(q.value(5, 0), 0.5);
}

TEST(QTable, GreedyTiesToSmallestAndEmptyThrows) {
  SparseQTable<int, int> q;
  const std::vector<int> acts{3, 1, 2};
  EXPECT_EQ(q.greedy(0, acts), 1);
  q.set(0, 2, 0.5);
  EXPECT_EQ(q.greedy(0, acts), 2);
  EXPECT_THROW(q.greedy(0, std::span<const int>{}), std::invalid_argument);
  Rng rng(1);
  EXPECT_THROW((q_select<int, int>(q, 0, std::span<const int>{}, 0.1, rng)), std::invalid_argument);
}

TEST(QTable, EpsilonGreedyFrequencies) {
  SparseQTable<int, int> q;
  q.set(0, 2, 1.0);
  const std::vector<int> acts{0, 1, 2, 3};
  Rng rng(7);
  std::map<int, int> hits;
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++hits[q_select<int, int>(q, 0, acts, 0.4, rng)];
  EXPECT_NEAR(hits[2] / static_cast<double>(n), 0.6 + 0.4 / 4, 0.01);
  EXPECT_NEAR(hits[0] / static_cast<double>(n), 0.1, 0.01);
}

// ---------------------------------------------------------------------------
// Opponent modeling

TEST(OpponentStats, FrequenciesAndPrior) {
  OpponentStats<int, int> st;
  EXPECT_DOUBLE_EQ(st.frequency(0, 7, 1, 4), 0.25);
  st.observe(0, 7, 1);
  st.observe(0, 7, 1);
  st.observe(0, 7, 2);
  EXPECT_DOUBLE_EQ(st.frequency(0, 7, 1, 4), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(st.frequency(0, 7, 2, 4), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(st.frequency(0, 7, 3, 4), 0.0);
  EXPECT_EQ(st.total(0, 7), 3);
  const auto back = OpponentStats<int, int>::fromJson(st.toJson());
  EXPECT_EQ(back.count(0, 7, 1), 2);
  EXPECT_EQ(back.total(0, 7), 3);
}

TEST(OpponentModel, ExpectedValueSingleOpponent) {
  JointQTable<int, int> q;
  OpponentStats<int, int> st;
  q.set(0, 1, {10}, 6.0);
  q.set(0, 1, {11}, 9.0);
  st.observe(0, 5, 10);
  st.observe(0, 5, 10);
  st.observe(0, 5, 11);
  const std::vector<OpponentInfo> opp{{5, 2}};
  EXPECT_DOUBLE_EQ(om_expected_value(q, st, 0, 1, std::span<const OpponentInfo>(opp)), 7.0);
  // Before any observation the prior is uniform.
  OpponentStats<int, int> empty;
  EXPECT_DOUBLE_EQ(om_expected_value(q, empty, 0, 1, std::span<const OpponentInfo>(opp)), 7.5);
  EXPECT_DOUBLE_EQ(om_expected_value(q, st, 0, 2, std::span<const OpponentInfo>(opp)), 0.0);
}

TEST(OpponentModel, ProductOfMarginalsMatchesBruteForce) {
  Rng rng(9);
  std::uniform_real_distribution<double> val(-1, 1);
  std::uniform_int_distribution<int> act(0, 2);
  JointQTable<int, int> q;
  OpponentStats<int, int> st;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) q.set(0, 0, {a, b}, val(rng));
  for (int n = 0; n < 17; ++n) st.observe(0, 1, act(rng));
  for (int n = 0; n < 11; ++n) st.observe(0, 2, act(rng));
  const std::vector<OpponentInfo> opp{{1, 3}, {2, 3}};
  double brute = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      brute += st.frequency(0, 1, a, 3) * st.frequency(0, 2, b, 3) * q.value(0, 0, {a, b});
  EXPECT_NEAR(om_expected_value(q, st, 0, 0, std::span<const OpponentInfo>(opp)), brute, 1e-12);
}

TEST(OpponentModel, LearnerUpdateAndArityCheck) {
  JointActionLearner<int, int> l({0.1, true, 0.9});
  const std::vector<OpponentInfo> opp{{2, 2}};
  const std::vector<int> acts{0, 1};
  l.update(0, 1, {0}, opp, 1.0, 0, acts, opp);
  EXPECT_DOUBLE_EQ(l.table().value(0, 1, {0}), 0.1);
  EXPECT_EQ(l.stats().count(0, 2, 0), 1);
  EXPECT_EQ(l.greedy(0, acts, opp), 1);
  EXPECT_THROW(l.update(0, 1, {0, 1}, opp, 1.0, 0, acts, opp), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Actor-critic

ActorCriticState ac_fixture() {
  ActorCriticState a(3, 0.0, 23.0);
  a.actor << 0.3, -0.2, 0.5;
  a.critic << 0.1, 0.2, -0.1;
  return a;
}

TEST(ActorCritic, ZeroStddevReturnsMean) {
  auto a = ac_fixture();
  a.stddev = 0.0;
  const Eigen::Vector3d phi(1.0, 0.4, 0.7);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(ac_select_power(a, phi, rng), a.mean(phi));
  const double s = 1.0 / (1.0 + std::exp(-a.actor.dot(phi)));
  EXPECT_NEAR(a.mean(phi), 23.0 * s, 1e-12);
}

TEST(ActorCritic, SamplesAreClipped) {
  auto a = ac_fixture();
  a.actor << 20.0, 0.0, 0.0;
  a.stddev = 10.0;
  const Eigen::Vector3d phi(1.0, 0.0, 0.0);
  Rng rng(2);
  bool hitTop = false;
  for (int n = 0; n < 1000; ++n) {
    const double p = ac_select_power(a, phi, rng);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 23.0);
    hitTop = hitTop || p == 23.0;
  }
  EXPECT_TRUE(hitTop);
  EXPECT_THROW(ac_select_power(a, Eigen::Vector3d(1.0, NAN, 0.0), rng), std::invalid_argument);
}

TEST(ActorCritic, TerminalCriticStep) {
  ActorCriticState a(1, 0.0, 23.0);
  const Eigen::VectorXd phi = Eigen::VectorXd::Ones(1);
  const double delta = ac_update(a, phi, a.mean(phi), 1.0, phi, true);
  EXPECT_DOUBLE_EQ(delta, 1.0);
  EXPECT_DOUBLE_EQ(a.critic(0), 0.05);
  // The action sits at the mean, so the actor gradient vanishes.
  EXPECT_DOUBLE_EQ(a.actor(0), 0.0);
}

TEST(ActorCritic, TdErrorWithBootstrap) {
  auto a = ac_fixture();
  const Eigen::Vector3d phi(1.0, 0.4, 0.7), next(1.0, 0.1, 0.6);
  const double expected = 0.5 + a.discount * a.value(next) - a.value(phi);
  const auto before = a.critic;
  const double delta = ac_update(a, phi, 10.0, 0.5, next, false);
  EXPECT_NEAR(delta, expected, 1e-12);
  EXPECT_TRUE(a.critic.isApprox(before + a.criticStep * delta * phi));
}

TEST(ActorCritic, LogDensityGradientMatchesFiniteDifferences) {
  auto a = ac_fixture();
  const Eigen::Vector3d phi(1.0, 0.4, 0.7);
  const double action = 14.0;
  const Eigen::VectorXd g = ac_log_density_grad(a, phi, action);
  const double h = 1e-6;
  for (int i = 0; i < 3; ++i) {
    auto plus = a, minus = a;
    plus.actor(i) += h;
    minus.actor(i) -= h;
    const double fd = (ac_log_density(plus, phi, action) - ac_log_density(minus, phi, action)) / (2 * h);
    EXPECT_NEAR(g(i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
  const double sd = a.stddev;
  const double m = a.mean(phi);
  EXPECT_NEAR(ac_log_density(a, phi, action),
              -0.5 * std::log(2 * std::numbers::pi * sd * sd) - (action - m) * (action - m) / (2 * sd * sd), 1e-12);
}

TEST(ActorCritic, JsonRoundTrip) {
  const auto a = ac_fixture();
  const auto b = actor_critic_from_json(to_json(a));
  EXPECT_EQ(b.actor, a.actor);
  EXPECT_EQ(b.critic, a.critic);
  EXPECT_DOUBLE_EQ(b.stddev, a.stddev);
  EXPECT_DOUBLE_EQ(b.pMaxDbm, a.pMaxDbm);
}

// ---------------------------------------------------------------------------
// MLP and DQN

TEST(Mlp, GradientMatchesFiniteDifferences) {
  Rng rng(4);
  Mlp<double> net({3, 5, 4, 2}, rng);
  for (auto& b : net.biases()) b.setConstant(0.05);
  Eigen::MatrixXd x(3, 4);
  x << 0.3, -0.7, 1.2, 0.1, -0.4, 0.8, 0.5, -1.1, 0.9, 0.2, -0.3, 0.6;
  Eigen::MatrixXd w(2, 4);
  w << 1.0, -0.5, 0.3, 0.7, -1.2, 0.4, 0.9, -0.2;
  const auto loss = [&](const Mlp<double>& n) { return (n.forward(x).array() * w.array()).sum(); };
  const auto g = net.backward(x, w);
  const double h = 1e-6;
  for (std::size_t l = 0; l < net.layers(); ++l) {
    for (Eigen::Index r = 0; r < net.weights()[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.weights()[l].cols(); ++c) {
        auto p = net, m = net;
        p.weights()[l](r, c) += h;
        m.weights()[l](r, c) -= h;
        EXPECT_NEAR(g.weights[l](r, c), (loss(p) - loss(m)) / (2 * h), 1e-5);
      }
      auto p = net, m = net;
      p.biases()[l](r) += h;
      m.biases()[l](r) -= h;
      EXPECT_NEAR(g.biases[l](r), (loss(p) - loss(m)) / (2 * h), 1e-5);
    }
  }
  EXPECT_THROW(net.forward(Eigen::VectorXd(Eigen::VectorXd::Zero(2))), std::invalid_argument);
}

TEST(Mlp, JsonRoundTrip) {
  Rng rng(5);
  const Mlp<double> net({2, 3, 1}, rng);
  const auto back = Mlp<double>::fromJson(net.toJson());
  const Eigen::Vector2d x(0.3, -0.2);
  EXPECT_DOUBLE_EQ(back.forward(Eigen::VectorXd(x))(0), net.forward(Eigen::VectorXd(x))(0));
}

TEST(AllocationSpace, EnumerationAndValidActions) {
  const AllocationSpace one({3}, {2});
  EXPECT_EQ(one.size(), 7);  // {}, 3 singletons, 3 pairs
  EXPECT_TRUE(one.decode(0)[0].empty());
  EXPECT_EQ(one.decode(1)[0], (std::vector<int>{0}));
  EXPECT_EQ(one.decode(4)[0], (std::vector<int>{0, 1}));
  const auto valid = one.validActions({{true, true, true}});
  EXPECT_EQ(valid.size(), 4u);
  EXPECT_EQ(valid.front(), 0);
  EXPECT_EQ(one.validActions({{false, true, false}}), (std::vector<int>{0, 2}));
  EXPECT_THROW(one.decode(7), std::out_of_range);
  EXPECT_THROW(one.validActions({{true}, {true}}), std::invalid_argument);

  const AllocationSpace two({2, 1}, {1, 1});
  EXPECT_EQ(two.size(), 3 * 2);
  EXPECT_EQ(two.decode(1)[0], (std::vector<int>{0}));
  EXPECT_TRUE(two.decode(1)[1].empty());
  EXPECT_EQ(two.decode(3)[1], (std::vector<int>{0}));
  EXPECT_THROW(AllocationSpace({1, 2}, {1}), std::invalid_argument);
}

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer buf(2);
  for (int a = 0; a < 3; ++a) {
    Transition t;
    t.action = a;
    buf.push(t);
  }
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf[0].action, 1);
  EXPECT_EQ(buf[1].action, 2);
  ReplayBuffer none(0);
  none.push(Transition{});
  EXPECT_EQ(none.size(), 0u);
}

Transition toy_transition() {
  Transition t;
  t.state = Eigen::Vector2d(0.5, -0.3);
  t.action = 1;
  t.reward = 1.0;
  t.next = Eigen::Vector2d(0.1, 0.4);
  t.nextValid = {0, 1, 2};
  return t;
}

TEST(Dqn, ZeroStepLeavesNetworkUnchanged) {
  DqnParams p;
  p.hidden = 8;
  p.batchSize = 1;
  p.stepSize = 0.0;
  Rng rng(6);
  DqnState d(2, 3, p, rng);
  const auto before = d.online.toJson();
  for (int n = 0; n < 10; ++n) dqn_step(d, toy_transition(), rng);
  EXPECT_EQ(d.online.toJson(), before);
  EXPECT_EQ(d.steps, 10);
}

TEST(Dqn, RegressesTowardTerminalReward) {
  DqnParams p;
  p.hidden = 16;
  p.batchSize = 4;
  p.stepSize = 1e-2;
  Rng rng(7);
  DqnState d(2, 3, p, rng);
  Transition t = toy_transition();
  t.terminal = true;
  t.nextValid.clear();
  for (int n = 0; n < 2000; ++n) dqn_step(d, t, rng);
  EXPECT_NEAR(d.online.forward(Eigen::VectorXd(t.state))(1), 1.0, 0.02);
}

TEST(Dqn, TargetSyncCopiesOnline) {
  DqnParams p;
  p.hidden = 4;
  p.batchSize = 1;
  p.targetSync = 5;
  p.stepSize = 1e-2;
  Rng rng(8);
  DqnState d(2, 3, p, rng);
  for (int n = 0; n < 5; ++n) dqn_step(d, toy_transition(), rng);
  EXPECT_EQ(d.target.toJson(), d.online.toJson());
  dqn_step(d, toy_transition(), rng);
  EXPECT_NE(d.target.toJson(), d.online.toJson());
}

TEST(Dqn, GreedyRestrictedToValidActions) {
  Rng rng(9);
  Mlp<double> net({1, 3}, rng);
  net.weights()[0] << 0.0, 0.0, 0.0;
  net.biases()[0] << 1.0, 5.0, 5.0;
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  EXPECT_EQ(dqn_greedy(net, x, {0, 1, 2}), 1);
  EXPECT_EQ(dqn_greedy(net, x, {0, 2}), 2);
  EXPECT_THROW(dqn_greedy(net, x, {}), std::invalid_argument);
  EXPECT_THROW(dqn_greedy(net, x, {3}), std::out_of_range);
  EXPECT_THROW(dqn_greedy(net, Eigen::VectorXd::Zero(2), {0}), std::invalid_argument);
}

}  // namespace
}  // namespace uavsim
