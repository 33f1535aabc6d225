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

#include "uavsim/selftest.hpp"

#include "uavsim/agents/bandit.hpp"
#include "uavsim/agents/dqn.hpp"
#include "uavsim/agents/opponent.hpp"
#include "uavsim/agents/q_table.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace uavsim {

namespace {

double random_prob(Rng& rng) {
  const double u = uniform01(rng);
  if (u < 0.05) return 0.0;
  if (u < 0.10) return 1.0;
  return uniform01(rng);
}

CheckResult frequency_check(const std::string& name, std::int64_t hits, std::int64_t draws, double eps,
                            std::size_t actions) {
  const double expected = (1.0 - eps) + eps / static_cast<double>(actions);
  const double observed = static_cast<double>(hits) / static_cast<double>(draws);
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << "eps=" << eps << " |A|=" << actions << " observed " << observed
     << " expected " << expected;
  return {name, std::abs(observed - expected) <= 0.01, os.str()};
}

}  // namespace

DeliveryQuery random_query(Rng& rng, int maxUavs, int maxFrames) {
  DeliveryQuery q;
  const int m = std::uniform_int_distribution<int>(1, maxUavs)(rng);
  q.frames = std::uniform_int_distribution<int>(1, maxFrames)(rng);
  q.subchannels = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int i = 0; i < m; ++i) {
    q.q.push_back(random_prob(rng));
    q.sensingProb.push_back(random_prob(rng));
  }
  return q;
}

CheckResult check_dp_against_mc(const DeliveryDp& dp, int queries, std::int64_t samples, std::uint64_t seed) {
  Rng gen = make_stream(seed, 1);
  Rng mc = make_stream(seed, 2);
  int comparisons = 0;
  int worstQuery = -1;
  double worstZ = 0.0;
  bool ok = true;
  for (int n = 0; n < queries; ++n) {
    const DeliveryQuery query = random_query(gen);
    const auto exact = dp(query);
    const auto est = delivery_prob_mc(query, mc, samples);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      ++comparisons;
      const double p = exact[i];
      const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
      const double diff = std::abs(est.probability[i] - p);
      const double z = se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0);
      if (z > worstZ) {
        worstZ = z;
        worstQuery = n;
      }
      if (diff > 3.0 * se) ok = false;
    }
  }
  std::ostringstream os;
  os << queries << " queries, " << comparisons << " estimates, worst |z| = " << std::setprecision(3) << worstZ;
  if (worstQuery >= 0) os << " (query " << worstQuery << ")";
  return {"oracle: delivery DP matches Monte Carlo", ok, os.str()};
}

CheckResult check_value_iteration(std::uint64_t seed) {
  Rng rng = make_stream(seed, 3);
  bool ok = true;
  std::ostringstream os;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const int nS = std::uniform_int_distribution<int>(2, 8)(rng);
    const int nA = std::uniform_int_distribution<int>(1, 4)(rng);
    ExplicitMdp mdp;
    mdp.reward = Eigen::MatrixXd(nS, nA);
    for (int a = 0; a < nA; ++a) {
      Eigen::MatrixXd t(nS, nS);
      for (int s = 0; s < nS; ++s) {
        for (int s2 = 0; s2 < nS; ++s2) t(s, s2) = uniform01(rng);
        t.row(s) /= t.row(s).sum();
        mdp.reward(s, a) = uniform01(rng);
      }
      mdp.transition.push_back(t);
    }
    const double gamma = 0.9;
    const auto res = value_iteration(mdp, gamma, 1e-9);
    for (std::size_t k = 1; k < res.sweepDeltas.size(); ++k) {
      if (res.sweepDeltas[k] > res.sweepDeltas[k - 1] + 1e-12) {
        ok = false;
        os << "trial " << trial << ": sweep delta rose at sweep " << k << "; ";
      }
    }
    const Eigen::VectorXd v = res.q.rowwise().maxCoeff();
    double residual = 0.0;
    for (int a = 0; a < nA; ++a) {
      const Eigen::VectorXd backup = mdp.reward.col(a) + gamma * mdp.transition[static_cast<std::size_t>(a)] * v;
      residual = std::max(residual, (backup - res.q.col(a)).cwiseAbs().maxCoeff());
    }
    if (residual > 1e-8) {
      ok = false;
      os << "trial " << trial << ": Bellman residual " << residual << "; ";
    }
  }
  if (ok) os << "20 random MDPs: contraction and fixed point hold";
  return {"oracle: value iteration converges monotonically", ok, os.str()};
}

std::vector<CheckResult> check_epsilon_greedy(std::int64_t draws, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const double eps = 0.5;

  {
    Rng rng = make_stream(seed, 10);
    SparseQTable<int, int> q;
    const std::vector<int> actions{0, 1, 2, 3, 4};
    q.set(0, 3, 1.0);
    std::int64_t hits = 0;
    for (std::int64_t n = 0; n < draws; ++n) hits += q_select<int, int>(q, 0, actions, eps, rng) == 3;
    out.push_back(frequency_check("epsilon-greedy: q_select", hits, draws, eps, actions.size()));
  }
  {
    Rng rng = make_stream(seed, 11);
    JointActionLearner<int, int> l;
    const std::vector<int> actions{0, 1, 2};
    const std::vector<OpponentInfo> opp{{7, 2}};
    l.table().set(0, 2, {1}, 4.0);
    std::int64_t hits = 0;
    for (std::int64_t n = 0; n < draws; ++n) {
      hits += l.select(0, std::span<const int>(actions), std::span<const OpponentInfo>(opp), eps, rng) == 2;
    }
    out.push_back(frequency_check("epsilon-greedy: opponent-model select", hits, draws, eps, actions.size()));
  }
  {
    Rng rng = make_stream(seed, 12);
    BanditState b({1, 2, 3, 4}, eps);
    b.estimate = {0.1, 0.2, 0.9, 0.3};
    std::int64_t hits = 0;
    for (std::int64_t n = 0; n < draws; ++n) hits += bandit_select(b, rng) == 3;
    out.push_back(frequency_check("epsilon-greedy: bandit_select", hits, draws, eps, b.arms.size()));
  }
  {
    Rng rng = make_stream(seed, 13);
    DqnParams p;
    p.hidden = 8;
    DqnState d(3, 6, p, rng);
    d.epsilon = eps;
    // Output bias dominates so the greedy action is index 4.
    d.online.biases().back()(4) = 100.0;
    const std::vector<int> valid{0, 2, 4, 5};
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.1);
    std::int64_t hits = 0;
    for (std::int64_t n = 0; n < draws; ++n) hits += dqn_select(d, x, valid, rng) == 4;
    out.push_back(frequency_check("epsilon-greedy: dqn_select", hits, draws, eps, valid.size()));
  }
  return out;
}

bool run_selftest(const SelftestOptions& options, std::ostream& out) {
  std::vector<CheckResult> checks;
  checks.push_back(check_dp_against_mc(options.dp, options.queries, options.samples, options.seed));
  checks.push_back(check_value_iteration(options.seed));
  for (auto& c : check_epsilon_greedy(100000, options.seed)) checks.push_back(std::move(c));
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all;
}

}  // namespace uavsim
