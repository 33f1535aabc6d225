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

#include "uavsim/oracle.hpp"

#include "uavsim/protocol.hpp"
#include "uavsim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uavsim {

namespace {

/// UAVs the top-probability rule serves when `mask` is the pending set.
std::vector<int> served(const DeliveryQuery& query, unsigned mask) {
  std::vector<std::pair<int, double>> pending;
  for (std::size_t i = 0; i < query.q.size(); ++i) {
    if (mask & (1u << i)) pending.emplace_back(static_cast<int>(i), query.q[i]);
  }
  return allocate_max_success(pending, query.subchannels);
}

}  // namespace

void DeliveryQuery::validate() const {
  if (frames < 1) throw std::invalid_argument("delivery query needs at least one frame");
  if (subchannels < 0) throw std::invalid_argument("delivery query has a negative subchannel count");
  if (q.size() != sensingProb.size()) throw std::invalid_argument("delivery query q/sensing size mismatch");
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("delivery query q outside [0, 1]");
  for (double v : sensingProb)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("delivery query sensing probability outside [0, 1]");
}

DeliveryQuery make_delivery_query(const std::vector<Position>& uavPositions,
                                  const std::vector<Position>& targetPositions, double sensingLambda,
                                  std::vector<double> q, int frames, int subchannels) {
  if (uavPositions.size() != targetPositions.size() || uavPositions.size() != q.size()) {
    throw std::invalid_argument("delivery query geometry size mismatch");
  }
  DeliveryQuery query;
  query.q = std::move(q);
  query.frames = frames;
  query.subchannels = subchannels;
  for (std::size_t i = 0; i < uavPositions.size(); ++i) {
    query.sensingProb.push_back(sensing_success_prob((uavPositions[i] - targetPositions[i]).norm(), sensingLambda));
  }
  return query;
}

std::vector<double> delivery_prob_dp(const DeliveryQuery& query) {
  query.validate();
  const std::size_t m = query.q.size();
  if (m > kMaxExactUavs) {
    throw std::invalid_argument("delivery_prob_dp handles at most " + std::to_string(kMaxExactUavs) +
                                " UAVs per cell; use delivery_prob_mc for " + std::to_string(m));
  }
  const unsigned full = (1u << m) - 1u;
  std::vector<double> dist(std::size_t{1} << m, 0.0), nextDist(dist.size());
  std::vector<double> delivered(m, 0.0);
  dist[full] = 1.0;

  for (int f = 0; f < query.frames; ++f) {
    std::fill(nextDist.begin(), nextDist.end(), 0.0);
    for (unsigned mask = 0; mask <= full; ++mask) {
      const double pm = dist[mask];
      if (pm == 0.0) continue;
      const std::vector<int> sel = served(query, mask);
      // Enumerate success/failure patterns of the served UAVs.
      const unsigned patterns = 1u << sel.size();
      for (unsigned pat = 0; pat < patterns; ++pat) {
        double p = pm;
        unsigned after = mask;
        for (std::size_t n = 0; n < sel.size(); ++n) {
          const double qi = query.q[static_cast<std::size_t>(sel[n])];
          if (pat & (1u << n)) {
            p *= qi;
            after &= ~(1u << sel[n]);
          } else {
            p *= 1.0 - qi;
          }
        }
        if (p == 0.0) continue;
        for (std::size_t n = 0; n < sel.size(); ++n) {
          if (pat & (1u << n)) delivered[static_cast<std::size_t>(sel[n])] += p;
        }
        nextDist[after] += p;
      }
    }
    dist.swap(nextDist);
  }

  for (std::size_t i = 0; i < m; ++i) delivered[i] = std::clamp(delivered[i] * query.sensingProb[i], 0.0, 1.0);
  return delivered;
}

DeliveryEstimate delivery_prob_mc(const DeliveryQuery& query, Rng& rng, std::int64_t samples) {
  query.validate();
  if (samples < 1) throw std::invalid_argument("delivery_prob_mc needs at least one sample");
  const std::size_t m = query.q.size();
  std::vector<std::int64_t> hits(m, 0);
  std::vector<std::uint8_t> pending(m);
  std::vector<std::pair<int, double>> candidates;
  candidates.reserve(m);

  for (std::int64_t s = 0; s < samples; ++s) {
    std::fill(pending.begin(), pending.end(), 1);
    std::vector<std::uint8_t> valid(m);
    for (std::size_t i = 0; i < m; ++i) valid[i] = bernoulli(rng, query.sensingProb[i]);
    for (int f = 0; f < query.frames; ++f) {
      candidates.clear();
      for (std::size_t i = 0; i < m; ++i)
        if (pending[i]) candidates.emplace_back(static_cast<int>(i), query.q[i]);
      if (candidates.empty()) break;
      for (int i : allocate_max_success(candidates, query.subchannels)) {
        const auto ui = static_cast<std::size_t>(i);
        if (bernoulli(rng, query.q[ui])) {
          pending[ui] = 0;
          if (valid[ui]) ++hits[ui];
        }
      }
    }
  }

  DeliveryEstimate est;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = static_cast<double>(hits[i]) / static_cast<double>(samples);
    est.probability.push_back(p);
    est.standardError.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(samples)));
  }
  return est;
}

ValueIterationResult value_iteration(const ExplicitMdp& mdp, double discount, double tolerance) {
  const int nS = mdp.states();
  const int nA = mdp.actions();
  if (nS == 0 || nA == 0) throw std::invalid_argument("value_iteration needs states and actions");
  if (!(discount >= 0.0 && discount < 1.0)) throw std::invalid_argument("value_iteration discount outside [0, 1)");
  if (!(tolerance > 0)) throw std::invalid_argument("value_iteration tolerance must be positive");
  if (static_cast<int>(mdp.transition.size()) != nA) throw std::invalid_argument("one transition matrix per action");
  for (int a = 0; a < nA; ++a) {
    const auto& t = mdp.transition[static_cast<std::size_t>(a)];
    if (t.rows() != nS || t.cols() != nS) throw std::invalid_argument("transition matrix has the wrong shape");
    for (int s = 0; s < nS; ++s) {
      if (!mdp.isAvailable(s, a)) continue;
      if ((t.row(s).array() < 0.0).any() || std::abs(t.row(s).sum() - 1.0) > 1e-9) {
        throw std::invalid_argument("transition row for state " + std::to_string(s) + ", action " +
                                    std::to_string(a) + " is not a probability distribution");
      }
    }
  }
  for (int s = 0; s < nS; ++s) {
    bool any = false;
    for (int a = 0; a < nA; ++a) any = any || mdp.isAvailable(s, a);
    if (!any) throw std::invalid_argument("state " + std::to_string(s) + " has no available action");
  }

  const double ninf = -std::numeric_limits<double>::infinity();
  ValueIterationResult result;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(nS, nA);
  for (int s = 0; s < nS; ++s)
    for (int a = 0; a < nA; ++a)
      if (!mdp.isAvailable(s, a)) q(s, a) = ninf;

  // Stop once the residual bounds the distance to the fixed point by tolerance.
  const double factor = discount > 0 ? discount / (1.0 - discount) : 0.0;
  for (int sweep = 0; sweep < 1000000; ++sweep) {
    const Eigen::VectorXd v = q.rowwise().maxCoeff();
    Eigen::MatrixXd next(nS, nA);
    double delta = 0.0;
    for (int a = 0; a < nA; ++a) {
      const Eigen::VectorXd col = mdp.reward.col(a) + discount * mdp.transition[static_cast<std::size_t>(a)] * v;
      for (int s = 0; s < nS; ++s) {
        next(s, a) = mdp.isAvailable(s, a) ? col(s) : ninf;
        if (mdp.isAvailable(s, a)) delta = std::max(delta, std::abs(next(s, a) - q(s, a)));
      }
    }
    q.swap(next);
    result.sweepDeltas.push_back(delta);
    if (delta * factor <= tolerance && delta <= tolerance) break;
  }
  result.q = std::move(q);
  return result;
}

std::vector<int> greedy_policy(const Eigen::MatrixXd& q) {
  std::vector<int> policy(static_cast<std::size_t>(q.rows()));
  for (int s = 0; s < q.rows(); ++s) {
    int best = 0;
    for (int a = 1; a < q.cols(); ++a)
      if (q(s, a) > q(s, best)) best = a;
    policy[static_cast<std::size_t>(s)] = best;
  }
  return policy;
}

}  // namespace uavsim
