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

#include <Eigen/Core>
#include <json.hpp>

namespace uavsim {

/// One-step actor-critic over a continuous transmit power.
///
/// Actor: Gaussian with mean pMin + (pMax - pMin) * sigmoid(theta . phi) and
/// a scheduled standard deviation; samples are clipped to [pMin, pMax].
/// Critic: linear state value V(phi) = w . phi.
struct ActorCriticState {
  Eigen::VectorXd actor;
  Eigen::VectorXd critic;
  double stddev = 3.0;
  double actorStep = 0.01;
  double criticStep = 0.05;
  double discount = 0.9;
  double pMinDbm = 0.0;
  double pMaxDbm = 23.0;

  ActorCriticState() = default;
  ActorCriticState(int featureCount, double pMin, double pMax);

  double mean(const Eigen::VectorXd& features) const;
  double value(const Eigen::VectorXd& features) const;
};

double ac_select_power(const ActorCriticState& acs, const Eigen::VectorXd& features, Rng& rng);

/// log N(action; mean(features), stddev^2).
double ac_log_density(const ActorCriticState& acs, const Eigen::VectorXd& features, double action);

/// Gradient of ac_log_density with respect to the actor parameters.
Eigen::VectorXd ac_log_density_grad(const ActorCriticState& acs, const Eigen::VectorXd& features, double action);

/// TD(0) critic step followed by a policy-gradient actor step scaled by the
/// same TD error. Returns the TD error.
double ac_update(ActorCriticState& acs, const Eigen::VectorXd& features, double action, double reward,
                 const Eigen::VectorXd& nextFeatures, bool terminal);

nlohmann::json to_json(const ActorCriticState& acs);
ActorCriticState actor_critic_from_json(const nlohmann::json& j);

}  // namespace uavsim
