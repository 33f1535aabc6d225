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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uavsim {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ActorCriticState::ActorCriticState(int featureCount, double pMin, double pMax)
    : actor(Eigen::VectorXd::Zero(featureCount)),
      critic(Eigen::VectorXd::Zero(featureCount)),
      pMinDbm(pMin),
      pMaxDbm(pMax) {}

double ActorCriticState::mean(const Eigen::VectorXd& features) const {
  return pMinDbm + (pMaxDbm - pMinDbm) * sigmoid(actor.dot(features));
}

double ActorCriticState::value(const Eigen::VectorXd& features) const { return critic.dot(features); }

double ac_select_power(const ActorCriticState& acs, const Eigen::VectorXd& features, Rng& rng) {
  if (!features.allFinite()) throw std::invalid_argument("actor-critic features must be finite");
  const double mu = acs.mean(features);
  // One normal draw regardless of stddev keeps the stream aligned.
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  return std::clamp(mu + acs.stddev * z, acs.pMinDbm, acs.pMaxDbm);
}

double ac_log_density(const ActorCriticState& acs, const Eigen::VectorXd& features, double action) {
  const double s = acs.stddev;
  const double d = action - acs.mean(features);
  return -0.5 * d * d / (s * s) - std::log(s) - 0.5 * std::log(2.0 * std::numbers::pi);
}

Eigen::VectorXd ac_log_density_grad(const ActorCriticState& acs, const Eigen::VectorXd& features, double action) {
  const double s = acs.stddev;
  const double sg = sigmoid(acs.actor.dot(features));
  const double dMean = (acs.pMaxDbm - acs.pMinDbm) * sg * (1.0 - sg);
  return ((action - acs.mean(features)) / (s * s) * dMean) * features;
}

double ac_update(ActorCriticState& acs, const Eigen::VectorXd& features, double action, double reward,
                 const Eigen::VectorXd& nextFeatures, bool terminal) {
  const double next = terminal ? 0.0 : acs.value(nextFeatures);
  const double delta = reward + acs.discount * next - acs.value(features);
  // Actor gradient is taken before the critic moves.
  Eigen::VectorXd grad;
  if (acs.stddev > 0) grad = ac_log_density_grad(acs, features, action);
  acs.critic += acs.criticStep * delta * features;
  if (acs.stddev > 0) acs.actor += acs.actorStep * delta * grad;
  return delta;
}

nlohmann::json to_json(const ActorCriticState& acs) {
  return {{"actor", to_vec(acs.actor)},       {"critic", to_vec(acs.critic)},
          {"stddev", acs.stddev},             {"actor_step", acs.actorStep},
          {"critic_step", acs.criticStep},    {"discount", acs.discount},
          {"p_min_dbm", acs.pMinDbm},         {"p_max_dbm", acs.pMaxDbm}};
}

ActorCriticState actor_critic_from_json(const nlohmann::json& j) {
  ActorCriticState acs;
  acs.actor = from_vec(j.at("actor").get<std::vector<double>>());
  acs.critic = from_vec(j.at("critic").get<std::vector<double>>());
  acs.stddev = j.at("stddev").get<double>();
  acs.actorStep = j.at("actor_step").get<double>();
  acs.criticStep = j.at("critic_step").get<double>();
  acs.discount = j.at("discount").get<double>();
  acs.pMinDbm = j.at("p_min_dbm").get<double>();
  acs.pMaxDbm = j.at("p_max_dbm").get<double>();
  return acs;
}

}  // namespace uavsim
