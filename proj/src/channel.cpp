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

#include "uavsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavsim {

void ChannelParams::validate() const {
  if (!(carrierHz > 0)) throw std::invalid_argument("channel.carrier_hz must be positive");
  if (etaNlosDb < etaLosDb) throw std::invalid_argument("channel.eta_nlos_db must be >= eta_los_db");
  if (shadowSigmaLosDb < 0 || shadowSigmaNlosDb < 0)
    throw std::invalid_argument("channel shadowing sigmas must be non-negative");
  if (txPowerMinDbm > txPowerMaxDbm)
    throw std::invalid_argument("channel.tx_power_min_dbm exceeds tx_power_max_dbm");
}

double LinkRealization::lossDb() const { return pathlossDb + shadowingDb; }

double elevation_angle_deg(const Position& uav, const Position& bs) {
  const double dz = uav.z() - bs.z();
  if (!(dz > 0)) {
    throw std::domain_error("UAV altitude " + std::to_string(uav.z()) +
                            " m is not above BS antenna height " + std::to_string(bs.z()) + " m");
  }
  const double ground = (uav.head<2>() - bs.head<2>()).norm();
  return std::atan2(dz, ground) * 180.0 / std::numbers::pi;
}

double los_probability(double thetaDeg, const ChannelParams& p) {
  return 1.0 / (1.0 + p.losA * std::exp(-p.losB * (thetaDeg - p.losA)));
}

double pathloss_db(double distance, bool los, const ChannelParams& p) {
  if (!(distance > 0)) throw std::domain_error("pathloss requires a positive distance");
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * p.carrierHz * distance / kSpeedOfLight);
  return fspl + (los ? p.etaLosDb : p.etaNlosDb);
}

LinkRealization realize_link(Rng& rng, const Position& uav, const Position& bs,
                             const ChannelParams& p) {
  const double theta = elevation_angle_deg(uav, bs);
  LinkRealization link;
  link.los = bernoulli(rng, los_probability(theta, p));
  const double sigma = link.los ? p.shadowSigmaLosDb : p.shadowSigmaNlosDb;
  // Always consume one normal draw so the stream layout does not depend on sigma.
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  link.shadowingDb = sigma * z;
  link.pathlossDb = pathloss_db((uav - bs).norm(), link.los, p);
  link.meanGainLinear = db_to_linear(-(link.pathlossDb + link.shadowingDb));
  return link;
}

LinkRealization mean_link(const Position& uav, const Position& bs, bool los,
                          const ChannelParams& p) {
  LinkRealization link;
  link.los = los;
  link.pathlossDb = pathloss_db((uav - bs).norm(), los, p);
  link.meanGainLinear = db_to_linear(-link.pathlossDb);
  return link;
}

double frame_success_prob_mw(const LinkRealization& link, double txPowerDbm,
                             double interferenceMw, const ChannelParams& p) {
  if (txPowerDbm < p.txPowerMinDbm || txPowerDbm > p.txPowerMaxDbm) {
    throw std::domain_error("transmit power " + std::to_string(txPowerDbm) +
                            " dBm outside [" + std::to_string(p.txPowerMinDbm) + ", " +
                            std::to_string(p.txPowerMaxDbm) + "]");
  }
  const double signal = db_to_linear(txPowerDbm) * link.meanGainLinear;
  const double noise = db_to_linear(p.noiseDbm) + interferenceMw;
  return std::exp(-db_to_linear(p.sinrThresholdDb) * noise / signal);
}

double frame_success_prob(const LinkRealization& link, double txPowerDbm,
                          std::optional<double> interferenceDbm, const ChannelParams& p) {
  const double interference = interferenceDbm ? db_to_linear(*interferenceDbm) : 0.0;
  return frame_success_prob_mw(link, txPowerDbm, interference, p);
}

}  // namespace uavsim
