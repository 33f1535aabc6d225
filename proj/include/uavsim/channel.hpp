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

#include <cmath>
#include <optional>

namespace uavsim {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Air-to-ground link parameters. Powers in dBm, gains and losses in dB.
struct ChannelParams {
  double carrierHz = 2e9;
  double etaLosDb = 1.0;
  double etaNlosDb = 20.0;
  double losA = 9.61;
  double losB = 0.16;
  double shadowSigmaLosDb = 4.0;
  double shadowSigmaNlosDb = 8.0;
  double noiseDbm = -96.0;
  double sinrThresholdDb = 5.0;
  double txPowerMinDbm = 0.0;
  double txPowerMaxDbm = 23.0;

  void validate() const;
};

/// Channel state of one UAV-BS link for one cycle. Fast fading is not part of
/// it; it is drawn independently per frame.
struct LinkRealization {
  bool los = false;
  double shadowingDb = 0.0;
  double pathlossDb = 0.0;  // deterministic part, excludes shadowing
  double meanGainLinear = 1.0;

  /// Total mean loss including shadowing.
  double lossDb() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double elevation_angle_deg(const Position& uav, const Position& bs);

double los_probability(double thetaDeg, const ChannelParams& p);

double pathloss_db(double distance, bool los, const ChannelParams& p);

LinkRealization realize_link(Rng& rng, const Position& uav, const Position& bs,
                             const ChannelParams& p);

/// Link with shadowing pinned to zero and a given LoS state.
LinkRealization mean_link(const Position& uav, const Position& bs, bool los,
                          const ChannelParams& p);

/// Probability that a single frame is decoded, with unit-mean exponential
/// fading power per frame:
///   q = exp(-sinr_th * (N + I) / (P * g))
/// Interference is the mean received interference power; nullopt means none.
double frame_success_prob(const LinkRealization& link, double txPowerDbm,
                          std::optional<double> interferenceDbm, const ChannelParams& p);

/// Same as above with interference given as a linear power in milliwatts.
double frame_success_prob_mw(const LinkRealization& link, double txPowerDbm,
                             double interferenceMw, const ChannelParams& p);

}  // namespace uavsim
