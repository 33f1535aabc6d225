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

#include "uavsim/world.hpp"

namespace uavsim::testing {

/// One BS at the region center and `uavs` UAVs, each with its own target.
/// Deterministic links unless the caller restores shadowing.
inline ScenarioConfig small_config(int uavs = 3, int subchannels = 2) {
  ScenarioConfig c;
  c.lattice.radius = 200.0;
  c.lattice.hMin = 50.0;
  c.lattice.hMax = 150.0;
  c.lattice.spacing = 50.0;
  c.channel.shadowSigmaLosDb = 0.0;
  c.channel.shadowSigmaNlosDb = 0.0;
  c.channel.etaNlosDb = c.channel.etaLosDb;
  c.bss.push_back({1, Position(0.0, 0.0, 25.0), subchannels, 1});
  for (int n = 0; n < uavs; ++n) {
    c.targets.push_back({100 + n, Position(50.0 * n - 50.0, 100.0, 0.0)});
    c.uavs.push_back({n + 1, {n - 1, 0, 0}, 100 + n, 1e6, 1});
  }
  return c;
}

}  // namespace uavsim::testing
