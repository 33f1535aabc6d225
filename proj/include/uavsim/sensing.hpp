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
#include <stdexcept>

namespace uavsim {

/// Probability that sensing a target at the given distance yields valid data.
inline double sensing_success_prob(double distance, double lambda) {
  if (distance < 0) throw std::domain_error("sensing distance must be non-negative");
  if (!(lambda > 0)) throw std::domain_error("sensing lambda must be positive");
  return std::exp(-lambda * distance);
}

/// Draws the validity flag. Only the BS ever sees it; see protocol.hpp.
inline bool sample_sensing(Rng& rng, double p) { return bernoulli(rng, p); }

}  // namespace uavsim
