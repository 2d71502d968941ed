// Copyright 2026 The drivebehave Authors
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

#include <array>
#include <span>
#include <vector>

#include "drivebehave/centrality.hpp"

namespace drivebehave {

/// Three channels in (degree, closeness, eigenvector) order.
using Channels = std::array<double, 3>;

struct AgentCriteria {
  AgentId id = 0;
  std::vector<Channels> bie;  // |dJ/dt|
  std::vector<Channels> bfe;  // |d2J/dt2|
  std::vector<bool> mask;     // agent present at the timestep
};

struct BehaviorCriteria {
  std::vector<double> timestamps;
  std::vector<AgentCriteria> agents;
};

struct NormalizationRange {
  Channels min{};
  Channels max{};
};

struct NormalizedCriteria {
  BehaviorCriteria values;  // every entry in [0, 1]
  NormalizationRange bie_range;
  NormalizationRange bfe_range;
};

/// |first derivative| of one channel over runs of consecutive valid samples.
/// Central differences inside a run, one-sided at its ends; zero for invalid
/// samples and for runs shorter than two.
std::vector<double> derivative_magnitude(std::span<const double> values, const std::vector<bool>& mask, double dt);

/// |second derivative| of one channel. Runs shorter than three are zero; run
/// ends reuse the second difference of the adjacent interior point.
std::vector<double> second_derivative_magnitude(std::span<const double> values, const std::vector<bool>& mask,
                                                double dt);

/// Behavior intensity: per agent and channel, |dJ/dt|. `bfe` is left empty.
BehaviorCriteria bie(const CentralitySeries& series, double dt);
/// Behavior fluctuation: per agent and channel, |d2J/dt2|. `bie` is left empty.
BehaviorCriteria bfe(const CentralitySeries& series, double dt);
/// Both criteria in one structure.
BehaviorCriteria behavior_criteria(const CentralitySeries& series, double dt);

/// Per-channel min-max scaling over all valid (agent, timestep) entries of the
/// window. Constant channels map to zero; invalid entries stay zero.
NormalizedCriteria normalize(const BehaviorCriteria& criteria);

/// Mean of the three channels; the scalar fed to fuzzification.
double channel_mean(const Channels& channels);

}  // namespace drivebehave
