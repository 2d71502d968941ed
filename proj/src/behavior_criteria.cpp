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

#include "drivebehave/behavior_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drivebehave/errors.hpp"

namespace drivebehave {

namespace {

// [begin, end) index ranges of consecutive valid samples.
std::vector<std::pair<std::size_t, std::size_t>> valid_runs(const std::vector<bool>& mask) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t k = 0;
  while (k < mask.size()) {
    if (!mask[k]) {
      ++k;
      continue;
    }
    const std::size_t begin = k;
    while (k < mask.size() && mask[k]) ++k;
    runs.emplace_back(begin, k);
  }
  return runs;
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("criteria: dt must be positive");
}

}  // namespace

std::vector<double> derivative_magnitude(std::span<const double> values, const std::vector<bool>& mask, double dt) {
  check_dt(dt);
  if (values.size() != mask.size()) throw InputError("criteria: values and mask lengths differ");
  std::vector<double> out(values.size(), 0.0);
  for (const auto& [begin, end] : valid_runs(mask)) {
    if (end - begin < 2) continue;
    for (std::size_t k = begin; k < end; ++k) {
      double d = 0.0;
      if (k == begin) {
        d = (values[k + 1] - values[k]) / dt;
      } else if (k == end - 1) {
        d = (values[k] - values[k - 1]) / dt;
      } else {
        d = (values[k + 1] - values[k - 1]) / (2.0 * dt);
      }
      out[k] = std::abs(d);
    }
  }
  return out;
}

std::vector<double> second_derivative_magnitude(std::span<const double> values, const std::vector<bool>& mask,
                                                double dt) {
  check_dt(dt);
  if (values.size() != mask.size()) throw InputError("criteria: values and mask lengths differ");
  std::vector<double> out(values.size(), 0.0);
  for (const auto& [begin, end] : valid_runs(mask)) {
    if (end - begin < 3) continue;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t c = std::clamp(k, begin + 1, end - 2);
      out[k] = std::abs((values[c + 1] - 2.0 * values[c] + values[c - 1]) / (dt * dt));
    }
  }
  return out;
}

namespace {

template <typename Derivative>
std::vector<Channels> per_channel(const AgentCentrality& agent, double dt, Derivative derivative) {
  const std::size_t steps = agent.values.size();
  std::vector<Channels> out(steps, Channels{});
  std::vector<double> channel(steps);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t t = 0; t < steps; ++t) channel[t] = agent.values[t][c];
    const std::vector<double> d = derivative(channel, agent.present, dt);
    for (std::size_t t = 0; t < steps; ++t) out[t][c] = d[t];
  }
  return out;
}

BehaviorCriteria build(const CentralitySeries& series, double dt, bool with_bie, bool with_bfe) {
  check_dt(dt);
  BehaviorCriteria criteria;
  criteria.timestamps = series.timestamps;
  criteria.agents.reserve(series.agents.size());
  for (const auto& agent : series.agents) {
    if (agent.values.size() != series.timestamps.size() || agent.present.size() != series.timestamps.size()) {
      throw InputError("criteria: centrality series lengths are inconsistent");
    }
    AgentCriteria out;
    out.id = agent.id;
    out.mask = agent.present;
    if (with_bie) {
      out.bie = per_channel(agent, dt, [](std::span<const double> v, const std::vector<bool>& m, double h) {
        return derivative_magnitude(v, m, h);
      });
    }
    if (with_bfe) {
      out.bfe = per_channel(agent, dt, [](std::span<const double> v, const std::vector<bool>& m, double h) {
        return second_derivative_magnitude(v, m, h);
      });
    }
    criteria.agents.push_back(std::move(out));
  }
  return criteria;
}

NormalizationRange channel_range(const BehaviorCriteria& criteria, bool use_bie) {
  NormalizationRange range;
  range.min.fill(std::numeric_limits<double>::infinity());
  range.max.fill(-std::numeric_limits<double>::infinity());
  for (const auto& agent : criteria.agents) {
    const auto& values = use_bie ? agent.bie : agent.bfe;
    for (std::size_t t = 0; t < values.size(); ++t) {
      if (!agent.mask[t]) continue;
      for (std::size_t c = 0; c < 3; ++c) {
        range.min[c] = std::min(range.min[c], values[t][c]);
        range.max[c] = std::max(range.max[c], values[t][c]);
      }
    }
  }
  for (std::size_t c = 0; c < 3; ++c) {
    if (!std::isfinite(range.min[c])) range.min[c] = range.max[c] = 0.0;
  }
  return range;
}

void rescale(std::vector<Channels>& values, const std::vector<bool>& mask, const NormalizationRange& range) {
  for (std::size_t t = 0; t < values.size(); ++t) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double span = range.max[c] - range.min[c];
      if (!mask[t] || !(span > 0.0)) {
        values[t][c] = 0.0;
        continue;
      }
      values[t][c] = std::clamp((values[t][c] - range.min[c]) / span, 0.0, 1.0);
    }
  }
}

}  // namespace

BehaviorCriteria bie(const CentralitySeries& series, double dt) { return build(series, dt, true, false); }

BehaviorCriteria bfe(const CentralitySeries& series, double dt) { return build(series, dt, false, true); }

BehaviorCriteria behavior_criteria(const CentralitySeries& series, double dt) {
  return build(series, dt, true, true);
}

NormalizedCriteria normalize(const BehaviorCriteria& criteria) {
  NormalizedCriteria out;
  out.values = criteria;
  out.bie_range = channel_range(criteria, true);
  out.bfe_range = channel_range(criteria, false);
  for (auto& agent : out.values.agents) {
    rescale(agent.bie, agent.mask, out.bie_range);
    rescale(agent.bfe, agent.mask, out.bfe_range);
  }
  return out;
}

double channel_mean(const Channels& channels) { return (channels[0] + channels[1] + channels[2]) / 3.0; }

}  // namespace drivebehave
