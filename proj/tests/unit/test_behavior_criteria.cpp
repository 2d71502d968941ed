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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "drivebehave/behavior_criteria.hpp"

namespace drivebehave {
namespace {

// One agent whose three channels all follow `f(t)`.
CentralitySeries series_of(const std::function<double(double)>& f, int steps, double dt,
                           std::vector<bool> present = {}) {
  if (present.empty()) present.assign(static_cast<std::size_t>(steps), true);
  CentralitySeries s;
  AgentCentrality a;
  a.id = 5;
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    s.timestamps.push_back(t);
    const double v = present[static_cast<std::size_t>(k)] ? f(t) : 0.0;
    a.values.push_back({v, v, v});
  }
  a.present = present;
  s.agents.push_back(a);
  return s;
}

TEST(Bie, ConstantSeriesIsZero) {
  const auto c = bie(series_of([](double) { return 3.0; }, 10, 0.2), 0.2);
  for (const auto& ch : c.agents[0].bie) EXPECT_EQ(ch, (Channels{0, 0, 0}));
  EXPECT_TRUE(c.agents[0].bfe.empty());
}

TEST(Bie, LinearSlope) {
  const auto c = bie(series_of([](double t) { return 1.0 + 2.0 * t; }, 10, 0.2), 0.2);
  for (std::size_t t = 1; t + 1 < 10; ++t) EXPECT_NEAR(c.agents[0].bie[t][1], 2.0, 1e-12);
}

TEST(Bie, DecreasingSeriesIsPositive) {
  const auto c = bie(series_of([](double t) { return 5.0 - 3.0 * t; }, 10, 0.2), 0.2);
  for (const auto& ch : c.agents[0].bie) EXPECT_NEAR(ch[0], 3.0, 1e-12);
}

TEST(Bie, TimeReversalReversesInterior) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<double> values(12);
  for (double& v : values) v = u(rng);
  std::vector<double> reversed(values.rbegin(), values.rend());
  const std::vector<bool> mask(12, true);
  const auto forward = derivative_magnitude(values, mask, 0.2);
  const auto backward = derivative_magnitude(reversed, mask, 0.2);
  for (std::size_t k = 1; k + 1 < 12; ++k) EXPECT_NEAR(forward[k], backward[11 - k], 1e-12);
}

TEST(Bie, RunsSplitAtGaps) {
  const std::vector<double> values{0, 1, 2, 0, 10, 20, 30};
  const std::vector<bool> mask{true, true, true, false, true, true, true};
  const auto d = derivative_magnitude(values, mask, 1.0);
  EXPECT_EQ(d[3], 0.0);
  EXPECT_NEAR(d[2], 1.0, 1e-12);
  EXPECT_NEAR(d[4], 10.0, 1e-12);
  const std::vector<bool> lonely{false, true, false, false, false, false, false};
  EXPECT_EQ(derivative_magnitude(values, lonely, 1.0)[1], 0.0);
}

TEST(Bfe, LinearSeriesIsZero) {
  const auto c = bfe(series_of([](double t) { return 4.0 * t - 1.0; }, 10, 0.1), 0.1);
  for (std::size_t t = 1; t + 1 < 10; ++t) EXPECT_NEAR(c.agents[0].bfe[t][2], 0.0, 1e-9);
}

TEST(Bfe, QuadraticSeries) {
  const auto c = bfe(series_of([](double t) { return t * t; }, 12, 0.1), 0.1);
  for (std::size_t t = 0; t < 12; ++t) EXPECT_NEAR(c.agents[0].bfe[t][0], 2.0, 1e-6);
  EXPECT_TRUE(c.agents[0].bie.empty());
}

TEST(Bfe, TwoSampleAgentIsZero) {
  std::vector<bool> present(8, false);
  present[3] = present[4] = true;
  const auto c = bfe(series_of([](double t) { return 7.0 * t * t; }, 8, 0.2, present), 0.2);
  for (const auto& ch : c.agents[0].bfe) EXPECT_EQ(ch, (Channels{0, 0, 0}));
}

TEST(Bfe, InvariantToAffineOffset) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> values(15), shifted(15);
  for (int k = 0; k < 15; ++k) {
    values[k] = u(rng);
    shifted[k] = values[k] + 3.0 - 1.7 * (0.2 * k);
  }
  const std::vector<bool> mask(15, true);
  const auto a = second_derivative_magnitude(values, mask, 0.2);
  const auto b = second_derivative_magnitude(shifted, mask, 0.2);
  for (int k = 0; k < 15; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

BehaviorCriteria single_channel(const std::vector<double>& values) {
  BehaviorCriteria c;
  AgentCriteria a;
  for (std::size_t k = 0; k < values.size(); ++k) {
    c.timestamps.push_back(0.2 * static_cast<double>(k));
    a.bie.push_back({values[k], 1.0, 0.0});
    a.bfe.push_back({values[k], values[k], values[k]});
    a.mask.push_back(true);
  }
  c.agents.push_back(a);
  return c;
}

TEST(Normalize, MinMaxEndpoints) {
  const auto n = normalize(single_channel({0.0, 5.0, 10.0}));
  EXPECT_EQ(n.values.agents[0].bie[0][0], 0.0);
  EXPECT_EQ(n.values.agents[0].bie[1][0], 0.5);
  EXPECT_EQ(n.values.agents[0].bie[2][0], 1.0);
  EXPECT_EQ(n.bie_range.max[0], 10.0);
}

TEST(Normalize, ConstantChannelMapsToZero) {
  const auto n = normalize(single_channel({0.0, 5.0, 10.0}));
  for (const auto& ch : n.values.agents[0].bie) {
    EXPECT_EQ(ch[1], 0.0);
    EXPECT_EQ(ch[2], 0.0);
  }
}

TEST(Normalize, RangeAndOrderPreserved) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  std::vector<double> values(50);
  for (double& v : values) v = u(rng);
  const auto n = normalize(single_channel(values));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = n.values.agents[0].bfe[i][0];
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[i] < values[j]) { EXPECT_LE(a, n.values.agents[0].bfe[j][0]); }
    }
  }
}

TEST(Normalize, IgnoresMaskedEntries) {
  BehaviorCriteria c = single_channel({1.0, 2.0, 3.0});
  c.agents[0].mask[2] = false;
  c.agents[0].bie[2] = {0.0, 0.0, 0.0};
  const auto n = normalize(c);
  EXPECT_EQ(n.values.agents[0].bie[1][0], 1.0);
  EXPECT_EQ(n.values.agents[0].bie[2][0], 0.0);
}

TEST(ChannelMean, AveragesThreeChannels) { EXPECT_DOUBLE_EQ(channel_mean({0.3, 0.6, 0.9}), 0.6); }

}  // namespace
}  // namespace drivebehave
