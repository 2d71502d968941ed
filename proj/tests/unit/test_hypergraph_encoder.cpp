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

#include <random>

#include <gtest/gtest.h>

#include "drivebehave/errors.hpp"
#include "drivebehave/hypergraph_encoder.hpp"
#include "oracles.hpp"

namespace drivebehave {
namespace {

using testing::dense_hypergraph_conv;

std::vector<double> random_scores(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(static_cast<std::size_t>(n));
  for (double& x : s) x = u(rng);
  return s;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
  return m;
}

TEST(BehaviorHypergraph, OneNodePerLevel) {
  const std::vector<double> scores{0.1, 0.5, 0.9};
  const auto g = build_behavior_hypergraph(scores, LevelThresholds{});
  EXPECT_EQ(g.incidence, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(g.edge_degrees, Eigen::Vector3d::Ones());
  EXPECT_EQ(g.node_degrees, Eigen::Vector3d::Ones());
}

TEST(BehaviorHypergraph, SinglePopulatedEdge) {
  const std::vector<double> scores(4, 0.5);
  const auto g = build_behavior_hypergraph(scores, LevelThresholds{});
  EXPECT_EQ(g.incidence.col(1), Eigen::VectorXd::Ones(4));
  EXPECT_EQ(g.incidence.col(0).sum(), 0.0);
  EXPECT_EQ(g.incidence.col(2).sum(), 0.0);
}

TEST(BehaviorHypergraph, RowsPartitionNodes) {
  std::mt19937_64 rng(1);
  const LevelThresholds t;
  for (int trial = 0; trial < 200; ++trial) {
    const auto scores = random_scores(rng, 1 + trial % 20);
    const auto g = build_behavior_hypergraph(scores, t);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      EXPECT_EQ(g.incidence.row(row).sum(), 1.0);
      EXPECT_EQ(g.incidence(row, static_cast<Eigen::Index>(classify_level(scores[i], t))), 1.0);
    }
  }
}

TEST(BehaviorHypergraph, EmptyScoresGiveEmptyGraph) {
  const auto g = build_behavior_hypergraph({}, LevelThresholds{});
  EXPECT_EQ(g.incidence.rows(), 0);
  EXPECT_EQ(g.incidence.cols(), 3);
}

TEST(MakeHypergraph, RejectsBadInput) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(make_hypergraph(h, Eigen::Vector3d::Ones()), InputError);
  EXPECT_THROW(make_hypergraph(h, Eigen::Vector2d(1.0, -1.0)), InputError);
  h(0, 1) = 0.5;
  EXPECT_THROW(make_hypergraph(h, Eigen::Vector2d::Ones()), InputError);
}

BehaviorCriteria criteria_of(std::mt19937_64& rng, int agents, int steps) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BehaviorCriteria c;
  for (int t = 0; t < steps; ++t) c.timestamps.push_back(0.2 * t);
  for (int a = 0; a < agents; ++a) {
    AgentCriteria ac;
    ac.id = a;
    for (int t = 0; t < steps; ++t) {
      ac.bie.push_back({u(rng), u(rng), u(rng)});
      ac.bfe.push_back({u(rng), u(rng), u(rng)});
      ac.mask.push_back(u(rng) > 0.2);
    }
    c.agents.push_back(ac);
  }
  return c;
}

TEST(NodeFeatures, ZeroCriteriaGiveZeroFeatures) {
  std::mt19937_64 rng(2);
  BehaviorCriteria c = criteria_of(rng, 3, 4);
  for (auto& a : c.agents) {
    for (auto& ch : a.bie) ch = {0, 0, 0};
    for (auto& ch : a.bfe) ch = {0, 0, 0};
  }
  const auto f = node_features(c, EmbedParams::identity(stacked_width(4)));
  EXPECT_EQ(f.embedded, Eigen::MatrixXd::Zero(3, 24));
}

TEST(NodeFeatures, OneHotPassesThrough) {
  BehaviorCriteria c;
  c.timestamps = {0.0, 0.2};
  AgentCriteria a;
  a.bie = {{0, 0, 0}, {0, 1, 0}};
  a.bfe = {{0, 0, 0}, {0, 0, 0}};
  a.mask = {true, true};
  c.agents.push_back(a);
  const auto f = node_features(c, EmbedParams::identity(stacked_width(2)));
  Eigen::RowVectorXd expected = Eigen::RowVectorXd::Zero(12);
  expected(7) = 1.0;
  EXPECT_EQ(f.embedded.row(0), expected);
}

TEST(NodeFeatures, MatchesLoopOracle) {
  std::mt19937_64 rng(3);
  const BehaviorCriteria c = criteria_of(rng, 5, 6);
  const EmbedParams embed = EmbedParams::seeded(stacked_width(6), 7, 99);
  const auto f = node_features(c, embed);
  for (int a = 0; a < 5; ++a) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(36);
    for (int t = 0; t < 6; ++t) {
      if (!c.agents[a].mask[t]) continue;
      for (int k = 0; k < 3; ++k) {
        row(6 * t + k) = c.agents[a].bie[t][k];
        row(6 * t + 3 + k) = c.agents[a].bfe[t][k];
      }
    }
    EXPECT_LE((f.stacked.row(a).transpose() - row).cwiseAbs().maxCoeff(), 0.0);
    for (int o = 0; o < 7; ++o) {
      double v = embed.bias(o);
      for (int i = 0; i < 36; ++i) v += embed.weight(o, i) * row(i);
      EXPECT_NEAR(f.embedded(a, o), v, 1e-12);
    }
  }
}

TEST(NodeFeatures, ShapeMismatch) {
  std::mt19937_64 rng(4);
  EXPECT_THROW(node_features(criteria_of(rng, 2, 3), EmbedParams::identity(5)), InputError);
}

TEST(SpectralConv, IdentityIncidence) {
  std::mt19937_64 rng(5);
  const auto g = make_hypergraph(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Ones(4));
  const Eigen::MatrixXd x = random_matrix(rng, 4, 6);
  const Eigen::MatrixXd theta = random_matrix(rng, 6, 3);
  EXPECT_EQ(spectral_conv(g, x, theta), x * theta);
}

TEST(SpectralConv, TwoNodeSharedEdge) {
  const auto g = make_hypergraph(Eigen::Vector2d::Ones(), Eigen::VectorXd::Ones(1));
  const Eigen::MatrixXd out = spectral_conv(g, Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity());
  EXPECT_EQ(out, Eigen::Matrix2d::Constant(0.5));
}

TEST(SpectralConv, MatchesDenseProduct) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 12;
    const auto scores = random_scores(rng, n);
    const Eigen::Vector3d w(u(rng), u(rng), u(rng));
    const auto g = build_behavior_hypergraph(scores, LevelThresholds{}, w);
    const Eigen::MatrixXd x = random_matrix(rng, n, 5);
    const Eigen::MatrixXd theta = random_matrix(rng, 5, 4);
    const Eigen::MatrixXd expected = dense_hypergraph_conv(g.incidence, g.edge_weights, x, theta);
    EXPECT_LE((spectral_conv(g, x, theta) - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SpectralConv, NodeRelabellingPermutesRows) {
  std::mt19937_64 rng(7);
  const auto scores = random_scores(rng, 9);
  const Eigen::MatrixXd x = random_matrix(rng, 9, 4);
  const Eigen::MatrixXd theta = random_matrix(rng, 4, 3);
  const Eigen::MatrixXd out = spectral_conv(build_behavior_hypergraph(scores, LevelThresholds{}), x, theta);
  std::vector<int> perm{3, 0, 8, 1, 7, 2, 6, 4, 5};
  std::vector<double> permuted_scores;
  Eigen::MatrixXd px(9, 4);
  for (int i = 0; i < 9; ++i) {
    permuted_scores.push_back(scores[static_cast<std::size_t>(perm[i])]);
    px.row(i) = x.row(perm[i]);
  }
  const Eigen::MatrixXd pout =
      spectral_conv(build_behavior_hypergraph(permuted_scores, LevelThresholds{}), px, theta);
  for (int i = 0; i < 9; ++i) EXPECT_LE((pout.row(i) - out.row(perm[i])).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SpectralConv, InvariantToUniformEdgeWeightScale) {
  // With W = cI every node degree scales by c as well, and the two cancel.
  std::mt19937_64 rng(8);
  const auto scores = random_scores(rng, 7);
  const Eigen::MatrixXd x = random_matrix(rng, 7, 3);
  const Eigen::MatrixXd theta = random_matrix(rng, 3, 3);
  const auto g1 = build_behavior_hypergraph(scores, LevelThresholds{}, Eigen::Vector3d::Ones());
  const auto g3 = build_behavior_hypergraph(scores, LevelThresholds{}, Eigen::Vector3d::Constant(3.0));
  EXPECT_LE((spectral_conv(g3, x, theta) - spectral_conv(g1, x, theta)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SpectralConv, LinearSensitivityToTransform) {
  std::mt19937_64 rng(9);
  const auto g = build_behavior_hypergraph(random_scores(rng, 6), LevelThresholds{});
  const Eigen::MatrixXd x = random_matrix(rng, 6, 4);
  const Eigen::MatrixXd theta = random_matrix(rng, 4, 2);
  const Eigen::MatrixXd base = spectral_conv(g, x, theta);
  const Eigen::MatrixXd p = propagation_matrix(g);
  const double delta = 1e-3;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      Eigen::MatrixXd bumped = theta;
      bumped(r, c) += delta;
      Eigen::MatrixXd expected = base;
      expected.col(c) += delta * p * x.col(r);
      EXPECT_LE((spectral_conv(g, x, bumped) - expected).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(SpectralConv, ShapeMismatch) {
  const auto g = make_hypergraph(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(3));
  EXPECT_THROW(spectral_conv(g, Eigen::MatrixXd::Zero(2, 4), Eigen::MatrixXd::Zero(4, 2)), InputError);
  EXPECT_THROW(spectral_conv(g, Eigen::MatrixXd::Zero(3, 4), Eigen::MatrixXd::Zero(3, 2)), InputError);
}

}  // namespace
}  // namespace drivebehave
