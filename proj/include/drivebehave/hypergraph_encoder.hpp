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

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "drivebehave/behavior_criteria.hpp"
#include "drivebehave/fuzzy_inference.hpp"

namespace drivebehave {

/// Node/hyperedge incidence with edge weights and both degree vectors.
/// Behavior hypergraphs have three columns (L, M, H); any column count is
/// accepted so degenerate layouts can be built directly.
struct BehaviorHypergraph {
  Eigen::MatrixXd incidence;     // nodes x edges, entries 0/1
  Eigen::VectorXd edge_weights;  // diagonal of the edge weight matrix
  Eigen::VectorXd node_degrees;  // d(v) = sum_e w(e) h(v, e)
  Eigen::VectorXd edge_degrees;  // delta(e) = sum_v h(v, e)
};

/// Computes degrees for an explicit incidence matrix. InputError on shape
/// mismatch, non-binary entries or negative weights.
BehaviorHypergraph make_hypergraph(const Eigen::MatrixXd& incidence, const Eigen::VectorXd& edge_weights);

/// One node per score; node i joins the hyperedge of classify_level(s_i).
/// Edge weights default to identity.
BehaviorHypergraph build_behavior_hypergraph(std::span<const double> scores, const LevelThresholds& thresholds,
                                             const Eigen::Vector3d& edge_weights = Eigen::Vector3d::Ones());

/// Affine node embedding: row_out = W * row_in + b.
struct EmbedParams {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out

  static EmbedParams identity(Eigen::Index dim);
  static EmbedParams seeded(Eigen::Index in, Eigen::Index out, std::uint64_t seed);
};

struct NodeFeatures {
  /// Per agent, timesteps laid side by side; each step holds the three BIE
  /// channels then the three BFE channels. Zero where the agent is absent.
  Eigen::MatrixXd stacked;
  /// stacked rows passed through the embedding.
  Eigen::MatrixXd embedded;
};

/// Width of a stacked row for `steps` timesteps.
inline Eigen::Index stacked_width(std::size_t steps) { return static_cast<Eigen::Index>(6 * steps); }

NodeFeatures node_features(const BehaviorCriteria& criteria, const EmbedParams& embed);

/// D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}; zero degrees map to zero.
Eigen::MatrixXd propagation_matrix(const BehaviorHypergraph& graph);

/// Behavior vector: propagation_matrix(graph) * features * transform.
Eigen::MatrixXd spectral_conv(const BehaviorHypergraph& graph, const Eigen::MatrixXd& features,
                              const Eigen::MatrixXd& transform);

}  // namespace drivebehave
