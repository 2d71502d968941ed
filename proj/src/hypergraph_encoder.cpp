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

#include "drivebehave/hypergraph_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drivebehave/errors.hpp"
#include "drivebehave/numeric.hpp"

namespace drivebehave {

BehaviorHypergraph make_hypergraph(const Eigen::MatrixXd& incidence, const Eigen::VectorXd& edge_weights) {
  if (incidence.cols() != edge_weights.size()) {
    throw InputError("hypergraph: " + std::to_string(incidence.cols()) + " hyperedges but " +
                     std::to_string(edge_weights.size()) + " weights");
  }
  for (Eigen::Index i = 0; i < incidence.size(); ++i) {
    const double h = incidence.data()[i];
    if (h != 0.0 && h != 1.0) throw InputError("hypergraph: incidence entries must be 0 or 1");
  }
  for (Eigen::Index e = 0; e < edge_weights.size(); ++e) {
    if (!(edge_weights[e] >= 0.0) || !std::isfinite(edge_weights[e])) {
      throw InputError("hypergraph: edge weights must be nonnegative and finite");
    }
  }
  BehaviorHypergraph graph;
  graph.incidence = incidence;
  graph.edge_weights = edge_weights;
  graph.node_degrees = incidence * edge_weights;
  graph.edge_degrees = incidence.colwise().sum().transpose();
  return graph;
}

BehaviorHypergraph build_behavior_hypergraph(std::span<const double> scores, const LevelThresholds& thresholds,
                                             const Eigen::Vector3d& edge_weights) {
  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(scores.size()), 3);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InputError("hypergraph: non-finite score");
    incidence(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(classify_level(scores[i], thresholds))) = 1.0;
  }
  return make_hypergraph(incidence, edge_weights);
}

EmbedParams EmbedParams::identity(Eigen::Index dim) {
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
}

EmbedParams EmbedParams::seeded(Eigen::Index in, Eigen::Index out, std::uint64_t seed) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(in, 1)));
  EmbedParams params;
  params.weight = seeded_matrix(out, in, seed, scale);
  params.bias = seeded_matrix(out, 1, seed ^ 0x9e3779b97f4a7c15ULL, scale).col(0);
  return params;
}

NodeFeatures node_features(const BehaviorCriteria& criteria, const EmbedParams& embed) {
  const std::size_t steps = criteria.timestamps.size();
  const Eigen::Index nodes = static_cast<Eigen::Index>(criteria.agents.size());
  const Eigen::Index width = stacked_width(steps);
  if (embed.weight.cols() != width || embed.bias.size() != embed.weight.rows()) {
    throw InputError("node features: embedding expects " + std::to_string(embed.weight.cols()) +
                     " inputs, stacked rows have " + std::to_string(width));
  }
  NodeFeatures out;
  out.stacked = Eigen::MatrixXd::Zero(nodes, width);
  for (Eigen::Index v = 0; v < nodes; ++v) {
    const AgentCriteria& agent = criteria.agents[static_cast<std::size_t>(v)];
    if (agent.bie.size() != steps || agent.bfe.size() != steps || agent.mask.size() != steps) {
      throw InputError("node features: criteria of agent " + std::to_string(agent.id) + " are not window-aligned");
    }
    for (std::size_t t = 0; t < steps; ++t) {
      if (!agent.mask[t]) continue;
      const Eigen::Index base = static_cast<Eigen::Index>(6 * t);
      for (Eigen::Index c = 0; c < 3; ++c) {
        out.stacked(v, base + c) = agent.bie[t][static_cast<std::size_t>(c)];
        out.stacked(v, base + 3 + c) = agent.bfe[t][static_cast<std::size_t>(c)];
      }
    }
  }
  out.embedded = (out.stacked * embed.weight.transpose()).rowwise() + embed.bias.transpose();
  return out;
}

namespace {

Eigen::VectorXd safe_inverse(const Eigen::VectorXd& v, double power) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? std::pow(v[i], -power) : 0.0;
  return out;
}

}  // namespace

Eigen::MatrixXd propagation_matrix(const BehaviorHypergraph& graph) {
  const Eigen::Index nodes = graph.incidence.rows();
  const Eigen::Index edges = graph.incidence.cols();
  if (graph.edge_weights.size() != edges || graph.edge_degrees.size() != edges || graph.node_degrees.size() != nodes) {
    throw InputError("hypergraph: degree vectors do not match the incidence shape");
  }
  const Eigen::VectorXd dv = safe_inverse(graph.node_degrees, 0.5);
  const Eigen::VectorXd de = safe_inverse(graph.edge_degrees, 1.0);
  const Eigen::MatrixXd left = dv.asDiagonal() * graph.incidence;
  const Eigen::VectorXd edge_scale = graph.edge_weights.cwiseProduct(de);
  return left * edge_scale.asDiagonal() * left.transpose();
}

Eigen::MatrixXd spectral_conv(const BehaviorHypergraph& graph, const Eigen::MatrixXd& features,
                              const Eigen::MatrixXd& transform) {
  if (features.rows() != graph.incidence.rows()) {
    throw InputError("spectral conv: " + std::to_string(features.rows()) + " feature rows for " +
                     std::to_string(graph.incidence.rows()) + " nodes");
  }
  if (transform.rows() != features.cols()) {
    throw InputError("spectral conv: transform has " + std::to_string(transform.rows()) + " rows, features have " +
                     std::to_string(features.cols()) + " columns");
  }
  return propagation_matrix(graph) * (features * transform);
}

}  // namespace drivebehave
