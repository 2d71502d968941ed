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

#include "drivebehave/dgg.hpp"

#include <cmath>
#include <string>

#include "drivebehave/errors.hpp"

namespace drivebehave {

void DggConfig::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("dgg: radius must be positive");
  for (double sigma : bandwidths) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("dgg: bandwidths must be positive");
  }
}

FeatureVector features(const AgentState& agent) {
  return {agent.rho, agent.theta, agent.speed, agent.accel};
}

FeatureVector feature_gap(const AgentState& a, const AgentState& b) {
  return {std::abs(a.rho - b.rho), std::abs(normalize_angle(a.theta - b.theta)),
          std::abs(a.speed - b.speed), std::abs(a.accel - b.accel)};
}

double euclidean_distance(const AgentState& a, const AgentState& b) {
  return (a.relative_position() - b.relative_position()).norm();
}

Eigen::MatrixXd build_adjacency(const SceneFrame& frame, double radius) {
  const auto n = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (euclidean_distance(frame.node(i), frame.node(j)) <= radius) {
        adjacency(i, j) = adjacency(j, i) = 1.0;
      }
    }
  }
  return adjacency;
}

Eigen::MatrixXd build_kernel_adjacency(const SceneFrame& frame, const DggConfig& config) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(frame.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double f : features(frame.node(i))) {
      if (!std::isfinite(f)) {
        throw InputError("kernel adjacency: non-finite feature for agent " + std::to_string(frame.node(i).id));
      }
    }
  }
  const Eigen::MatrixXd mask = build_adjacency(frame, config.radius);
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (config.mask_kernel && mask(i, j) == 0.0) continue;
      const FeatureVector gap = feature_gap(frame.node(i), frame.node(j));
      double exponent = 0.0;
      for (std::size_t k = 0; k < gap.size(); ++k) {
        exponent += gap[k] * gap[k] / (2.0 * config.bandwidths[k] * config.bandwidths[k]);
      }
      kernel(i, j) = kernel(j, i) = std::exp(-exponent);
    }
  }
  return kernel;
}

Eigen::MatrixXd kernel_laplacian(const Eigen::MatrixXd& kernel_adjacency) {
  if (kernel_adjacency.rows() != kernel_adjacency.cols()) {
    throw InputError("kernel laplacian: matrix is not square");
  }
  if (kernel_adjacency.size() > 0 &&
      (kernel_adjacency - kernel_adjacency.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("kernel laplacian: matrix is not symmetric");
  }
  if (kernel_adjacency.size() > 0 && kernel_adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw InputError("kernel laplacian: diagonal must be zero");
  }
  Eigen::MatrixXd laplacian = -kernel_adjacency;
  laplacian.diagonal() = kernel_adjacency.rowwise().sum();
  return laplacian;
}

DggSnapshot build_snapshot(const SceneFrame& frame, const DggConfig& config) {
  DggSnapshot snapshot;
  snapshot.node_ids.reserve(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) snapshot.node_ids.push_back(frame.node(i).id);
  snapshot.adjacency = build_adjacency(frame, config.radius);
  snapshot.kernel_adjacency = build_kernel_adjacency(frame, config);
  snapshot.kernel_laplacian = kernel_laplacian(snapshot.kernel_adjacency);
  return snapshot;
}

}  // namespace drivebehave
