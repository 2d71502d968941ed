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
#include <vector>

#include <Eigen/Core>

#include "drivebehave/trajectory_core.hpp"

namespace drivebehave {

/// Feature order used by the kernel: radial distance, polar angle, speed, acceleration.
using FeatureVector = std::array<double, 4>;

struct DggConfig {
  double radius = 30.0;  // m
  FeatureVector bandwidths{10.0, 0.5, 2.0, 1.0};
  /// Restrict kernel weights to the proximity edge set. Off by default: with a
  /// masked kernel the dynamic degree reduces exactly to the classical degree,
  /// since then x + eps * sum_{N_i} a_ij (x_i - x_j) is row i of (I + eps L) x.
  bool mask_kernel = false;

  void validate() const;
};

/// Per-frame graph matrices. Node order follows SceneFrame::node (ego = 0).
struct DggSnapshot {
  std::vector<AgentId> node_ids;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd kernel_adjacency;
  Eigen::MatrixXd kernel_laplacian;
};

FeatureVector features(const AgentState& agent);

/// Absolute per-feature gaps; the angle gap is wrapped to (-pi, pi] first.
FeatureVector feature_gap(const AgentState& a, const AgentState& b);

/// Euclidean distance between the Cartesian positions of two agents of one frame.
double euclidean_distance(const AgentState& a, const AgentState& b);

/// Binary proximity adjacency: 1 iff i != j and the distance is within `radius`.
Eigen::MatrixXd build_adjacency(const SceneFrame& frame, double radius);

/// Gaussian kernel over the four features with zero diagonal. Entries outside
/// the proximity adjacency are zeroed when `config.mask_kernel` is set.
Eigen::MatrixXd build_kernel_adjacency(const SceneFrame& frame, const DggConfig& config);

/// L = D - A for a symmetric, zero-diagonal weight matrix.
Eigen::MatrixXd kernel_laplacian(const Eigen::MatrixXd& kernel_adjacency);

DggSnapshot build_snapshot(const SceneFrame& frame, const DggConfig& config);

}  // namespace drivebehave
