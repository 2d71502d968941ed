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

#include "drivebehave/dgg.hpp"
#include "drivebehave/trajectory_core.hpp"

namespace drivebehave {

struct CentralityConfig {
  /// Weight of indirect connections in the dynamic degree system.
  double epsilon = 0.5;
  /// Coefficients of the closeness weighting factor (rho, theta, speed, accel).
  FeatureVector closeness_gammas{1.0, 1.0, 1.0, 1.0};
  /// Coefficients of the closeness distance metric (rho, theta, speed, accel).
  FeatureVector closeness_etas{1.0, 1.0, 1.0, 1.0};
  double power_iter_tol = 1e-10;
  int power_iter_max = 20000;
  double distance_floor = 1e-6;  // m

  void validate() const;
};

struct CentralityTriple {
  double degree = 0.0;
  double closeness = 0.0;
  double eigen = 0.0;

  double operator[](std::size_t channel) const { return channel == 0 ? degree : channel == 1 ? closeness : eigen; }
};

struct AgentCentrality {
  AgentId id = 0;
  std::vector<CentralityTriple> values;  // one per frame; zero where absent
  std::vector<bool> present;
};

struct CentralitySeries {
  std::vector<double> timestamps;
  std::vector<AgentCentrality> agents;  // same order as TrajectoryWindow::agent_ids
};

/// Number of neighbours per node: row sums of a 0/1 adjacency.
Eigen::VectorXd classical_degree(const Eigen::MatrixXd& adjacency);

struct DynamicDegree {
  /// Solution of (I + eps L) x = d.
  Eigen::VectorXd potential;
  /// x_i + eps * sum_{j in N_i} a_ij (x_i - x_j).
  Eigen::VectorXd centrality;
};

/// Dynamic degree from a proximity adjacency and its kernel weights.
/// `kernel_adjacency` must be symmetric with zero diagonal; epsilon >= 0.
DynamicDegree dynamic_degree(const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& kernel_adjacency,
                             double epsilon);
DynamicDegree dynamic_degree(const DggSnapshot& snapshot, double epsilon);

/// Closeness weighting factor between two agents.
double closeness_weight(const AgentState& a, const AgentState& b, const FeatureVector& gammas);
/// Closeness distance metric between two agents.
double closeness_distance(const AgentState& a, const AgentState& b, const FeatureVector& etas);

/// |N_i| / sum_{j in N_i} w_ij * max(d_ij, floor); zero for isolated nodes.
Eigen::VectorXd dynamic_closeness(const SceneFrame& frame, const DggSnapshot& snapshot,
                                  const CentralityConfig& config);

struct EigenvectorCentrality {
  Eigen::VectorXd centrality;
  /// Largest dominant eigenvalue over the connected components.
  double eigenvalue = 0.0;
  int iterations = 0;
};

/// Perron vector of a symmetric nonnegative matrix by shifted power iteration,
/// evaluated per connected component. Each component's vector is unit-norm and
/// nonnegative; isolated nodes get zero. Throws ConvergenceError when the
/// residual |Wx - lambda x| does not fall below `tol` within `max_iter` steps.
EigenvectorCentrality perron_vector(const Eigen::MatrixXd& weights, double tol, int max_iter);

/// Eigenvector centrality on the proximity graph weighted by Euclidean distance.
EigenvectorCentrality eigenvector_centrality(const SceneFrame& frame, const DggSnapshot& snapshot,
                                             const CentralityConfig& config);

/// Centrality triples for every agent of the window at every frame.
CentralitySeries centrality_series(const TrajectoryWindow& window, const DggConfig& dgg_config,
                                   const CentralityConfig& config);

}  // namespace drivebehave
