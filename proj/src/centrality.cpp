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

#include "drivebehave/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "drivebehave/errors.hpp"

namespace drivebehave {

void CentralityConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("centrality: epsilon must be >= 0");
  for (double g : closeness_gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("centrality: gammas must be >= 0");
  }
  for (double e : closeness_etas) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("centrality: etas must be >= 0");
  }
  if (!(power_iter_tol > 0.0)) throw ConfigError("centrality: power_iter_tol must be positive");
  if (power_iter_max < 1) throw ConfigError("centrality: power_iter_max must be >= 1");
  if (!(distance_floor > 0.0)) throw ConfigError("centrality: distance_floor must be positive");
}

Eigen::VectorXd classical_degree(const Eigen::MatrixXd& adjacency) { return adjacency.rowwise().sum(); }

DynamicDegree dynamic_degree(const Eigen::MatrixXd& adjacency, const Eigen::MatrixXd& kernel_adjacency,
                             double epsilon) {
  if (!(epsilon >= 0.0)) throw InputError("dynamic degree: epsilon must be >= 0");
  if (adjacency.rows() != kernel_adjacency.rows() || adjacency.cols() != kernel_adjacency.cols()) {
    throw InputError("dynamic degree: adjacency and kernel shapes differ");
  }
  const Eigen::Index n = adjacency.rows();
  const Eigen::VectorXd degree = classical_degree(adjacency);
  const Eigen::MatrixXd laplacian = kernel_laplacian(kernel_adjacency);

  DynamicDegree result;
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) + epsilon * laplacian;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw InvariantError("dynamic degree: I + eps L is not positive definite");
  }
  result.potential = llt.solve(degree);

  // Sum runs over the proximity neighbourhood N_i.
  result.centrality = result.potential;
  for (Eigen::Index i = 0; i < n; ++i) {
    double indirect = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adjacency(i, j) != 0.0) {
        indirect += kernel_adjacency(i, j) * (result.potential(i) - result.potential(j));
      }
    }
    result.centrality(i) += epsilon * indirect;
  }
  return result;
}

DynamicDegree dynamic_degree(const DggSnapshot& snapshot, double epsilon) {
  return dynamic_degree(snapshot.adjacency, snapshot.kernel_adjacency, epsilon);
}

double closeness_weight(const AgentState& a, const AgentState& b, const FeatureVector& gammas) {
  const FeatureVector gap = feature_gap(a, b);
  double exponent = 0.0;
  for (std::size_t k = 0; k < gap.size(); ++k) exponent += gammas[k] * gap[k];
  return std::exp(-exponent);
}

double closeness_distance(const AgentState& a, const AgentState& b, const FeatureVector& etas) {
  const FeatureVector gap = feature_gap(a, b);
  double sum = 0.0;
  for (std::size_t k = 0; k < gap.size(); ++k) sum += etas[k] * gap[k] * gap[k];
  return std::sqrt(sum);
}

Eigen::VectorXd dynamic_closeness(const SceneFrame& frame, const DggSnapshot& snapshot,
                                  const CentralityConfig& config) {
  config.validate();
  const Eigen::Index n = snapshot.adjacency.rows();
  if (static_cast<std::size_t>(n) != frame.size()) throw InputError("closeness: frame and snapshot sizes differ");
  Eigen::VectorXd closeness = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int neighbours = 0;
    double weighted_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (snapshot.adjacency(i, j) == 0.0) continue;
      ++neighbours;
      const double w = closeness_weight(frame.node(i), frame.node(j), config.closeness_gammas);
      const double d = closeness_distance(frame.node(i), frame.node(j), config.closeness_etas);
      weighted_sum += w * std::max(d, config.distance_floor);
    }
    if (neighbours == 0) continue;
    // exp(-x) underflows to zero for extreme feature gaps.
    weighted_sum = std::max(weighted_sum, std::numeric_limits<double>::min());
    closeness(i) = neighbours / weighted_sum;
  }
  return closeness;
}

namespace {

std::vector<std::vector<Eigen::Index>> connected_components(const Eigen::MatrixXd& weights) {
  const Eigen::Index n = weights.rows();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Eigen::Index>> components;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (label[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<Eigen::Index> stack{start};
    label[static_cast<std::size_t>(start)] = id;
    while (!stack.empty()) {
      const Eigen::Index u = stack.back();
      stack.pop_back();
      components.back().push_back(u);
      for (Eigen::Index v = 0; v < n; ++v) {
        if (weights(u, v) > 0.0 && label[static_cast<std::size_t>(v)] < 0) {
          label[static_cast<std::size_t>(v)] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(components.back().begin(), components.back().end());
  }
  return components;
}

}  // namespace

EigenvectorCentrality perron_vector(const Eigen::MatrixXd& weights, double tol, int max_iter) {
  if (weights.rows() != weights.cols()) throw InputError("power iteration: matrix is not square");
  if (weights.size() > 0 && weights.minCoeff() < 0.0) throw InputError("power iteration: negative weight");
  const Eigen::Index n = weights.rows();
  EigenvectorCentrality result;
  result.centrality = Eigen::VectorXd::Zero(n);

  for (const auto& component : connected_components(weights)) {
    const auto size = static_cast<Eigen::Index>(component.size());
    if (size < 2) continue;
    Eigen::MatrixXd w(size, size);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) w(a, b) = weights(component[a], component[b]);
    }
    // The shift separates lambda_max from -lambda_max on bipartite components
    // without moving eigenvectors.
    const double shift = 0.5 * w.rowwise().sum().maxCoeff();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(size, 1.0 / std::sqrt(static_cast<double>(size)));
    double lambda = 0.0;
    bool converged = false;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
      const Eigen::VectorXd wx = w * x;
      lambda = x.dot(wx);
      if ((wx - lambda * x).norm() <= tol) {
        converged = true;
        break;
      }
      x = wx + shift * x;
      x /= x.norm();
    }
    if (!converged) {
      throw ConvergenceError("power iteration did not converge in " + std::to_string(max_iter) + " iterations");
    }
    for (Eigen::Index a = 0; a < size; ++a) result.centrality(component[a]) = std::max(0.0, x(a));
    result.eigenvalue = std::max(result.eigenvalue, lambda);
    result.iterations = std::max(result.iterations, iter);
  }
  return result;
}

EigenvectorCentrality eigenvector_centrality(const SceneFrame& frame, const DggSnapshot& snapshot,
                                             const CentralityConfig& config) {
  config.validate();
  const Eigen::Index n = snapshot.adjacency.rows();
  if (static_cast<std::size_t>(n) != frame.size()) throw InputError("eigenvector: frame and snapshot sizes differ");
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (snapshot.adjacency(i, j) != 0.0) {
        weights(i, j) = weights(j, i) = euclidean_distance(frame.node(i), frame.node(j));
      }
    }
  }
  return perron_vector(weights, config.power_iter_tol, config.power_iter_max);
}

CentralitySeries centrality_series(const TrajectoryWindow& window, const DggConfig& dgg_config,
                                   const CentralityConfig& config) {
  config.validate();
  dgg_config.validate();
  CentralitySeries series;
  const std::size_t steps = window.frames.size();
  series.timestamps.reserve(steps);
  series.agents.reserve(window.agent_ids.size());
  for (AgentId id : window.agent_ids) {
    series.agents.push_back({id, std::vector<CentralityTriple>(steps), std::vector<bool>(steps, false)});
  }

  for (std::size_t t = 0; t < steps; ++t) {
    const SceneFrame& frame = window.frames[t];
    series.timestamps.push_back(frame.timestamp);
    const DggSnapshot snapshot = build_snapshot(frame, dgg_config);
    const DynamicDegree degree = dynamic_degree(snapshot, config.epsilon);
    const Eigen::VectorXd closeness = dynamic_closeness(frame, snapshot, config);
    const EigenvectorCentrality eigen = eigenvector_centrality(frame, snapshot, config);
    for (auto& agent : series.agents) {
      const std::ptrdiff_t idx = frame.index_of(agent.id);
      if (idx < 0) continue;
      agent.present[t] = true;
      // Round-off can push a dynamic degree of an isolated pair slightly below zero.
      agent.values[t] = {std::max(0.0, degree.centrality(idx)), closeness(idx), eigen.centrality(idx)};
    }
  }
  return series;
}

}  // namespace drivebehave
