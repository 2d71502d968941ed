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
#include <string>
#include <vector>

#include <Eigen/Core>

namespace drivebehave {

enum class LateralManeuver { LeftLaneChange = 0, RightLaneChange = 1, LaneKeep = 2 };
enum class LongitudinalManeuver { Accelerate = 0, Brake = 1, Maintain = 2 };

struct Maneuver {
  LateralManeuver lateral = LateralManeuver::LaneKeep;
  LongitudinalManeuver longitudinal = LongitudinalManeuver::Maintain;

  bool operator==(const Maneuver&) const = default;
};

inline constexpr std::size_t kManeuverCount = 9;

/// Joint maneuvers, lateral-major: index = 3 * lateral + longitudinal.
std::array<Maneuver, kManeuverCount> all_maneuvers();
std::size_t maneuver_index(const Maneuver& maneuver);
std::string to_string(const Maneuver& maneuver);

/// Softmax over the nine joint maneuvers. InputError for non-finite logits.
std::array<double, kManeuverCount> maneuver_prior(std::span<const double> logits);

/// One predicted step in polar coordinates: means, scales and correlation.
struct BivariateStep {
  double mu_rho = 0.0;
  double mu_theta = 0.0;
  double sigma_rho = 1.0;
  double sigma_theta = 1.0;
  double eta = 0.0;

  /// InputError unless both sigmas are positive and |eta| < 1.
  void validate() const;
};

/// (rho, theta)
using PolarPosition = Eigen::Vector2d;

struct ManeuverDistribution {
  std::array<double, kManeuverCount> probs{};
  std::array<std::vector<BivariateStep>, kManeuverCount> trajectories;

  /// Probabilities nonnegative and summing to 1 within 1e-9, equal horizon
  /// lengths, every step valid.
  void validate() const;
};

/// Negative log-density of `truth` under one step.
double step_nll(const BivariateStep& step, const PolarPosition& truth);

/// Sum of step_nll over the horizon. InputError on length mismatch.
double bivariate_nll(std::span<const BivariateStep> pred, std::span<const PolarPosition> truth);

double bivariate_density(const BivariateStep& step, const PolarPosition& point);

/// Maneuver-weighted mixture density at horizon step `step`.
double gmm_density(const PolarPosition& point, const ManeuverDistribution& mixture, std::size_t step);

/// Mean squared Euclidean distance between predicted means and truth.
double trajectory_mse(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth);

struct LossConfig {
  double sigma_tra = 1.0;
  double sigma_man = 1.0;

  void validate() const;
};

/// l_tra / (2 s_tra^2) + l_man / (2 s_man^2) + log(s_tra s_man).
double multitask_loss(double l_tra, double l_man, const LossConfig& config);

using Trajectory = std::vector<Eigen::Vector2d>;

enum class AgentClass { Vehicle = 0, Pedestrian = 1, Bicycle = 2 };

struct ClassWeights {
  double vehicle = 0.20;
  double pedestrian = 0.58;
  double bicycle = 0.22;

  double operator[](AgentClass c) const;
  void validate() const;
};

/// Square root of the mean squared displacement across agents, per horizon step.
std::vector<double> rmse_per_step(std::span<const Trajectory> pred, std::span<const Trajectory> truth);
/// Mean displacement over all agents and steps.
double ade(std::span<const Trajectory> pred, std::span<const Trajectory> truth);
/// Mean displacement at the final step.
double fde(std::span<const Trajectory> pred, std::span<const Trajectory> truth);

/// Class-weighted ADE / FDE. Classes without agents are skipped and the
/// remaining weights rescaled to sum to one.
double wsade(std::span<const Trajectory> pred, std::span<const Trajectory> truth, std::span<const AgentClass> classes,
             const ClassWeights& weights = {});
double wsfde(std::span<const Trajectory> pred, std::span<const Trajectory> truth, std::span<const AgentClass> classes,
             const ClassWeights& weights = {});

}  // namespace drivebehave
