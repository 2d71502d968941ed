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

#include "drivebehave/multimodal.hpp"

#include <cmath>
#include <numbers>

#include "drivebehave/errors.hpp"
#include "drivebehave/numeric.hpp"

namespace drivebehave {

std::array<Maneuver, kManeuverCount> all_maneuvers() {
  std::array<Maneuver, kManeuverCount> out;
  for (std::size_t i = 0; i < kManeuverCount; ++i) {
    out[i] = {static_cast<LateralManeuver>(i / 3), static_cast<LongitudinalManeuver>(i % 3)};
  }
  return out;
}

std::size_t maneuver_index(const Maneuver& maneuver) {
  return 3 * static_cast<std::size_t>(maneuver.lateral) + static_cast<std::size_t>(maneuver.longitudinal);
}

std::string to_string(const Maneuver& maneuver) {
  static const char* lateral[] = {"left_lane_change", "right_lane_change", "lane_keep"};
  static const char* longitudinal[] = {"accelerate", "brake", "maintain"};
  return std::string(lateral[static_cast<int>(maneuver.lateral)]) + "/" +
         longitudinal[static_cast<int>(maneuver.longitudinal)];
}

std::array<double, kManeuverCount> maneuver_prior(std::span<const double> logits) {
  if (logits.size() != kManeuverCount) throw InputError("maneuver prior: expected 9 logits");
  Eigen::VectorXd v(static_cast<Eigen::Index>(kManeuverCount));
  for (std::size_t i = 0; i < kManeuverCount; ++i) {
    if (!std::isfinite(logits[i])) throw InputError("maneuver prior: non-finite logit");
    v[static_cast<Eigen::Index>(i)] = logits[i];
  }
  const Eigen::VectorXd p = stable_softmax(v);
  std::array<double, kManeuverCount> out;
  for (std::size_t i = 0; i < kManeuverCount; ++i) out[i] = p[static_cast<Eigen::Index>(i)];
  return out;
}

void BivariateStep::validate() const {
  if (!std::isfinite(mu_rho) || !std::isfinite(mu_theta)) throw InputError("bivariate step: non-finite mean");
  if (!(sigma_rho > 0.0) || !(sigma_theta > 0.0) || !std::isfinite(sigma_rho) || !std::isfinite(sigma_theta)) {
    throw InputError("bivariate step: sigmas must be positive");
  }
  if (!(std::abs(eta) < 1.0)) throw InputError("bivariate step: correlation must satisfy |eta| < 1");
}

void ManeuverDistribution::validate() const {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("maneuver distribution: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("maneuver distribution: probabilities do not sum to one");
  for (const auto& trajectory : trajectories) {
    if (trajectory.size() != trajectories[0].size()) {
      throw InputError("maneuver distribution: horizons differ across maneuvers");
    }
    for (const auto& step : trajectory) step.validate();
  }
}

namespace {

// Mahalanobis term of the correlated bivariate normal, already divided by 2(1 - eta^2).
double quadratic_term(const BivariateStep& s, const PolarPosition& x) {
  const double zr = (x[0] - s.mu_rho) / s.sigma_rho;
  const double zt = (x[1] - s.mu_theta) / s.sigma_theta;
  return (zr * zr - 2.0 * s.eta * zr * zt + zt * zt) / (2.0 * (1.0 - s.eta * s.eta));
}

double log_normalizer(const BivariateStep& s) {
  return std::log(2.0 * std::numbers::pi * s.sigma_rho * s.sigma_theta * std::sqrt(1.0 - s.eta * s.eta));
}

}  // namespace

double step_nll(const BivariateStep& step, const PolarPosition& truth) {
  step.validate();
  return log_normalizer(step) + quadratic_term(step, truth);
}

double bivariate_nll(std::span<const BivariateStep> pred, std::span<const PolarPosition> truth) {
  if (pred.size() != truth.size()) throw InputError("nll: prediction and truth lengths differ");
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) total += step_nll(pred[k], truth[k]);
  return total;
}

double bivariate_density(const BivariateStep& step, const PolarPosition& point) {
  return std::exp(-step_nll(step, point));
}

double gmm_density(const PolarPosition& point, const ManeuverDistribution& mixture, std::size_t step) {
  mixture.validate();
  if (step >= mixture.trajectories[0].size()) throw InputError("gmm: step index beyond the horizon");
  double density = 0.0;
  for (std::size_t m = 0; m < kManeuverCount; ++m) {
    if (mixture.probs[m] == 0.0) continue;
    density += mixture.probs[m] * bivariate_density(mixture.trajectories[m][step], point);
  }
  return density;
}

double trajectory_mse(std::span<const Eigen::Vector2d> pred, std::span<const Eigen::Vector2d> truth) {
  if (pred.size() != truth.size()) throw InputError("mse: prediction and truth lengths differ");
  if (pred.empty()) throw InputError("mse: empty trajectory");
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) total += (pred[k] - truth[k]).squaredNorm();
  return total / static_cast<double>(pred.size());
}

void LossConfig::validate() const {
  if (!(sigma_tra > 0.0) || !(sigma_man > 0.0) || !std::isfinite(sigma_tra) || !std::isfinite(sigma_man)) {
    throw ConfigError("loss: noise scales must be positive");
  }
}

double multitask_loss(double l_tra, double l_man, const LossConfig& config) {
  config.validate();
  if (!std::isfinite(l_tra) || !std::isfinite(l_man)) throw InputError("loss: non-finite task loss");
  return l_tra / (2.0 * config.sigma_tra * config.sigma_tra) + l_man / (2.0 * config.sigma_man * config.sigma_man) +
         std::log(config.sigma_tra * config.sigma_man);
}

double ClassWeights::operator[](AgentClass c) const {
  switch (c) {
    case AgentClass::Vehicle:
      return vehicle;
    case AgentClass::Pedestrian:
      return pedestrian;
    case AgentClass::Bicycle:
      return bicycle;
  }
  return 0.0;
}

void ClassWeights::validate() const {
  if (!(vehicle >= 0.0) || !(pedestrian >= 0.0) || !(bicycle >= 0.0)) {
    throw ConfigError("class weights must be nonnegative");
  }
  if (std::abs(vehicle + pedestrian + bicycle - 1.0) > 1e-9) throw ConfigError("class weights must sum to one");
}

namespace {

std::size_t check_set(std::span<const Trajectory> pred, std::span<const Trajectory> truth) {
  if (pred.empty()) throw InputError("metrics: no trajectories");
  if (pred.size() != truth.size()) throw InputError("metrics: prediction and truth counts differ");
  const std::size_t horizon = pred[0].size();
  if (horizon == 0) throw InputError("metrics: empty trajectory");
  for (std::size_t a = 0; a < pred.size(); ++a) {
    if (pred[a].size() != horizon || truth[a].size() != horizon) {
      throw InputError("metrics: trajectories must share one horizon");
    }
  }
  return horizon;
}

double mean_displacement(const Trajectory& pred, const Trajectory& truth) {
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) total += (pred[k] - truth[k]).norm();
  return total / static_cast<double>(pred.size());
}

template <typename PerAgent>
double class_weighted(std::span<const Trajectory> pred, std::span<const Trajectory> truth,
                      std::span<const AgentClass> classes, const ClassWeights& weights, PerAgent per_agent) {
  weights.validate();
  check_set(pred, truth);
  if (classes.size() != pred.size()) throw InputError("metrics: one class label per trajectory required");
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> count{};
  for (std::size_t a = 0; a < pred.size(); ++a) {
    const auto c = static_cast<std::size_t>(classes[a]);
    sum[c] += per_agent(pred[a], truth[a]);
    ++count[c];
  }
  double weighted = 0.0;
  double weight_total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    if (count[c] == 0) continue;
    const double w = weights[static_cast<AgentClass>(c)];
    weighted += w * sum[c] / static_cast<double>(count[c]);
    weight_total += w;
  }
  if (!(weight_total > 0.0)) throw InputError("metrics: all present classes have zero weight");
  return weighted / weight_total;
}

}  // namespace

std::vector<double> rmse_per_step(std::span<const Trajectory> pred, std::span<const Trajectory> truth) {
  const std::size_t horizon = check_set(pred, truth);
  std::vector<double> out(horizon, 0.0);
  for (std::size_t k = 0; k < horizon; ++k) {
    for (std::size_t a = 0; a < pred.size(); ++a) out[k] += (pred[a][k] - truth[a][k]).squaredNorm();
    out[k] = std::sqrt(out[k] / static_cast<double>(pred.size()));
  }
  return out;
}

double ade(std::span<const Trajectory> pred, std::span<const Trajectory> truth) {
  check_set(pred, truth);
  double total = 0.0;
  for (std::size_t a = 0; a < pred.size(); ++a) total += mean_displacement(pred[a], truth[a]);
  return total / static_cast<double>(pred.size());
}

double fde(std::span<const Trajectory> pred, std::span<const Trajectory> truth) {
  check_set(pred, truth);
  double total = 0.0;
  for (std::size_t a = 0; a < pred.size(); ++a) total += (pred[a].back() - truth[a].back()).norm();
  return total / static_cast<double>(pred.size());
}

double wsade(std::span<const Trajectory> pred, std::span<const Trajectory> truth, std::span<const AgentClass> classes,
             const ClassWeights& weights) {
  return class_weighted(pred, truth, classes, weights, mean_displacement);
}

double wsfde(std::span<const Trajectory> pred, std::span<const Trajectory> truth, std::span<const AgentClass> classes,
             const ClassWeights& weights) {
  return class_weighted(pred, truth, classes, weights,
                        [](const Trajectory& p, const Trajectory& t) { return (p.back() - t.back()).norm(); });
}

}  // namespace drivebehave
