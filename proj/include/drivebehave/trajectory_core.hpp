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
#include <vector>

#include <Eigen/Core>

namespace drivebehave {

using AgentId = std::int64_t;

/// Wraps an angle to (-pi, pi].
double normalize_angle(double angle);

/// Polar kinematic state of one agent, relative to the ego position of the
/// same frame. `speed` and `accel` are scalar magnitudes along the path.
struct AgentState {
  AgentId id = 0;
  double rho = 0.0;    // m
  double theta = 0.0;  // rad, (-pi, pi]
  double speed = 0.0;  // m/s
  double accel = 0.0;  // m/s^2

  /// Cartesian offset from the ego, reconstructed from (rho, theta).
  Eigen::Vector2d relative_position() const;
  /// Throws InputError unless rho >= 0, theta in (-pi, pi] and all fields finite.
  void validate() const;
};

struct SceneFrame {
  double timestamp = 0.0;
  AgentState ego;
  std::vector<AgentState> neighbors;

  std::size_t size() const { return neighbors.size() + 1; }
  /// Node `i` of the frame graph: 0 is the ego, 1..n are neighbors in order.
  const AgentState& node(std::size_t i) const { return i == 0 ? ego : neighbors[i - 1]; }
  /// Index of `id` in node order, or -1 when absent.
  std::ptrdiff_t index_of(AgentId id) const;
  void validate() const;
};

struct TrajectoryWindow {
  std::vector<SceneFrame> frames;
  double dt = 0.0;
  int horizon_history = 0;
  int horizon_future = 0;
  /// Union of agent ids across frames; the ego of the first frame comes first,
  /// the remainder ascending.
  std::vector<AgentId> agent_ids;
  /// Agents seen in fewer than two frames. They cannot receive a BIE.
  std::vector<AgentId> short_lived;
};

struct CartesianSample {
  double timestamp = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct CartesianTrack {
  AgentId id = 0;
  std::vector<CartesianSample> samples;
};

struct PolarPoint {
  double timestamp = 0.0;
  double rho = 0.0;
  double theta = 0.0;
};

struct Kinematics {
  double speed = 0.0;
  double accel = 0.0;
};

/// Polar coordinates of `track` in the frame anchored at the ego position of
/// each timestamp. Both tracks must share timestamps (InputError otherwise).
std::vector<PolarPoint> to_polar(const CartesianTrack& track, const CartesianTrack& ego_track);

/// Inverse of the polar mapping for a single point.
Eigen::Vector2d polar_to_cartesian(double rho, double theta);

/// Speed and longitudinal acceleration from uniformly sampled positions.
/// Second-order central differences inside, second-order one-sided differences
/// at both ends. Requires at least three samples and dt > 0.
std::vector<Kinematics> derive_kinematics(std::span<const Eigen::Vector2d> positions, double dt);

/// Validates spacing and builds a window from the first `t_h + 1` frames.
/// Frame spacing may deviate from `dt` by at most `spacing_tolerance * dt`.
TrajectoryWindow window_from_frames(std::span<const SceneFrame> frames, int t_h, int t_f, double dt,
                                    double spacing_tolerance = 1e-3);

}  // namespace drivebehave
