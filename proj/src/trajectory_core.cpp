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

#include "drivebehave/trajectory_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "drivebehave/errors.hpp"

namespace drivebehave {

double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

Eigen::Vector2d AgentState::relative_position() const { return polar_to_cartesian(rho, theta); }

void AgentState::validate() const {
  if (!std::isfinite(rho) || !std::isfinite(theta) || !std::isfinite(speed) || !std::isfinite(accel)) {
    throw InputError("agent " + std::to_string(id) + ": non-finite state");
  }
  if (rho < 0.0) throw InputError("agent " + std::to_string(id) + ": negative radial distance");
  if (theta <= -std::numbers::pi || theta > std::numbers::pi) {
    throw InputError("agent " + std::to_string(id) + ": polar angle outside (-pi, pi]");
  }
}

std::ptrdiff_t SceneFrame::index_of(AgentId id) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (node(i).id == id) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

void SceneFrame::validate() const {
  if (!std::isfinite(timestamp)) throw InputError("frame timestamp is not finite");
  ego.validate();
  if (ego.rho != 0.0) throw InputError("ego must sit at the origin (rho = 0)");
  std::unordered_set<AgentId> seen{ego.id};
  for (const auto& agent : neighbors) {
    agent.validate();
    if (!seen.insert(agent.id).second) {
      throw InputError("duplicate agent id " + std::to_string(agent.id) + " in frame");
    }
  }
}

Eigen::Vector2d polar_to_cartesian(double rho, double theta) {
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

std::vector<PolarPoint> to_polar(const CartesianTrack& track, const CartesianTrack& ego_track) {
  if (track.samples.size() != ego_track.samples.size()) {
    throw InputError("to_polar: tracks have different lengths");
  }
  std::vector<PolarPoint> out;
  out.reserve(track.samples.size());
  for (std::size_t k = 0; k < track.samples.size(); ++k) {
    const auto& s = track.samples[k];
    const auto& e = ego_track.samples[k];
    if (std::abs(s.timestamp - e.timestamp) > 1e-9) {
      throw InputError("to_polar: timestamps are not aligned at sample " + std::to_string(k));
    }
    const double dx = s.x - e.x;
    const double dy = s.y - e.y;
    const double rho = std::hypot(dx, dy);
    const double theta = rho == 0.0 ? 0.0 : normalize_angle(std::atan2(dy, dx));
    out.push_back({s.timestamp, rho, theta});
  }
  return out;
}

namespace {

// Second-order accurate first derivative of uniformly spaced samples.
template <typename Get>
double derivative_at(std::size_t k, std::size_t n, double dt, Get get) {
  if (k == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * dt);
  if (k == n - 1) return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * dt);
  return (get(k + 1) - get(k - 1)) / (2.0 * dt);
}

}  // namespace

std::vector<Kinematics> derive_kinematics(std::span<const Eigen::Vector2d> positions, double dt) {
  const std::size_t n = positions.size();
  if (n < 3) throw InputError("derive_kinematics: need at least 3 samples, got " + std::to_string(n));
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("derive_kinematics: dt must be positive");

  std::vector<double> speed(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double vx = derivative_at(k, n, dt, [&](std::size_t i) { return positions[i].x(); });
    const double vy = derivative_at(k, n, dt, [&](std::size_t i) { return positions[i].y(); });
    speed[k] = std::hypot(vx, vy);
  }
  std::vector<Kinematics> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k].speed = speed[k];
    out[k].accel = derivative_at(k, n, dt, [&](std::size_t i) { return speed[i]; });
    if (!std::isfinite(out[k].speed) || !std::isfinite(out[k].accel)) {
      throw InputError("derive_kinematics: non-finite result");
    }
  }
  return out;
}

TrajectoryWindow window_from_frames(std::span<const SceneFrame> frames, int t_h, int t_f, double dt,
                                    double spacing_tolerance) {
  if (t_h < 2) throw InputError("window: history horizon must be at least 2 steps");
  if (t_f < 0) throw InputError("window: future horizon must be non-negative");
  if (!(dt > 0.0)) throw InputError("window: dt must be positive");
  const auto needed = static_cast<std::size_t>(t_h) + 1;
  if (frames.size() < needed) {
    throw InputError("window: need " + std::to_string(needed) + " frames, got " +
                     std::to_string(frames.size()));
  }

  TrajectoryWindow window;
  window.dt = dt;
  window.horizon_history = t_h;
  window.horizon_future = t_f;
  window.frames.assign(frames.begin(), frames.begin() + static_cast<std::ptrdiff_t>(needed));

  for (std::size_t k = 0; k < window.frames.size(); ++k) {
    window.frames[k].validate();
    if (k > 0) {
      const double step = window.frames[k].timestamp - window.frames[k - 1].timestamp;
      if (std::abs(step - dt) > spacing_tolerance * dt) {
        throw InputError("window: irregular frame spacing at frame " + std::to_string(k) + " (" +
                         std::to_string(step) + " s, expected " + std::to_string(dt) + " s)");
      }
    }
  }

  std::unordered_map<AgentId, int> counts;
  for (const auto& frame : window.frames) {
    for (std::size_t i = 0; i < frame.size(); ++i) ++counts[frame.node(i).id];
  }
  const AgentId first_ego = window.frames.front().ego.id;
  std::set<AgentId> others;
  for (const auto& [id, count] : counts) {
    if (id != first_ego) others.insert(id);
    if (count < 2) window.short_lived.push_back(id);
  }
  std::sort(window.short_lived.begin(), window.short_lived.end());
  window.agent_ids.push_back(first_ego);
  window.agent_ids.insert(window.agent_ids.end(), others.begin(), others.end());
  return window;
}

}  // namespace drivebehave
