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
#include <istream>
#include <string>
#include <vector>

#include "drivebehave/pipeline_config.hpp"
#include "drivebehave/trajectory_core.hpp"

namespace drivebehave {

struct AgentRecord {
  AgentId id = 0;
  double x = 0.0;  // m
  double y = 0.0;  // m
  double speed = 0.0;
  double accel = 0.0;
};

/// All agents observed at one frame id, sorted by agent id.
struct CartesianFrame {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;  // frame_id * dt
  std::vector<AgentRecord> agents;

  const AgentRecord* find(AgentId id) const;
};

/// Reads a header row and one row per (frame, agent) observation. Frames come
/// back sorted by frame id. Missing speed/acceleration columns are derived per
/// run of consecutive frame ids. Errors name the source and line.
std::vector<CartesianFrame> parse_scenes(std::istream& in, const CsvSchema& schema, double dt,
                                         const std::string& source = "<csv>");
std::vector<CartesianFrame> load_scenes(const std::string& path, const CsvSchema& schema, double dt);

/// Polar frame anchored at `ego`; every other agent becomes a neighbor.
SceneFrame to_scene_frame(const CartesianFrame& frame, AgentId ego);

}  // namespace drivebehave
