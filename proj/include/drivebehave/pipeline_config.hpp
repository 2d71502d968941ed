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
#include <optional>
#include <string>

#include <Eigen/Core>

#include "drivebehave/centrality.hpp"
#include "drivebehave/dgg.hpp"
#include "drivebehave/fuzzy_inference.hpp"
#include "drivebehave/trajectory_core.hpp"

namespace drivebehave {

/// Column names of the trajectory CSV. Speed and acceleration are optional;
/// they are derived from positions when the column is missing.
struct CsvSchema {
  std::string frame_id = "frame_id";
  std::string agent_id = "agent_id";
  std::string x = "x";
  std::string y = "y";
  std::string speed = "v";
  std::string accel = "a";
};

struct PipelineConfig {
  std::string input;
  std::string output;
  CsvSchema schema;
  double dt = 0.2;  // s
  int t_h = 15;
  int t_f = 25;
  int stride = 1;
  /// Fixed ego agent; when unset each window picks the lowest id present in all of its frames.
  std::optional<AgentId> ego_agent;
  std::uint64_t seed = 7;
  /// Worker threads for window processing; 0 picks the hardware concurrency.
  int workers = 0;
  /// Output width of the behavior vector.
  int behavior_dim = 8;
  DggConfig dgg;
  CentralityConfig centrality;
  FuzzyConfig fuzzy;
  Eigen::Vector3d hyperedge_weights = Eigen::Vector3d::Ones();

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Parses `key = value` lines. '#' starts a comment; blank lines are ignored.
/// Unknown or repeated keys and malformed values raise ConfigError naming the line.
PipelineConfig parse_config(std::istream& in, const std::string& source = "<config>");
PipelineConfig load_config(const std::string& path);

/// Every key with its value, sorted by key, one `key = value` per line.
/// Feeding the dump back through parse_config reproduces the config.
std::string dump_config(const PipelineConfig& config);

/// FNV-1a 64 of the dump without the input/output paths and the worker count, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

}  // namespace drivebehave
