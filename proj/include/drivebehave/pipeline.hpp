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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "drivebehave/behavior_criteria.hpp"
#include "drivebehave/centrality.hpp"
#include "drivebehave/hypergraph_encoder.hpp"
#include "drivebehave/pipeline_config.hpp"
#include "drivebehave/report.hpp"
#include "drivebehave/scene_loader.hpp"

namespace drivebehave {

inline constexpr const char* kVersion = "0.1.0";

/// A window of consecutive frame ids and its ego.
struct WindowPlan {
  std::size_t first = 0;  // index into the frame list
  AgentId ego = 0;
};

struct WindowSchedule {
  std::vector<WindowPlan> windows;
  int considered = 0;
  int skipped_gap = 0;
  int skipped_ego = 0;
};

/// Window starts every `stride` frames. Windows spanning a frame-id gap, or
/// without an ego present in all of their frames, are skipped and counted.
WindowSchedule plan_windows(std::span<const CartesianFrame> frames, const PipelineConfig& config);

/// Every intermediate of one window.
struct WindowAnalysis {
  TrajectoryWindow window;
  CentralitySeries centrality;
  NormalizedCriteria criteria;
  /// Indices into window.agent_ids of agents with at least three valid frames.
  std::vector<std::size_t> scored;
  std::vector<AggressivenessScore> scores;  // aligned with `scored`
  BehaviorHypergraph hypergraph;
  Eigen::MatrixXd features;         // stacked criteria rows of the scored agents
  Eigen::MatrixXd behavior_vector;  // one row per scored agent
};

/// Errors are rethrown with the stage and window start frame prepended.
WindowAnalysis analyze_window(std::span<const CartesianFrame> frames, const WindowPlan& plan,
                              const PipelineConfig& config);

/// Full run over already loaded frames. `input_name` only lands in the report metadata.
BehaviorReport run_pipeline(const std::vector<CartesianFrame>& frames, const PipelineConfig& config,
                            const std::string& input_name);

/// Loads `config.input` and runs.
BehaviorReport run_pipeline(const PipelineConfig& config);

/// Normalized BIE or BFE inputs (channel means) of every valid agent step in
/// every scheduled window; the samples used for boundary calibration.
std::vector<double> criterion_samples(const std::vector<CartesianFrame>& frames, const PipelineConfig& config,
                                      Criterion criterion);

}  // namespace drivebehave
