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
#include <cstdint>
#include <string>
#include <vector>

#include "drivebehave/fuzzy_inference.hpp"
#include "drivebehave/trajectory_core.hpp"

namespace drivebehave {

struct SeriesSummary {
  double mean = 0.0;
  double max = 0.0;
};

struct AgentReport {
  AgentId id = 0;
  int valid_frames = 0;
  /// Agents seen in fewer than three frames of the window carry no score.
  bool scored = false;
  double score = 0.0;
  Level level = Level::Low;
  /// Aggregated pair behind the score.
  double mu_agg = 0.0;
  double nu_agg = 0.0;
  SeriesSummary degree, closeness, eigen;  // raw centralities over valid frames
  SeriesSummary bie, bfe;                  // normalized channel means over valid frames
  /// Per window timestep; zero where the agent is absent.
  std::vector<double> bie_series, bfe_series;
  /// Row of the behavior vector; empty when unscored.
  std::vector<double> behavior_vector;
};

struct WindowReport {
  int index = 0;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
  double start_time = 0.0;
  double end_time = 0.0;
  AgentId ego = 0;
  std::vector<AgentReport> agents;
};

struct PopulationStats {
  int scored = 0;
  std::array<int, 3> level_counts{};          // L, M, H
  std::array<double, 3> level_proportions{};  // all zero when nothing was scored
};

struct ReportMeta {
  std::string tool = "drivebehave";
  std::string version;
  std::string input;
  std::string config_hash;
  std::uint64_t seed = 0;
  double dt = 0.0;
  int t_h = 0;
  int t_f = 0;
  int stride = 1;
  int frames = 0;
  int windows_considered = 0;
  int windows_skipped_gap = 0;
  int windows_skipped_ego = 0;
};

struct BehaviorReport {
  ReportMeta meta;
  std::vector<WindowReport> windows;
  PopulationStats population;
};

enum class ReportFormat { Json, Csv };

ReportFormat report_format_from_string(const std::string& name);

PopulationStats population_stats(const std::vector<WindowReport>& windows);

/// Doubles rounded to nine significant digits; keys sorted.
std::string report_to_json(const BehaviorReport& report);
BehaviorReport report_from_json(const std::string& text);

/// One row per (window, agent).
std::string report_to_csv(const BehaviorReport& report);

/// IoError when the file cannot be written.
void emit_report(const BehaviorReport& report, const std::string& path, ReportFormat format);

/// Rounds to nine significant digits, the precision reports are written with.
double round_significant(double value);

}  // namespace drivebehave
