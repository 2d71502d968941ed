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

#include "drivebehave/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "drivebehave/errors.hpp"
#include "drivebehave/numeric.hpp"

namespace drivebehave {

namespace {

template <typename F>
auto in_stage(const char* stage, std::int64_t start_frame, F&& f) -> decltype(f()) {
  const std::string label = std::string("stage '") + stage + "', window at frame " + std::to_string(start_frame) + ": ";
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(label + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(label + e.what());
  } catch (const InputError& e) {
    throw InputError(label + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(label + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(label + e.what());
  }
}

bool contiguous(std::span<const CartesianFrame> frames, std::size_t first, std::size_t count) {
  for (std::size_t k = 1; k < count; ++k) {
    if (frames[first + k].frame_id != frames[first].frame_id + static_cast<std::int64_t>(k)) return false;
  }
  return true;
}

std::optional<AgentId> pick_ego(std::span<const CartesianFrame> frames, std::size_t first, std::size_t count,
                                const std::optional<AgentId>& fixed) {
  auto in_all = [&](AgentId id) {
    for (std::size_t k = 0; k < count; ++k) {
      if (!frames[first + k].find(id)) return false;
    }
    return true;
  };
  if (fixed) return in_all(*fixed) ? fixed : std::nullopt;
  for (const auto& agent : frames[first].agents) {
    if (in_all(agent.id)) return agent.id;
  }
  return std::nullopt;
}

struct Prepared {
  TrajectoryWindow window;
  CentralitySeries centrality;
  NormalizedCriteria criteria;
};

Prepared prepare(std::span<const CartesianFrame> frames, const WindowPlan& plan, const PipelineConfig& config) {
  const std::size_t count = static_cast<std::size_t>(config.t_h) + 1;
  const std::int64_t start = frames[plan.first].frame_id;
  Prepared p;
  p.window = in_stage("window", start, [&] {
    std::vector<SceneFrame> scenes;
    scenes.reserve(count);
    for (std::size_t k = 0; k < count; ++k) scenes.push_back(to_scene_frame(frames[plan.first + k], plan.ego));
    return window_from_frames(scenes, config.t_h, config.t_f, config.dt);
  });
  p.centrality = in_stage("centrality", start, [&] { return centrality_series(p.window, config.dgg, config.centrality); });
  p.criteria = in_stage("criteria", start, [&] { return normalize(behavior_criteria(p.centrality, config.dt)); });
  return p;
}

int valid_count(const std::vector<bool>& mask) { return static_cast<int>(std::count(mask.begin(), mask.end(), true)); }

SeriesSummary summarize(const std::vector<double>& values, const std::vector<bool>& mask) {
  SeriesSummary s;
  int n = 0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!mask[t]) continue;
    s.mean += values[t];
    s.max = n == 0 ? values[t] : std::max(s.max, values[t]);
    ++n;
  }
  if (n > 0) s.mean /= n;
  return s;
}

WindowReport build_window_report(const WindowAnalysis& a, const PipelineConfig& config, std::int64_t start_frame) {
  WindowReport report;
  report.start_frame = start_frame;
  report.end_frame = start_frame + config.t_h;
  report.start_time = a.window.frames.front().timestamp;
  report.end_time = a.window.frames.back().timestamp;
  report.ego = a.window.frames.front().ego.id;
  const std::size_t steps = a.window.frames.size();
  std::vector<std::ptrdiff_t> scored_row(a.window.agent_ids.size(), -1);
  for (std::size_t r = 0; r < a.scored.size(); ++r) scored_row[a.scored[r]] = static_cast<std::ptrdiff_t>(r);

  for (std::size_t i = 0; i < a.window.agent_ids.size(); ++i) {
    const AgentCentrality& cent = a.centrality.agents[i];
    const AgentCriteria& crit = a.criteria.values.agents[i];
    AgentReport agent;
    agent.id = cent.id;
    agent.valid_frames = valid_count(cent.present);
    std::vector<double> channel(steps);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t t = 0; t < steps; ++t) channel[t] = cent.values[t][c];
      const SeriesSummary s = summarize(channel, cent.present);
      (c == 0 ? agent.degree : c == 1 ? agent.closeness : agent.eigen) = s;
    }
    agent.bie_series.resize(steps);
    agent.bfe_series.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      agent.bie_series[t] = crit.mask[t] ? channel_mean(crit.bie[t]) : 0.0;
      agent.bfe_series[t] = crit.mask[t] ? channel_mean(crit.bfe[t]) : 0.0;
    }
    agent.bie = summarize(agent.bie_series, crit.mask);
    agent.bfe = summarize(agent.bfe_series, crit.mask);
    if (scored_row[i] >= 0) {
      const auto r = static_cast<std::size_t>(scored_row[i]);
      agent.scored = true;
      agent.score = a.scores[r].score;
      agent.level = a.scores[r].level;
      agent.mu_agg = a.scores[r].pair_trace.mu;
      agent.nu_agg = a.scores[r].pair_trace.nu;
      const auto row = a.behavior_vector.row(static_cast<Eigen::Index>(r));
      agent.behavior_vector.resize(static_cast<std::size_t>(row.size()));
      for (Eigen::Index k = 0; k < row.size(); ++k) agent.behavior_vector[static_cast<std::size_t>(k)] = row[k];
    }
    report.agents.push_back(std::move(agent));
  }
  return report;
}

}  // namespace

WindowSchedule plan_windows(std::span<const CartesianFrame> frames, const PipelineConfig& config) {
  WindowSchedule schedule;
  const std::size_t count = static_cast<std::size_t>(config.t_h) + 1;
  for (std::size_t first = 0; first + count <= frames.size(); first += static_cast<std::size_t>(config.stride)) {
    ++schedule.considered;
    if (!contiguous(frames, first, count)) {
      ++schedule.skipped_gap;
      continue;
    }
    const auto ego = pick_ego(frames, first, count, config.ego_agent);
    if (!ego) {
      ++schedule.skipped_ego;
      continue;
    }
    schedule.windows.push_back({first, *ego});
  }
  return schedule;
}

WindowAnalysis analyze_window(std::span<const CartesianFrame> frames, const WindowPlan& plan,
                              const PipelineConfig& config) {
  const std::int64_t start = frames[plan.first].frame_id;
  Prepared p = prepare(frames, plan, config);
  WindowAnalysis a;
  a.window = std::move(p.window);
  a.centrality = std::move(p.centrality);
  a.criteria = std::move(p.criteria);

  in_stage("fuzzy", start, [&] {
    const double now = a.window.frames.back().timestamp;
    for (std::size_t i = 0; i < a.criteria.values.agents.size(); ++i) {
      const AgentCriteria& agent = a.criteria.values.agents[i];
      if (valid_count(agent.mask) < 3) continue;
      std::vector<double> bie_in, bfe_in, stamps;
      for (std::size_t t = 0; t < agent.mask.size(); ++t) {
        if (!agent.mask[t]) continue;
        bie_in.push_back(channel_mean(agent.bie[t]));
        bfe_in.push_back(channel_mean(agent.bfe[t]));
        stamps.push_back(a.criteria.values.timestamps[t]);
      }
      a.scored.push_back(i);
      a.scores.push_back(score_agent(bie_in, bfe_in, stamps, now, config.fuzzy));
    }
  });

  in_stage("hypergraph", start, [&] {
    std::vector<double> scores;
    BehaviorCriteria subset;
    subset.timestamps = a.criteria.values.timestamps;
    for (std::size_t r = 0; r < a.scored.size(); ++r) {
      scores.push_back(a.scores[r].score);
      subset.agents.push_back(a.criteria.values.agents[a.scored[r]]);
    }
    a.hypergraph = build_behavior_hypergraph(scores, config.fuzzy.thresholds, config.hyperedge_weights);
    const Eigen::Index width = stacked_width(subset.timestamps.size());
    a.features = node_features(subset, EmbedParams::identity(width)).stacked;
    const Eigen::MatrixXd transform =
        seeded_matrix(width, config.behavior_dim, config.seed, 1.0 / std::sqrt(static_cast<double>(width)));
    a.behavior_vector = spectral_conv(a.hypergraph, a.features, transform);
    if (!a.behavior_vector.allFinite()) throw InvariantError("behavior vector is not finite");
  });
  return a;
}

BehaviorReport run_pipeline(const std::vector<CartesianFrame>& frames, const PipelineConfig& config,
                            const std::string& input_name) {
  config.validate();
  const WindowSchedule schedule = plan_windows(frames, config);
  const std::size_t n = schedule.windows.size();
  std::vector<WindowReport> results(n);
  std::vector<std::exception_ptr> errors(n);

  std::size_t workers = config.workers > 0 ? static_cast<std::size_t>(config.workers)
                                           : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t w = next++; w < n; w = next++) {
      try {
        const WindowPlan& plan = schedule.windows[w];
        results[w] = build_window_report(analyze_window(frames, plan, config), config, frames[plan.first].frame_id);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BehaviorReport report;
  for (std::size_t w = 0; w < n; ++w) results[w].index = static_cast<int>(w);
  report.windows = std::move(results);
  report.population = population_stats(report.windows);
  ReportMeta& meta = report.meta;
  meta.version = kVersion;
  meta.input = input_name;
  meta.config_hash = config_hash(config);
  meta.seed = config.seed;
  meta.dt = config.dt;
  meta.t_h = config.t_h;
  meta.t_f = config.t_f;
  meta.stride = config.stride;
  meta.frames = static_cast<int>(frames.size());
  meta.windows_considered = schedule.considered;
  meta.windows_skipped_gap = schedule.skipped_gap;
  meta.windows_skipped_ego = schedule.skipped_ego;
  return report;
}

BehaviorReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  if (config.input.empty()) throw ConfigError("config: no input file given");
  const auto frames = in_stage("load", 0, [&] { return load_scenes(config.input, config.schema, config.dt); });
  return run_pipeline(frames, config, config.input);
}

std::vector<double> criterion_samples(const std::vector<CartesianFrame>& frames, const PipelineConfig& config,
                                      Criterion criterion) {
  if (criterion == Criterion::Score) throw InputError("calibration samples exist for BIE and BFE only");
  config.validate();
  std::vector<double> samples;
  for (const WindowPlan& plan : plan_windows(frames, config).windows) {
    const Prepared p = prepare(frames, plan, config);
    for (const auto& agent : p.criteria.values.agents) {
      for (std::size_t t = 0; t < agent.mask.size(); ++t) {
        if (!agent.mask[t]) continue;
        samples.push_back(channel_mean(criterion == Criterion::Bie ? agent.bie[t] : agent.bfe[t]));
      }
    }
  }
  return samples;
}

}  // namespace drivebehave
