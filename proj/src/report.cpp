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

#include "drivebehave/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drivebehave/errors.hpp"

namespace drivebehave {

using nlohmann::json;

double round_significant(double value) {
  if (!std::isfinite(value)) throw InvariantError("report: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw InputError("unknown report format '" + name + "' (expected json or csv)");
}

PopulationStats population_stats(const std::vector<WindowReport>& windows) {
  PopulationStats stats;
  for (const auto& window : windows) {
    for (const auto& agent : window.agents) {
      if (!agent.scored) continue;
      ++stats.scored;
      ++stats.level_counts[static_cast<std::size_t>(agent.level)];
    }
  }
  if (stats.scored > 0) {
    for (std::size_t l = 0; l < 3; ++l) {
      stats.level_proportions[l] = static_cast<double>(stats.level_counts[l]) / static_cast<double>(stats.scored);
    }
  }
  return stats;
}

namespace {

json rounded(double v) { return round_significant(v); }

json rounded(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(round_significant(v));
  return out;
}

json summary_json(const SeriesSummary& s) { return {{"mean", rounded(s.mean)}, {"max", rounded(s.max)}}; }

SeriesSummary summary_from(const json& j) { return {j.at("mean").get<double>(), j.at("max").get<double>()}; }

json agent_json(const AgentReport& a) {
  json j;
  j["id"] = a.id;
  j["valid_frames"] = a.valid_frames;
  j["scored"] = a.scored;
  if (a.scored) {
    j["score"] = rounded(a.score);
    j["level"] = to_string(a.level);
    j["aggregated_pair"] = {{"mu", rounded(a.mu_agg)}, {"nu", rounded(a.nu_agg)}};
  } else {
    j["score"] = nullptr;
    j["level"] = nullptr;
    j["aggregated_pair"] = nullptr;
  }
  j["centrality"] = {{"degree", summary_json(a.degree)},
                     {"closeness", summary_json(a.closeness)},
                     {"eigenvector", summary_json(a.eigen)}};
  j["bie"] = summary_json(a.bie);
  j["bfe"] = summary_json(a.bfe);
  j["bie_series"] = rounded(a.bie_series);
  j["bfe_series"] = rounded(a.bfe_series);
  j["behavior_vector"] = rounded(a.behavior_vector);
  return j;
}

AgentReport agent_from(const json& j) {
  AgentReport a;
  a.id = j.at("id").get<AgentId>();
  a.valid_frames = j.at("valid_frames").get<int>();
  a.scored = j.at("scored").get<bool>();
  if (a.scored) {
    a.score = j.at("score").get<double>();
    a.level = level_from_string(j.at("level").get<std::string>());
    a.mu_agg = j.at("aggregated_pair").at("mu").get<double>();
    a.nu_agg = j.at("aggregated_pair").at("nu").get<double>();
  }
  const json& c = j.at("centrality");
  a.degree = summary_from(c.at("degree"));
  a.closeness = summary_from(c.at("closeness"));
  a.eigen = summary_from(c.at("eigenvector"));
  a.bie = summary_from(j.at("bie"));
  a.bfe = summary_from(j.at("bfe"));
  a.bie_series = j.at("bie_series").get<std::vector<double>>();
  a.bfe_series = j.at("bfe_series").get<std::vector<double>>();
  a.behavior_vector = j.at("behavior_vector").get<std::vector<double>>();
  return a;
}

json levels_json(const auto& values, auto convert) {
  return {{"L", convert(values[0])}, {"M", convert(values[1])}, {"H", convert(values[2])}};
}

}  // namespace

std::string report_to_json(const BehaviorReport& report) {
  json root;
  const ReportMeta& m = report.meta;
  root["meta"] = {{"tool", m.tool},
                  {"version", m.version},
                  {"input", m.input},
                  {"config_hash", m.config_hash},
                  {"seed", m.seed},
                  {"dt", rounded(m.dt)},
                  {"t_h", m.t_h},
                  {"t_f", m.t_f},
                  {"stride", m.stride},
                  {"frames", m.frames},
                  {"windows_considered", m.windows_considered},
                  {"windows_skipped_gap", m.windows_skipped_gap},
                  {"windows_skipped_ego", m.windows_skipped_ego}};
  json windows = json::array();
  for (const auto& w : report.windows) {
    json jw = {{"index", w.index},         {"start_frame", w.start_frame},   {"end_frame", w.end_frame},
               {"start_time", rounded(w.start_time)}, {"end_time", rounded(w.end_time)}, {"ego", w.ego}};
    json agents = json::array();
    for (const auto& a : w.agents) agents.push_back(agent_json(a));
    jw["agents"] = std::move(agents);
    windows.push_back(std::move(jw));
  }
  root["windows"] = std::move(windows);
  const PopulationStats& p = report.population;
  root["population"] = {{"scored", p.scored},
                        {"level_counts", levels_json(p.level_counts, [](int v) { return json(v); })},
                        {"level_proportions", levels_json(p.level_proportions, [](double v) { return rounded(v); })}};
  return root.dump(2) + "\n";
}

BehaviorReport report_from_json(const std::string& text) {
  BehaviorReport report;
  try {
    const json root = json::parse(text);
    const json& m = root.at("meta");
    ReportMeta& meta = report.meta;
    meta.tool = m.at("tool").get<std::string>();
    meta.version = m.at("version").get<std::string>();
    meta.input = m.at("input").get<std::string>();
    meta.config_hash = m.at("config_hash").get<std::string>();
    meta.seed = m.at("seed").get<std::uint64_t>();
    meta.dt = m.at("dt").get<double>();
    meta.t_h = m.at("t_h").get<int>();
    meta.t_f = m.at("t_f").get<int>();
    meta.stride = m.at("stride").get<int>();
    meta.frames = m.at("frames").get<int>();
    meta.windows_considered = m.at("windows_considered").get<int>();
    meta.windows_skipped_gap = m.at("windows_skipped_gap").get<int>();
    meta.windows_skipped_ego = m.at("windows_skipped_ego").get<int>();
    for (const json& jw : root.at("windows")) {
      WindowReport w;
      w.index = jw.at("index").get<int>();
      w.start_frame = jw.at("start_frame").get<std::int64_t>();
      w.end_frame = jw.at("end_frame").get<std::int64_t>();
      w.start_time = jw.at("start_time").get<double>();
      w.end_time = jw.at("end_time").get<double>();
      w.ego = jw.at("ego").get<AgentId>();
      for (const json& ja : jw.at("agents")) w.agents.push_back(agent_from(ja));
      report.windows.push_back(std::move(w));
    }
    const json& p = root.at("population");
    report.population.scored = p.at("scored").get<int>();
    static const char* names[] = {"L", "M", "H"};
    for (std::size_t l = 0; l < 3; ++l) {
      report.population.level_counts[l] = p.at("level_counts").at(names[l]).get<int>();
      report.population.level_proportions[l] = p.at("level_proportions").at(names[l]).get<double>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report: malformed JSON: ") + e.what());
  }
  return report;
}

std::string report_to_csv(const BehaviorReport& report) {
  std::ostringstream out;
  out << "window,start_frame,end_frame,ego,agent_id,valid_frames,scored,score,level,mu_agg,nu_agg,"
         "degree_mean,closeness_mean,eigenvector_mean,bie_mean,bie_max,bfe_mean,bfe_max\n";
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", round_significant(v));
    return std::string(buf);
  };
  for (const auto& w : report.windows) {
    for (const auto& a : w.agents) {
      out << w.index << ',' << w.start_frame << ',' << w.end_frame << ',' << w.ego << ',' << a.id << ','
          << a.valid_frames << ',' << (a.scored ? "true" : "false") << ',';
      if (a.scored) {
        out << num(a.score) << ',' << to_string(a.level) << ',' << num(a.mu_agg) << ',' << num(a.nu_agg) << ',';
      } else {
        out << ",,,,";
      }
      out << num(a.degree.mean) << ',' << num(a.closeness.mean) << ',' << num(a.eigen.mean) << ','
          << num(a.bie.mean) << ',' << num(a.bie.max) << ',' << num(a.bfe.mean) << ',' << num(a.bfe.max) << '\n';
    }
  }
  return out.str();
}

void emit_report(const BehaviorReport& report, const std::string& path, ReportFormat format) {
  const std::string text = format == ReportFormat::Json ? report_to_json(report) : report_to_csv(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report file '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing report file '" + path + "'");
}

}  // namespace drivebehave
