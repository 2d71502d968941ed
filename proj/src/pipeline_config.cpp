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

#include "drivebehave/pipeline_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "drivebehave/errors.hpp"

namespace drivebehave {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
    throw ConfigError("expected a finite number, got '" + t + "'");
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& text) {
  const std::string t = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected an integer, got '" + t + "'");
  }
  return value;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError("expected true or false, got '" + t + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Trapezoid parse_trapezoid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(parse_double(item));
  if (parts.size() != 4) throw ConfigError("expected four comma-separated breakpoints, got '" + trim(text) + "'");
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::string format_trapezoid(const Trapezoid& t) {
  return format_double(t.a) + ", " + format_double(t.b) + ", " + format_double(t.c) + ", " + format_double(t.d);
}

struct Field {
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

using FieldTable = std::map<std::string, Field>;

template <typename Access>
Field double_field(Access access) {
  return {[access](PipelineConfig& c, const std::string& v) { access(c) = parse_double(v); },
          [access](const PipelineConfig& c) { return format_double(access(c)); }};
}

template <typename Int, typename Access>
Field int_field(Access access) {
  return {[access](PipelineConfig& c, const std::string& v) { access(c) = parse_int<Int>(v); },
          [access](const PipelineConfig& c) { return std::to_string(access(c)); }};
}

template <typename Access>
Field string_field(Access access) {
  return {[access](PipelineConfig& c, const std::string& v) { access(c) = trim(v); },
          [access](const PipelineConfig& c) { return access(c); }};
}

template <typename Access>
Field trapezoid_field(Access access) {
  return {[access](PipelineConfig& c, const std::string& v) { access(c) = parse_trapezoid(v); },
          [access](const PipelineConfig& c) { return format_trapezoid(access(c)); }};
}

const FieldTable& fields() {
  static const FieldTable table = [] {
    FieldTable t;
    t["input"] = string_field([](auto& c) -> auto& { return c.input; });
    t["output"] = string_field([](auto& c) -> auto& { return c.output; });
    t["csv.frame_id"] = string_field([](auto& c) -> auto& { return c.schema.frame_id; });
    t["csv.agent_id"] = string_field([](auto& c) -> auto& { return c.schema.agent_id; });
    t["csv.x"] = string_field([](auto& c) -> auto& { return c.schema.x; });
    t["csv.y"] = string_field([](auto& c) -> auto& { return c.schema.y; });
    t["csv.speed"] = string_field([](auto& c) -> auto& { return c.schema.speed; });
    t["csv.accel"] = string_field([](auto& c) -> auto& { return c.schema.accel; });
    t["window.dt"] = double_field([](auto& c) -> auto& { return c.dt; });
    t["window.t_h"] = int_field<int>([](auto& c) -> auto& { return c.t_h; });
    t["window.t_f"] = int_field<int>([](auto& c) -> auto& { return c.t_f; });
    t["window.stride"] = int_field<int>([](auto& c) -> auto& { return c.stride; });
    t["window.ego_agent"] = {
        [](PipelineConfig& c, const std::string& v) {
          if (trim(v) == "auto") {
            c.ego_agent.reset();
          } else {
            c.ego_agent = parse_int<AgentId>(v);
          }
        },
        [](const PipelineConfig& c) { return c.ego_agent ? std::to_string(*c.ego_agent) : std::string("auto"); }};
    t["run.seed"] = int_field<std::uint64_t>([](auto& c) -> auto& { return c.seed; });
    t["run.workers"] = int_field<int>([](auto& c) -> auto& { return c.workers; });
    t["behavior.dim"] = int_field<int>([](auto& c) -> auto& { return c.behavior_dim; });

    t["dgg.radius"] = double_field([](auto& c) -> auto& { return c.dgg.radius; });
    static const char* feature_names[] = {"rho", "theta", "speed", "accel"};
    for (std::size_t k = 0; k < 4; ++k) {
      t[std::string("dgg.bandwidth_") + feature_names[k]] =
          double_field([k](auto& c) -> auto& { return c.dgg.bandwidths[k]; });
      t[std::string("centrality.gamma_") + feature_names[k]] =
          double_field([k](auto& c) -> auto& { return c.centrality.closeness_gammas[k]; });
      t[std::string("centrality.eta_") + feature_names[k]] =
          double_field([k](auto& c) -> auto& { return c.centrality.closeness_etas[k]; });
    }
    t["dgg.mask_kernel"] = {[](PipelineConfig& c, const std::string& v) { c.dgg.mask_kernel = parse_bool(v); },
                            [](const PipelineConfig& c) { return std::string(c.dgg.mask_kernel ? "true" : "false"); }};
    t["centrality.epsilon"] = double_field([](auto& c) -> auto& { return c.centrality.epsilon; });
    t["centrality.power_iter_tol"] =
        double_field([](auto& c) -> auto& { return c.centrality.power_iter_tol; });
    t["centrality.power_iter_max"] =
        int_field<int>([](auto& c) -> auto& { return c.centrality.power_iter_max; });
    t["centrality.distance_floor"] =
        double_field([](auto& c) -> auto& { return c.centrality.distance_floor; });

    t["fuzzy.q"] = double_field([](auto& c) -> auto& { return c.fuzzy.q; });
    t["fuzzy.o"] = double_field([](auto& c) -> auto& { return c.fuzzy.o; });
    t["fuzzy.h"] = double_field([](auto& c) -> auto& { return c.fuzzy.h; });
    t["fuzzy.beta"] = double_field([](auto& c) -> auto& { return c.fuzzy.beta; });
    t["fuzzy.w_bie"] = double_field([](auto& c) -> auto& { return c.fuzzy.w_bie_base; });
    t["fuzzy.w_bfe"] = double_field([](auto& c) -> auto& { return c.fuzzy.w_bfe_base; });
    t["fuzzy.level_low"] = double_field([](auto& c) -> auto& { return c.fuzzy.thresholds.low; });
    t["fuzzy.level_high"] = double_field([](auto& c) -> auto& { return c.fuzzy.thresholds.high; });
    static const char* level_names[] = {"L", "M", "H"};
    for (std::size_t l = 0; l < 3; ++l) {
      t[std::string("fuzzy.bie.") + level_names[l]] =
          trapezoid_field([l](auto& c) -> auto& { return c.fuzzy.bie.levels[l]; });
      t[std::string("fuzzy.bfe.") + level_names[l]] =
          trapezoid_field([l](auto& c) -> auto& { return c.fuzzy.bfe.levels[l]; });
      t[std::string("fuzzy.score.") + level_names[l]] =
          trapezoid_field([l](auto& c) -> auto& { return c.fuzzy.score.levels[l]; });
      t[std::string("hypergraph.weight_") + level_names[l]] = double_field(
          [l](auto& c) -> auto& { return c.hyperedge_weights[static_cast<Eigen::Index>(l)]; });
    }
    return t;
  }();
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("config: window.dt must be positive");
  if (t_h < 2) throw ConfigError("config: window.t_h must be at least 2");
  if (t_f < 0) throw ConfigError("config: window.t_f must be non-negative");
  if (stride < 1) throw ConfigError("config: window.stride must be at least 1");
  if (workers < 0) throw ConfigError("config: run.workers must be non-negative");
  if (behavior_dim < 1) throw ConfigError("config: behavior.dim must be at least 1");
  if (schema.frame_id.empty() || schema.agent_id.empty() || schema.x.empty() || schema.y.empty()) {
    throw ConfigError("config: required CSV column names must not be empty");
  }
  for (Eigen::Index e = 0; e < 3; ++e) {
    if (!(hyperedge_weights[e] >= 0.0)) throw ConfigError("config: hyperedge weights must be nonnegative");
  }
  dgg.validate();
  centrality.validate();
  fuzzy.validate();
}

PipelineConfig parse_config(std::istream& in, const std::string& source) {
  PipelineConfig config;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "repeated key '" + key + "'");
    try {
      it->second.set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string dump_config(const PipelineConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

std::string config_hash(const PipelineConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& [key, field] : fields()) {
    if (key == "input" || key == "output" || key == "run.workers") continue;
    const std::string line = key + " = " + field.get(config) + "\n";
    for (unsigned char ch : line) {
      hash ^= ch;
      hash *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace drivebehave
