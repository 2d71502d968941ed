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

#include "drivebehave/scene_loader.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <type_traits>

#include "drivebehave/errors.hpp"

namespace drivebehave {

const AgentRecord* CartesianFrame::find(AgentId id) const {
  const auto it = std::lower_bound(agents.begin(), agents.end(), id,
                                   [](const AgentRecord& r, AgentId v) { return r.id < v; });
  return it != agents.end() && it->id == id ? &*it : nullptr;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cell = first == std::string::npos ? std::string() : cell.substr(first, last - first + 1);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    cells.push_back(std::move(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

template <typename T>
std::optional<T> parse_cell(const std::string& cell) {
  T value{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

struct Observation {
  std::int64_t frame_id;
  AgentRecord record;
};

void derive_missing_kinematics(std::vector<Observation>& obs, double dt, bool have_speed, bool have_accel) {
  // obs holds one agent sorted by frame id.
  std::size_t begin = 0;
  while (begin < obs.size()) {
    std::size_t end = begin + 1;
    while (end < obs.size() && obs[end].frame_id == obs[end - 1].frame_id + 1) ++end;
    const std::size_t len = end - begin;
    std::vector<Kinematics> kin(len);
    if (len >= 3) {
      std::vector<Eigen::Vector2d> positions;
      for (std::size_t k = begin; k < end; ++k) positions.emplace_back(obs[k].record.x, obs[k].record.y);
      kin = derive_kinematics(positions, dt);
    } else if (len == 2) {
      const double dx = obs[begin + 1].record.x - obs[begin].record.x;
      const double dy = obs[begin + 1].record.y - obs[begin].record.y;
      kin[0].speed = kin[1].speed = std::hypot(dx, dy) / dt;
    }
    for (std::size_t k = 0; k < len; ++k) {
      if (!have_speed) obs[begin + k].record.speed = kin[k].speed;
      if (!have_accel) obs[begin + k].record.accel = kin[k].accel;
    }
    begin = end;
  }
}

}  // namespace

std::vector<CartesianFrame> parse_scenes(std::istream& in, const CsvSchema& schema, double dt,
                                         const std::string& source) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("scene loader: dt must be positive");
  std::string line;
  int number = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_row(line);
    break;
  }
  if (header.empty()) throw InputError(source + ": empty file, expected a header row");

  auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw InputError(source + ": schema error, missing required column '" + name + "'");
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_frame = *column(schema.frame_id, true);
  const std::size_t c_agent = *column(schema.agent_id, true);
  const std::size_t c_x = *column(schema.x, true);
  const std::size_t c_y = *column(schema.y, true);
  const auto c_speed = schema.speed.empty() ? std::nullopt : column(schema.speed, false);
  const auto c_accel = schema.accel.empty() ? std::nullopt : column(schema.accel, false);

  std::map<AgentId, std::vector<Observation>> tracks;
  std::map<std::pair<std::int64_t, AgentId>, int> first_line;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InputError(where + "expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    auto number_at = [&](std::size_t c) {
      const auto v = parse_cell<double>(cells[c]);
      if (!v) throw InputError(where + "column '" + header[c] + "' is not a finite number: '" + cells[c] + "'");
      return *v;
    };
    auto integer_at = [&](std::size_t c) {
      const auto v = parse_cell<std::int64_t>(cells[c]);
      if (!v) throw InputError(where + "column '" + header[c] + "' is not an integer: '" + cells[c] + "'");
      return *v;
    };
    Observation obs;
    obs.frame_id = integer_at(c_frame);
    obs.record.id = integer_at(c_agent);
    obs.record.x = number_at(c_x);
    obs.record.y = number_at(c_y);
    if (c_speed) obs.record.speed = number_at(*c_speed);
    if (c_accel) obs.record.accel = number_at(*c_accel);
    const auto [it, inserted] = first_line.emplace(std::make_pair(obs.frame_id, obs.record.id), number);
    if (!inserted) {
      throw InputError(where + "duplicate observation of agent " + std::to_string(obs.record.id) + " in frame " +
                       std::to_string(obs.frame_id) + " (first at line " + std::to_string(it->second) + ")");
    }
    tracks[obs.record.id].push_back(obs);
  }

  std::map<std::int64_t, CartesianFrame> frames;
  for (auto& [id, obs] : tracks) {
    std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) { return a.frame_id < b.frame_id; });
    if (!c_speed || !c_accel) derive_missing_kinematics(obs, dt, c_speed.has_value(), c_accel.has_value());
    for (const auto& o : obs) {
      CartesianFrame& frame = frames[o.frame_id];
      frame.frame_id = o.frame_id;
      frame.timestamp = static_cast<double>(o.frame_id) * dt;
      frame.agents.push_back(o.record);
    }
  }
  std::vector<CartesianFrame> out;
  out.reserve(frames.size());
  // Tracks were visited in ascending id order, so every frame's agents are already sorted.
  for (auto& [id, frame] : frames) out.push_back(std::move(frame));
  return out;
}

std::vector<CartesianFrame> load_scenes(const std::string& path, const CsvSchema& schema, double dt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file '" + path + "'");
  return parse_scenes(in, schema, dt, path);
}

SceneFrame to_scene_frame(const CartesianFrame& frame, AgentId ego) {
  const AgentRecord* anchor = frame.find(ego);
  if (!anchor) {
    throw InputError("ego agent " + std::to_string(ego) + " absent from frame " + std::to_string(frame.frame_id));
  }
  SceneFrame scene;
  scene.timestamp = frame.timestamp;
  scene.ego = {anchor->id, 0.0, 0.0, anchor->speed, anchor->accel};
  for (const auto& agent : frame.agents) {
    if (agent.id == ego) continue;
    const double dx = agent.x - anchor->x;
    const double dy = agent.y - anchor->y;
    const double rho = std::hypot(dx, dy);
    const double theta = rho == 0.0 ? 0.0 : normalize_angle(std::atan2(dy, dx));
    scene.neighbors.push_back({agent.id, rho, theta, agent.speed, agent.accel});
  }
  return scene;
}

}  // namespace drivebehave
