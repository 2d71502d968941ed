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

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "drivebehave/errors.hpp"
#include "drivebehave/fuzzy_inference.hpp"
#include "drivebehave/pipeline.hpp"
#include "drivebehave/report.hpp"

namespace {

using namespace drivebehave;

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

PipelineConfig config_from(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

int analyze(const std::string& input, const std::string& config_path, const std::string& out,
            const std::string& format, std::optional<int> stride, std::optional<std::uint64_t> seed,
            std::optional<int> workers) {
  PipelineConfig config = config_from(config_path);
  config.input = input;
  config.output = out;
  if (stride) config.stride = *stride;
  if (seed) config.seed = *seed;
  if (workers) config.workers = *workers;
  const ReportFormat fmt = report_format_from_string(format);
  const BehaviorReport report = run_pipeline(config);
  emit_report(report, out, fmt);
  std::cerr << "analyzed " << report.windows.size() << " windows, " << report.population.scored
            << " scored agents -> " << out << "\n";
  return 0;
}

int calibrate(const std::string& input, const std::string& config_path, const std::string& criterion_name,
              int k_min, int k_max, const std::string& out) {
  PipelineConfig config = config_from(config_path);
  config.input = input;
  Criterion criterion = Criterion::Bie;
  if (criterion_name == "bfe") {
    criterion = Criterion::Bfe;
  } else if (criterion_name != "bie") {
    throw InputError("unknown criterion '" + criterion_name + "' (expected bie or bfe)");
  }
  const auto frames = load_scenes(config.input, config.schema, config.dt);
  const auto samples = criterion_samples(frames, config, criterion);
  const Calibration cal = calibrate_boundaries(samples, k_min, k_max, config.seed);

  nlohmann::json j;
  j["criterion"] = criterion_name;
  j["samples"] = samples.size();
  j["elbow_k"] = cal.elbow_k;
  j["elbow_centroids"] = cal.elbow_centroids;
  nlohmann::json curve = nlohmann::json::array();
  for (std::size_t i = 0; i < cal.ks.size(); ++i) {
    curve.push_back({{"k", cal.ks[i]}, {"sse", cal.sse[i]}, {"centroids", cal.centroids[i]}});
  }
  j["curve"] = std::move(curve);
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out + "' for writing");
    file << text;
    if (!file) throw IoError("failed writing '" + out + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driving-behavior analysis over multi-agent trajectory CSVs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(drivebehave::kVersion));

  std::string input, config_path, out, format = "json";
  std::optional<int> stride, workers;
  std::optional<std::uint64_t> seed;
  auto* analyze_cmd = app.add_subcommand("analyze", "Score every agent of every window and write a report");
  analyze_cmd->add_option("--input", input, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", out, "Report path")->required();
  analyze_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  analyze_cmd->add_option("--stride", stride, "Frames between window starts")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", seed, "Seed of the fixed behavior transform");
  analyze_cmd->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  std::string criterion = "bie", cal_out;
  int k_min = 1, k_max = 6;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Elbow curve of 1-D k-means over BIE or BFE samples");
  calibrate_cmd->add_option("--input", input, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  calibrate_cmd->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  calibrate_cmd->add_option("--criterion", criterion, "bie or bfe")->check(CLI::IsMember({"bie", "bfe"}));
  calibrate_cmd->add_option("--kmin", k_min, "Smallest k")->check(CLI::PositiveNumber);
  calibrate_cmd->add_option("--kmax", k_max, "Largest k")->check(CLI::PositiveNumber);
  calibrate_cmd->add_option("--out", cal_out, "Write the curve here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*analyze_cmd) return analyze(input, config_path, out, format, stride, seed, workers);
    return calibrate(input, config_path, criterion, k_min, k_max, cal_out);
  } catch (const drivebehave::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
