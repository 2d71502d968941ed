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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "scenarios.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("drivebehave_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  static std::string read(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(DRIVEBEHAVE_CLI) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string scene_csv(int agents, int frames, bool kinematics = true) const {
    return write("scene.csv",
                 drivebehave::testing::to_csv(drivebehave::testing::mixed_traffic_scene(21, agents, frames, 0.2),
                                              kinematics));
  }

  fs::path dir_;
};

TEST_F(Cli, Version) {
  EXPECT_EQ(run("--version"), 0);
  EXPECT_NE(read(path("stdout")).find("0.1.0"), std::string::npos);
}

TEST_F(Cli, AnalyzeJsonIsDeterministic) {
  const std::string input = scene_csv(6, 24);
  ASSERT_EQ(run("analyze --input " + input + " --out " + path("a.json") + " --stride 4"), 0) << read(path("stderr"));
  ASSERT_EQ(run("analyze --input " + input + " --out " + path("b.json") + " --stride 4 --workers 3"), 0);
  const std::string a = read(path("a.json"));
  EXPECT_EQ(a, read(path("b.json")));
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["meta"]["stride"], 4);
  EXPECT_EQ(j["windows"].size(), 3u);  // starts 0, 4, 8
}

TEST_F(Cli, AnalyzeCsvHasOneRowPerAgentAndWindow) {
  const std::string input = scene_csv(5, 20, false);
  const std::string config = write("run.conf", "window.t_h = 9\nwindow.stride = 5\n");
  ASSERT_EQ(run("analyze --input " + input + " --config " + config + " --format csv --out " + path("r.csv")), 0)
      << read(path("stderr"));
  std::istringstream in(read(path("r.csv")));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5 * 3);  // starts 0, 5, 10
}

TEST_F(Cli, InputErrorsExitWithOne) {
  const std::string broken = write("broken.csv", "frame_id,agent_id,x\n0,1,2\n");
  EXPECT_EQ(run("analyze --input " + broken + " --out " + path("r.json")), 1);
  EXPECT_NE(read(path("stderr")).find("schema"), std::string::npos);

  const std::string input = scene_csv(4, 20);
  const std::string config = write("bad.conf", "window.t_h = 10\nfuzzy.nope = 1\n");
  EXPECT_EQ(run("analyze --input " + input + " --config " + config + " --out " + path("r.json")), 1);
  EXPECT_NE(read(path("stderr")).find("bad.conf:2"), std::string::npos);

  EXPECT_EQ(run("analyze --input " + path("missing.csv") + " --out " + path("r.json")), 1);
  EXPECT_EQ(run("analyze --input " + input + " --out " + path("r.json") + " --format xml"), 1);
  EXPECT_EQ(run("analyze --input " + input + " --out /nonexistent-dir/r.json"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST_F(Cli, CalibrateWritesElbowCurve) {
  const std::string input = scene_csv(8, 30);
  ASSERT_EQ(run("calibrate --input " + input + " --criterion bfe --kmin 1 --kmax 4 --out " + path("cal.json")), 0)
      << read(path("stderr"));
  const auto j = nlohmann::json::parse(read(path("cal.json")));
  EXPECT_EQ(j["criterion"], "bfe");
  EXPECT_EQ(j["curve"].size(), 4u);
  EXPECT_GE(j["elbow_k"].get<int>(), 1);
  EXPECT_LE(j["elbow_k"].get<int>(), 4);
  double previous = 1e300;
  for (const auto& point : j["curve"]) {
    EXPECT_LE(point["sse"].get<double>(), previous + 1e-12);
    previous = point["sse"].get<double>();
  }
}

TEST_F(Cli, ShippedConfigParses) {
  const std::string input = scene_csv(4, 20);
  const std::string config = std::string(DRIVEBEHAVE_SOURCE_DIR) + "/configs/default.conf";
  EXPECT_EQ(run("analyze --input " + input + " --config " + config + " --out " + path("r.json")), 0)
      << read(path("stderr"));
}

}  // namespace
