// Copyright 2026 The modarena Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;  // stdout followed by stderr
};

Outcome RunCli(const std::string& args) {
  const std::string cmd = std::string(MODARENA_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path FreshDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("modarena_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(CliTest, ListTasksPrintsAllTasks) {
  const Outcome o = RunCli("list-tasks");
  ASSERT_EQ(o.code, 0);
  std::istringstream in(o.out);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 256);
  EXPECT_NE(o.out.find("255\tPanda_Dumbbell_ObjectWall_Shelf"), std::string::npos);
}

TEST(CliTest, InvalidElementIsConfigErrorListingNames) {
  const Outcome o = RunCli("make-split --benchmark restricted:Hammer");
  EXPECT_EQ(o.code, 2);
  for (const char* name : {"IIWA", "Jaco", "Gen3", "Panda", "Box", "HollowBox", "Plate",
                           "Dumbbell", "None", "ObjectDoor", "GoalWall", "ObjectWall",
                           "PickPlace", "Push", "Trashcan", "Shelf"}) {
    EXPECT_NE(o.out.find(name), std::string::npos) << name;
  }
}

TEST(CliTest, UnknownFlagIsConfigError) {
  EXPECT_EQ(RunCli("train --learning-rate 3").code, 2);
  EXPECT_EQ(RunCli("").code, 2);
}

TEST(CliTest, ReportOnEmptyDirectoryIsMissingArtifact) {
  const fs::path d = FreshDir("empty");
  fs::create_directories(d);
  EXPECT_EQ(RunCli("report " + d.string()).code, 5);
  fs::remove_all(d);
}

TEST(CliTest, MakeSplitWritesManifest) {
  const fs::path d = FreshDir("split");
  fs::create_directories(d);
  const Outcome o =
      RunCli("make-split --benchmark smaller_scale:Plate --seed 4 -o " + (d / "s.json").string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(d / "s.json"));
  EXPECT_NE(o.out.find("32 train, 32 test"), std::string::npos) << o.out;
  fs::remove_all(d);
}

TEST(CliTest, TrainEvaluateAndReport) {
  const fs::path d = FreshDir("train");
  fs::create_directories(d);
  {
    std::ofstream cfg(d / "cfg.json");
    cfg << R"({"arena": {"horizon": 20}, "ppo": {"pi_iters": 1, "v_iters": 1,
              "multi_task_hidden": 8}})";
  }
  const std::string run = (d / "run").string();
  const Outcome t = RunCli("train -c " + (d / "cfg.json").string() +
                        " --benchmark smaller_scale:Push --train-count 2 --agent multi_task"
                        " --steps-per-update 40 --total-steps 40 --eval-episodes 1"
                        " --curve-eval-episodes 1 --deterministic -o " + run);
  ASSERT_EQ(t.code, 0) << t.out;
  EXPECT_EQ(RunCli("eval " + run).code, 0);
  EXPECT_EQ(RunCli("zeroshot " + run).code, 0);
  const Outcome r = RunCli("report " + run);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("multi_task"), std::string::npos);
  EXPECT_EQ(RunCli("analyze maxsuccess " + run).code, 0);
  // Same directory, different configuration.
  EXPECT_EQ(RunCli("train -c " + (d / "cfg.json").string() +
                " --benchmark smaller_scale:Push --train-count 3 --agent multi_task"
                " --steps-per-update 40 --total-steps 40 -o " + run)
                .code,
            2);
  fs::remove_all(d);
}

}  // namespace
