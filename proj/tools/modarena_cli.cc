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

// Command-line driver: splits, training, evaluation, analyses and reports.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "modarena/checkpoint.h"
#include "modarena/experiment.h"
#include "modarena/ppo.h"
#include "modarena/task_space.h"

namespace {

using modarena::ConfigError;
using modarena::ExperimentConfig;

enum ExitCode {
  kOk = 0,
  kUnexpected = 1,
  kConfig = 2,
  kDivergence = 3,
  kIo = 4,
  kMissing = 5,
};

struct TrainFlags {
  std::string config_file;
  std::optional<std::string> name;
  std::optional<std::string> benchmark;
  std::optional<std::string> agent;
  std::optional<int> train_count;
  std::optional<std::uint64_t> split_seed;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output_dir;
  bool deterministic = false;
  std::optional<int> jobs;
  std::optional<int> eval_episodes;
  std::optional<int> curve_eval_episodes;
  std::optional<int> eval_interval;
  std::optional<std::int64_t> steps_per_update;
  std::optional<std::int64_t> total_steps;
  std::optional<std::string> reward_mode;
  bool no_eval = false;
};

ExperimentConfig BuildConfig(const TrainFlags& f) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config_file.empty()) j = modarena::ReadJsonFile(f.config_file);
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  if (f.name) j["name"] = *f.name;
  if (f.benchmark) j["benchmark"] = *f.benchmark;
  if (f.agent) j["agent"] = *f.agent;
  if (f.train_count) j["train_count"] = *f.train_count;
  if (f.split_seed) j["split_seed"] = *f.split_seed;
  if (!f.seeds.empty()) j["seeds"] = f.seeds;
  if (f.output_dir) j["output_dir"] = *f.output_dir;
  if (f.deterministic) j["deterministic"] = true;
  if (f.jobs) j["jobs"] = *f.jobs;
  if (f.eval_episodes) j["eval_episodes"] = *f.eval_episodes;
  if (f.curve_eval_episodes) j["curve_eval_episodes"] = *f.curve_eval_episodes;
  if (f.eval_interval) j["eval_interval"] = *f.eval_interval;
  if (f.reward_mode) j["reward_mode"] = *f.reward_mode;
  if (f.steps_per_update) j["ppo"]["steps_per_task_per_update"] = *f.steps_per_update;
  if (f.total_steps) j["ppo"]["total_steps_per_task"] = *f.total_steps;
  ExperimentConfig c = ExperimentConfig::FromJson(j);
  c.Validate();
  return c;
}

int ListTasks(bool as_json) {
  const auto tasks = modarena::EnumerateTasks();
  if (as_json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : tasks) j.push_back({{"id", t.id()}, {"name", t.ToString()}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& t : tasks) std::cout << t.id() << "\t" << t.ToString() << "\n";
  }
  return kOk;
}

int MakeSplitCommand(const std::string& benchmark, std::optional<int> train_count,
                     std::uint64_t seed, const std::string& out) {
  modarena::SplitKind kind;
  std::optional<modarena::AxisElement> element;
  modarena::ParseBenchmark(benchmark, &kind, &element);
  if (kind == modarena::SplitKind::kUniform && !train_count) train_count = 224;
  modarena::BenchmarkSplit split;
  try {
    split = modarena::MakeSplit(kind, element, train_count, seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const nlohmann::json j = modarena::SplitToJson(split);
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    modarena::WriteJsonFile(out, j);
    std::cerr << "wrote " << out << " (" << split.train.size() << " train, "
              << split.test.size() << " test)\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional multi-task manipulation benchmark"};
  app.require_subcommand(1);

  bool list_json = false;
  auto* list = app.add_subcommand("list-tasks", "Print all 256 tasks");
  list->add_flag("--json", list_json, "Emit JSON");

  std::string split_benchmark = "full";
  std::optional<int> split_count;
  std::uint64_t split_seed = 0;
  std::string split_out;
  auto* split = app.add_subcommand("make-split", "Build a train/test split manifest");
  split->add_option("--benchmark", split_benchmark,
                    "full | smaller_scale:<element> | restricted:<element>");
  split->add_option("--train-count", split_count, "Number of training tasks");
  split->add_option("--seed", split_seed, "Split seed");
  split->add_option("-o,--out", split_out, "Output file (default stdout)");

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Train, then evaluate, an agent");
  train->add_option("-c,--config", tf.config_file, "JSON experiment config");
  train->add_option("--name", tf.name, "Run name");
  train->add_option("--benchmark", tf.benchmark,
                    "full | smaller_scale:<element> | restricted:<element>");
  train->add_option("--agent", tf.agent, "single_task | multi_task | compositional");
  train->add_option("--train-count", tf.train_count, "Number of training tasks");
  train->add_option("--split-seed", tf.split_seed, "Split seed");
  train->add_option("--seeds", tf.seeds, "Training seeds");
  train->add_option("-o,--output-dir", tf.output_dir,
                    std::string("Run directory (default $") +
                        modarena::kOutputRootEnv + "/<name>)");
  train->add_flag("--deterministic", tf.deterministic, "Sequential collection");
  train->add_option("-j,--jobs", tf.jobs, "Worker threads");
  train->add_option("--eval-episodes", tf.eval_episodes, "Episodes per task (M)");
  train->add_option("--curve-eval-episodes", tf.curve_eval_episodes,
                    "Episodes per task for learning-curve points");
  train->add_option("--eval-interval", tf.eval_interval,
                    "Updates between learning-curve points (0 = off)");
  train->add_option("--steps-per-update", tf.steps_per_update,
                    "Environment steps per task per update");
  train->add_option("--total-steps", tf.total_steps, "Environment steps per task");
  train->add_option("--reward-mode", tf.reward_mode, "dense | sparse");
  train->add_flag("--no-eval", tf.no_eval, "Skip the final evaluation");

  std::string run_dir;
  auto* eval = app.add_subcommand("eval", "Evaluate a run on its training tasks");
  eval->add_option("run", run_dir, "Run directory")->required();
  auto* zeroshot = app.add_subcommand("zeroshot", "Evaluate a run on its test tasks");
  zeroshot->add_option("run", run_dir, "Run directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Result analyses");
  analyze->require_subcommand(1);
  std::string reference_dir;
  int analysis_episodes = 10;
  auto* r2 = analyze->add_subcommand("r2", "Best-matching single-task policy R^2");
  r2->add_option("run", run_dir, "Generalizing-agent run directory")->required();
  r2->add_option("--single-task-run", reference_dir, "Single-task run directory")
      ->required();
  r2->add_option("--episodes", analysis_episodes, "Episodes per evaluation");
  int swap_tasks = 0;
  auto* swap = analyze->add_subcommand("swap", "Descriptor-swap ranking");
  swap->add_option("run", run_dir, "Run directory")->required();
  swap->add_option("--max-tasks", swap_tasks, "Limit on tasks (0 = all train tasks)");
  swap->add_option("--episodes", analysis_episodes, "Episodes per evaluation");
  std::vector<std::string> max_runs;
  std::string max_out;
  auto* maxs = analyze->add_subcommand("maxsuccess", "Max success per task");
  maxs->add_option("runs", max_runs, "Run directories")->required();
  maxs->add_option("-o,--out", max_out, "Output JSON file");
  auto* breakdown =
      analyze->add_subcommand("breakdown", "Shared-element zero-shot breakdown");
  breakdown->add_option("run", run_dir, "Restricted-benchmark run directory")
      ->required();

  auto* report = app.add_subcommand("report", "Summarize a run");
  report->add_option("run", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*list) return ListTasks(list_json);
    if (*split) return MakeSplitCommand(split_benchmark, split_count, split_seed, split_out);
    if (*train) {
      modarena::RunExperiment(BuildConfig(tf), std::cerr, !tf.no_eval);
      return kOk;
    }
    if (*eval) {
      modarena::RunEvaluation(run_dir, std::cerr);
      return kOk;
    }
    if (*zeroshot) {
      modarena::RunZeroShot(run_dir, std::cerr);
      return kOk;
    }
    if (*r2) {
      std::cout << modarena::AnalyzeR2(run_dir, reference_dir, analysis_episodes).dump(2)
                << "\n";
      return kOk;
    }
    if (*swap) {
      std::cout << modarena::AnalyzeSwap(run_dir, swap_tasks, analysis_episodes).dump(2)
                << "\n";
      return kOk;
    }
    if (*maxs) {
      std::vector<std::filesystem::path> dirs(max_runs.begin(), max_runs.end());
      std::cout << modarena::AnalyzeMaxSuccess(dirs, max_out).dump(2) << "\n";
      return kOk;
    }
    if (*breakdown) {
      std::cout << modarena::AnalyzeBreakdown(run_dir).dump(2) << "\n";
      return kOk;
    }
    if (*report) {
      std::cout << modarena::Report(run_dir);
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const modarena::TrainingDivergence& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return kDivergence;
  } catch (const modarena::MissingArtifact& e) {
    std::cerr << "missing artifact: " << e.what() << "\n";
    return kMissing;
  } catch (const modarena::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}
