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

#ifndef MODARENA_EXPERIMENT_H_
#define MODARENA_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "modarena/arena.h"
#include "modarena/policy.h"
#include "modarena/ppo.h"
#include "modarena/rewards.h"
#include "modarena/task_space.h"

namespace modarena {

// Raised for invalid or inconsistent experiment settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kOutputRootEnv = "MODARENA_OUTPUT_ROOT";

struct ExperimentConfig {
  std::string name = "run";
  // "full", "smaller_scale:<element>" or "restricted:<element>".
  std::string benchmark = "full";
  AgentKind agent = AgentKind::kMultiTask;
  // Training-task count; defaults to 224 (full), 32 (smaller_scale) or
  // 56 (restricted).
  std::optional<int> train_count;
  std::uint64_t split_seed = 0;
  std::vector<std::uint64_t> seeds = {0};
  PpoConfig ppo;
  std::string output_dir;  // empty: $MODARENA_OUTPUT_ROOT/<name> or runs/<name>
  bool deterministic = false;
  int jobs = 1;
  int eval_episodes = 10;        // M for final evaluation
  int curve_eval_episodes = 2;   // per task, for learning-curve points
  int eval_interval = 1;         // updates between curve points
  // Zero-shot evaluation on the test tasks; defaults to on for
  // descriptor-conditioned agents with a non-empty test set.
  std::optional<bool> zero_shot;
  RewardMode reward_mode = RewardMode::kDense;
  ArenaConfig arena;

  // Throws ConfigError.
  void Validate() const;
  nlohmann::json ToJson() const;
  // Missing keys keep defaults; unknown keys raise ConfigError.
  static ExperimentConfig FromJson(const nlohmann::json& j);

  BenchmarkSplit MakeBenchmarkSplit() const;
  std::filesystem::path ResolvedOutputDir() const;
  int EffectiveJobs() const { return deterministic ? 1 : jobs; }
  bool ZeroShotEnabled(const BenchmarkSplit& split) const;
};

// Parses "full", "smaller_scale:<element>", "restricted:<element>".
// Throws ConfigError listing valid element names.
void ParseBenchmark(const std::string& spec, SplitKind* kind,
                    std::optional<AxisElement>* element);

// Trains every seed (resuming from existing checkpoints), then evaluates
// on the training tasks and, when enabled, zero-shot on the test tasks.
void RunExperiment(const ExperimentConfig& config, std::ostream& log,
                   bool evaluate = true);

// Re-runs the final evaluation / zero-shot evaluation of a run directory.
void RunEvaluation(const std::filesystem::path& run_dir, std::ostream& log);
void RunZeroShot(const std::filesystem::path& run_dir, std::ostream& log);

// Loads the config persisted in a run directory.
ExperimentConfig LoadRunConfig(const std::filesystem::path& run_dir);

// Summary tables (mean +- standard error over seeds) written to
// report.txt plus curves.svg; returns the text.
std::string Report(const std::filesystem::path& run_dir);

// Analyses; each writes its JSON into the run directory and returns it.
nlohmann::json AnalyzeBreakdown(const std::filesystem::path& run_dir);
nlohmann::json AnalyzeSwap(const std::filesystem::path& run_dir, int max_tasks,
                           int episodes);
nlohmann::json AnalyzeR2(const std::filesystem::path& run_dir,
                         const std::filesystem::path& single_task_dir, int episodes);
nlohmann::json AnalyzeMaxSuccess(const std::vector<std::filesystem::path>& run_dirs,
                                 const std::filesystem::path& output);

std::filesystem::path SeedDir(const std::filesystem::path& run_dir,
                              std::uint64_t seed);

}  // namespace modarena

#endif  // MODARENA_EXPERIMENT_H_
