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

#ifndef MODARENA_EVALUATION_H_
#define MODARENA_EVALUATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "modarena/arena.h"
#include "modarena/policy.h"
#include "modarena/rewards.h"
#include "modarena/task_space.h"

namespace modarena {

// splitmix64 finalizer over a sequence of words.
std::uint64_t HashSeed(std::initializer_list<std::uint64_t> words);

struct TrajectoryLog {
  TaskDescriptor task;
  std::uint64_t seed = 0;
  std::vector<double> rewards;
  std::vector<bool> success;  // per step: reward == 1

  double Return() const;
  bool Succeeded() const;  // success at any step
};

struct TaskEval {
  TaskDescriptor task;
  double mean_return = 0.0;
  double success_rate = 0.0;
  int episodes = 0;
  int horizon = 0;  // longest trajectory
};

struct EvalResult {
  std::string agent;
  std::uint64_t seed = 0;
  std::vector<TaskEval> tasks;  // sorted by task id
  double mean_return = 0.0;     // mean over all trajectories
  double success_rate = 0.0;    // fraction of trajectories with a success
  std::vector<TrajectoryLog> trajectories;

  // Throws std::out_of_range when `task` was not evaluated.
  const TaskEval& For(const TaskDescriptor& task) const;
};

// Per-task and aggregate metrics:
//   R = (1 / NM) sum_i sum_j sum_t r_ijt,  S = (1 / NM) sum_i sum_j max_t 1[r_ijt = 1].
EvalResult ComputeMetrics(std::vector<TrajectoryLog> logs);

struct EvalOptions {
  int episodes = 10;
  std::uint64_t seed = 0;
  ArenaConfig arena;
  RewardMode reward_mode = RewardMode::kDense;
  int jobs = 1;
  bool keep_trajectories = true;
};

// Deterministic rollout with the policy mean. `descriptor` overrides the
// multi-hot fed to descriptor-conditioned policies (defaults to `task`).
// `policy_task` selects the member of a single-task model (defaults to
// `task`).
TrajectoryLog RunEpisode(const TrainedModel& model, const TaskDescriptor& task,
                         std::uint64_t seed, const ArenaConfig& arena,
                         RewardMode reward_mode,
                         std::optional<TaskDescriptor> descriptor = std::nullopt,
                         std::optional<TaskDescriptor> policy_task = std::nullopt);

// M episodes per task with the deterministic mean action. Throws
// std::logic_error if the parameters change during evaluation.
EvalResult Evaluate(const TrainedModel& model,
                    const std::vector<TaskDescriptor>& tasks,
                    const EvalOptions& options);

// Evaluates `task` with a substituted descriptor or a single-task policy
// trained on another task. Returns success rate and mean return.
TaskEval EvaluateVariant(const TrainedModel& model, const TaskDescriptor& task,
                         std::optional<TaskDescriptor> descriptor,
                         std::optional<TaskDescriptor> policy_task,
                         const EvalOptions& options);

// Raised when a model cannot be evaluated against a split.
class ProvenanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluates on split.test. Rejects single-task models and models whose
// training tasks differ from split.train.
EvalResult ZeroShot(const TrainedModel& model, const BenchmarkSplit& split,
                    const EvalOptions& options);

nlohmann::json EvalResultToJson(const EvalResult& r, bool include_trajectories);
EvalResult EvalResultFromJson(const nlohmann::json& j);

}  // namespace modarena

#endif  // MODARENA_EVALUATION_H_
