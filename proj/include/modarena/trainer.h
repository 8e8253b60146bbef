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

#ifndef MODARENA_TRAINER_H_
#define MODARENA_TRAINER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modarena/arena.h"
#include "modarena/evaluation.h"
#include "modarena/policy.h"
#include "modarena/ppo.h"
#include "modarena/rewards.h"
#include "modarena/task_space.h"

namespace modarena {

// One learning-curve point: deterministic evaluation after `steps`
// environment steps per task.
struct CurveRecord {
  std::string agent;
  std::string task;  // task string, or a split label for shared models
  std::int64_t steps = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

struct TrainOptions {
  AgentKind kind = AgentKind::kSingleTask;
  std::vector<TaskDescriptor> tasks;
  PpoConfig ppo;
  std::uint64_t seed = 0;
  int jobs = 1;
  // Evaluate every this many updates (and after the last); 0 disables.
  int eval_interval = 1;
  int eval_episodes = 2;
  ArenaConfig arena;
  RewardMode reward_mode = RewardMode::kDense;
  std::string curve_label = "train";

  // Throws std::invalid_argument on inconsistent settings.
  void Validate() const;
  std::int64_t TotalUpdates() const;
};

struct TrainState {
  TrainedModel model;
  std::vector<PpoLearner> learners;  // parallel to model.members()
  std::int64_t updates_done = 0;
  std::vector<CurveRecord> curve;
};

// Fresh models initialized from `options.seed`.
TrainState InitTraining(const TrainOptions& options);

// Collects `steps` transitions on `task` with Gaussian exploration.
// Episodes cut at the batch boundary or at the horizon bootstrap from the
// value estimate; push lift termination bootstraps from 0.
std::vector<Rollout> CollectRollouts(const ActorCritic& policy,
                                     const TaskDescriptor& task, bool descriptor,
                                     std::int64_t steps, std::uint64_t seed,
                                     const ArenaConfig& arena,
                                     RewardMode reward_mode);

// One round: every member collects steps_per_task_per_update on each of
// its tasks and takes one PPO update. Returns per-member statistics.
std::vector<UpdateStats> TrainUpdate(TrainState& state, const TrainOptions& options);

using TrainCallback = std::function<void(const TrainState&)>;

// Runs updates until TotalUpdates() is reached, calling `after_update`
// after each one. Resumes from `state.updates_done`.
void Train(TrainState& state, const TrainOptions& options,
           const TrainCallback& after_update = {});

}  // namespace modarena

#endif  // MODARENA_TRAINER_H_
