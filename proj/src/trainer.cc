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

#include "modarena/trainer.h"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "modarena/observations.h"
#include "modarena/parallel.h"
#include "modarena/simulator.h"

namespace modarena {
namespace {

void AppendEval(TrainState& state, const TrainOptions& options) {
  EvalOptions eval;
  eval.episodes = options.eval_episodes;
  eval.arena = options.arena;
  eval.reward_mode = options.reward_mode;
  eval.jobs = options.jobs;
  eval.keep_trajectories = false;
  const std::string agent(AgentKindName(options.kind));
  const std::int64_t steps =
      state.updates_done * options.ppo.steps_per_task_per_update;
  eval.seed = HashSeed({options.seed, 0xe7a1ULL,
                        static_cast<std::uint64_t>(state.updates_done)});
  const EvalResult r = Evaluate(state.model, options.tasks, eval);
  if (options.kind == AgentKind::kSingleTask) {
    for (const TaskEval& t : r.tasks) {
      state.curve.push_back({agent, t.task.ToString(), steps, t.mean_return,
                             t.success_rate, options.seed});
    }
  } else {
    state.curve.push_back({agent, options.curve_label, steps, r.mean_return,
                           r.success_rate, options.seed});
  }
}

}  // namespace

void TrainOptions::Validate() const {
  ppo.Validate();
  if (tasks.empty()) throw std::invalid_argument("no training tasks");
  if (std::set<TaskDescriptor>(tasks.begin(), tasks.end()).size() != tasks.size()) {
    throw std::invalid_argument("training tasks contain duplicates");
  }
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (eval_interval < 0) throw std::invalid_argument("eval_interval must be >= 0");
  if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be >= 1");
}

std::int64_t TrainOptions::TotalUpdates() const {
  const std::int64_t per = ppo.steps_per_task_per_update;
  return (ppo.total_steps_per_task + per - 1) / per;
}

TrainState InitTraining(const TrainOptions& options) {
  options.Validate();
  const int hidden = options.ppo.HiddenUnits(options.kind);
  const size_t n =
      options.kind == AgentKind::kSingleTask ? options.tasks.size() : 1;
  std::vector<ActorCritic> members;
  std::vector<PpoLearner> learners;
  for (size_t i = 0; i < n; ++i) {
    ActorCritic ac = MakeActorCritic(options.kind, hidden, options.ppo.hidden_layers);
    std::mt19937_64 rng(HashSeed({options.seed, 0x1a17ULL, i}));
    ac.Initialize(rng);
    learners.emplace_back(ac, options.ppo);
    members.push_back(std::move(ac));
  }
  return TrainState{TrainedModel(options.kind, options.tasks, std::move(members)),
                    std::move(learners), 0, {}};
}

std::vector<Rollout> CollectRollouts(const ActorCritic& policy,
                                     const TaskDescriptor& task, bool descriptor,
                                     std::int64_t steps, std::uint64_t seed,
                                     const ArenaConfig& arena,
                                     RewardMode reward_mode) {
  const Simulator sim(task, arena, reward_mode);
  const std::optional<TaskDescriptor> fed =
      descriptor ? std::optional(task) : std::nullopt;
  std::mt19937_64 rng(seed);
  std::vector<Rollout> rollouts;
  std::int64_t collected = 0;
  while (collected < steps) {
    Rollout ro;
    ArenaState state = sim.Reset(rng());
    std::vector<double> obs = Observe(sim, state, fed);
    while (true) {
      const std::vector<double> mean = policy.Mean(obs);
      SampledAction a = SampleGaussian(mean, policy.log_std(), rng);
      ro.values.push_back(policy.Value(obs));
      StepOutcome out = sim.Step(state, ActionFromNormalized(sim.robot(), a.action));
      ro.observations.push_back(std::move(obs));
      ro.actions.push_back(std::move(a.action));
      ro.log_probs.push_back(a.log_prob);
      ro.rewards.push_back(out.report.reward);
      state = std::move(out.state);
      ++collected;
      const bool terminal = out.done && sim.PushLifted(state);
      obs = Observe(sim, state, fed);
      if (terminal) {
        ro.last_value = 0.0;
        break;
      }
      if (out.done || collected == steps) {
        ro.last_value = policy.Value(obs);
        break;
      }
    }
    rollouts.push_back(std::move(ro));
  }
  return rollouts;
}

std::vector<UpdateStats> TrainUpdate(TrainState& state, const TrainOptions& options) {
  const PpoConfig& ppo = options.ppo;
  const bool descriptor = state.model.UsesDescriptor();
  const auto& tasks = options.tasks;
  const int n_tasks = static_cast<int>(tasks.size());
  const std::uint64_t update = static_cast<std::uint64_t>(state.updates_done);

  // Collection reads a frozen snapshot of each member.
  std::vector<std::vector<Rollout>> per_task(n_tasks);
  ParallelFor(n_tasks, options.jobs, [&](int i) {
    const std::uint64_t seed =
        HashSeed({options.seed, static_cast<std::uint64_t>(tasks[i].id()), update});
    per_task[i] = CollectRollouts(state.model.PolicyFor(tasks[i]), tasks[i],
                                  descriptor, ppo.steps_per_task_per_update, seed,
                                  options.arena, options.reward_mode);
  });

  std::vector<UpdateStats> stats(state.model.members().size());
  if (options.kind == AgentKind::kSingleTask) {
    ParallelFor(n_tasks, options.jobs, [&](int i) {
      const PpoBatch batch = MakeBatch(per_task[i], ppo.gamma, ppo.gae_lambda);
      stats[i] = state.learners[i].Update(state.model.members()[i], batch);
    });
  } else {
    std::vector<Rollout> all;
    for (auto& r : per_task) {
      for (auto& ro : r) all.push_back(std::move(ro));
    }
    const PpoBatch batch = MakeBatch(all, ppo.gamma, ppo.gae_lambda);
    stats[0] = state.learners[0].Update(state.model.members()[0], batch);
  }
  ++state.updates_done;
  const std::int64_t total = options.TotalUpdates();
  if (options.eval_interval > 0 &&
      (state.updates_done % options.eval_interval == 0 ||
       state.updates_done == total)) {
    AppendEval(state, options);
  }
  return stats;
}

void Train(TrainState& state, const TrainOptions& options,
           const TrainCallback& after_update) {
  options.Validate();
  const std::int64_t total = options.TotalUpdates();
  while (state.updates_done < total) {
    TrainUpdate(state, options);
    if (after_update) after_update(state);
  }
}

}  // namespace modarena
