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

#include "modarena/evaluation.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "modarena/observations.h"
#include "modarena/parallel.h"
#include "modarena/simulator.h"

namespace modarena {
namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t HashSeed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = SplitMix(h ^ SplitMix(w));
  return h;
}

double TrajectoryLog::Return() const {
  double r = 0.0;
  for (double x : rewards) r += x;
  return r;
}

bool TrajectoryLog::Succeeded() const {
  return std::find(success.begin(), success.end(), true) != success.end();
}

const TaskEval& EvalResult::For(const TaskDescriptor& task) const {
  for (const TaskEval& t : tasks) {
    if (t.task == task) return t;
  }
  throw std::out_of_range("task " + task.ToString() + " was not evaluated");
}

EvalResult ComputeMetrics(std::vector<TrajectoryLog> logs) {
  EvalResult out;
  std::map<int, std::vector<const TrajectoryLog*>> by_task;
  for (const TrajectoryLog& log : logs) by_task[log.task.id()].push_back(&log);
  double total_return = 0.0;
  double total_success = 0.0;
  for (const auto& [id, group] : by_task) {
    TaskEval t;
    t.task = TaskDescriptor::FromId(id);
    double ret = 0.0;
    double succ = 0.0;
    for (const TrajectoryLog* log : group) {
      ret += log->Return();
      succ += log->Succeeded() ? 1.0 : 0.0;
      t.horizon = std::max(t.horizon, static_cast<int>(log->rewards.size()));
    }
    t.episodes = static_cast<int>(group.size());
    t.mean_return = ret / t.episodes;
    t.success_rate = succ / t.episodes;
    total_return += ret;
    total_success += succ;
    out.tasks.push_back(t);
  }
  if (!logs.empty()) {
    out.mean_return = total_return / static_cast<double>(logs.size());
    out.success_rate = total_success / static_cast<double>(logs.size());
  }
  out.trajectories = std::move(logs);
  return out;
}

TrajectoryLog RunEpisode(const TrainedModel& model, const TaskDescriptor& task,
                         std::uint64_t seed, const ArenaConfig& arena,
                         RewardMode reward_mode,
                         std::optional<TaskDescriptor> descriptor,
                         std::optional<TaskDescriptor> policy_task) {
  const ActorCritic& policy = model.PolicyFor(policy_task.value_or(task));
  const std::optional<TaskDescriptor> fed =
      model.UsesDescriptor() ? std::optional(descriptor.value_or(task))
                             : std::nullopt;
  Simulator sim(task, arena, reward_mode);
  ArenaState state = sim.Reset(seed);
  TrajectoryLog log;
  log.task = task;
  log.seed = seed;
  while (true) {
    const std::vector<double> obs = Observe(sim, state, fed);
    const std::vector<double> mean = policy.Mean(obs);
    StepOutcome out = sim.Step(state, ActionFromNormalized(sim.robot(), mean));
    log.rewards.push_back(out.report.reward);
    log.success.push_back(out.report.success);
    state = std::move(out.state);
    if (out.done) break;
  }
  return log;
}

EvalResult Evaluate(const TrainedModel& model,
                    const std::vector<TaskDescriptor>& tasks,
                    const EvalOptions& options) {
  if (options.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  const std::uint64_t before = model.ParameterHash();
  const int m = options.episodes;
  std::vector<TrajectoryLog> logs(tasks.size() * m);
  ParallelFor(static_cast<int>(logs.size()), options.jobs, [&](int i) {
    const TaskDescriptor& task = tasks[i / m];
    const std::uint64_t seed = HashSeed(
        {options.seed, static_cast<std::uint64_t>(task.id()),
         static_cast<std::uint64_t>(i % m)});
    logs[i] = RunEpisode(model, task, seed, options.arena, options.reward_mode);
  });
  if (model.ParameterHash() != before) {
    throw std::logic_error("model parameters changed during evaluation");
  }
  EvalResult r = ComputeMetrics(std::move(logs));
  r.agent = std::string(AgentKindName(model.kind()));
  r.seed = options.seed;
  if (!options.keep_trajectories) r.trajectories.clear();
  return r;
}

TaskEval EvaluateVariant(const TrainedModel& model, const TaskDescriptor& task,
                         std::optional<TaskDescriptor> descriptor,
                         std::optional<TaskDescriptor> policy_task,
                         const EvalOptions& options) {
  if (options.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  std::vector<TrajectoryLog> logs(options.episodes);
  ParallelFor(options.episodes, options.jobs, [&](int i) {
    const std::uint64_t seed =
        HashSeed({options.seed, static_cast<std::uint64_t>(task.id()),
                  static_cast<std::uint64_t>(i)});
    logs[i] = RunEpisode(model, task, seed, options.arena, options.reward_mode,
                         descriptor, policy_task);
  });
  return ComputeMetrics(std::move(logs)).tasks.at(0);
}

EvalResult ZeroShot(const TrainedModel& model, const BenchmarkSplit& split,
                    const EvalOptions& options) {
  if (!model.UsesDescriptor()) {
    throw ProvenanceError(
        "single-task agents have no descriptor input and cannot be evaluated "
        "zero-shot");
  }
  std::vector<TaskDescriptor> trained = model.train_tasks();
  std::sort(trained.begin(), trained.end());
  if (trained != split.train) {
    throw ProvenanceError(
        "model was not trained on this split's training tasks");
  }
  return Evaluate(model, split.test, options);
}

nlohmann::json EvalResultToJson(const EvalResult& r, bool include_trajectories) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskEval& t : r.tasks) {
    tasks.push_back({{"task", t.task.ToString()},
                     {"mean_return", t.mean_return},
                     {"success_rate", t.success_rate},
                     {"episodes", t.episodes},
                     {"horizon", t.horizon}});
  }
  nlohmann::json j = {{"agent", r.agent},
                      {"seed", r.seed},
                      {"mean_return", r.mean_return},
                      {"success_rate", r.success_rate},
                      {"tasks", tasks}};
  if (include_trajectories) {
    nlohmann::json trajs = nlohmann::json::array();
    for (const TrajectoryLog& log : r.trajectories) {
      trajs.push_back({{"task", log.task.ToString()},
                       {"seed", log.seed},
                       {"rewards", log.rewards},
                       {"success", log.success}});
    }
    j["trajectories"] = trajs;
  }
  return j;
}

EvalResult EvalResultFromJson(const nlohmann::json& j) {
  EvalResult r;
  r.agent = j.at("agent").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.mean_return = j.at("mean_return").get<double>();
  r.success_rate = j.at("success_rate").get<double>();
  for (const auto& t : j.at("tasks")) {
    r.tasks.push_back({TaskDescriptor::FromString(t.at("task").get<std::string>()),
                       t.at("mean_return").get<double>(),
                       t.at("success_rate").get<double>(),
                       t.at("episodes").get<int>(), t.at("horizon").get<int>()});
  }
  if (j.contains("trajectories")) {
    for (const auto& t : j.at("trajectories")) {
      TrajectoryLog log;
      log.task = TaskDescriptor::FromString(t.at("task").get<std::string>());
      log.seed = t.at("seed").get<std::uint64_t>();
      log.rewards = t.at("rewards").get<std::vector<double>>();
      log.success = t.at("success").get<std::vector<bool>>();
      r.trajectories.push_back(std::move(log));
    }
  }
  return r;
}

}  // namespace modarena
