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

#ifndef MODARENA_ANALYSIS_H_
#define MODARENA_ANALYSIS_H_

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "modarena/evaluation.h"
#include "modarena/policy.h"
#include "modarena/task_space.h"

namespace modarena {

// Zero-shot success on a restricted split, partitioned per axis by whether a
// test task shares that axis's element with the single training task that
// contains the restricted element.
struct SharedElementGroup {
  Axis axis = Axis::kRobot;
  AxisElement trained_element;
  std::optional<double> trained_mean;    // empty when no test task shares it
  std::optional<double> untrained_mean;  // empty when every test task shares it
  int trained_count = 0;
  int untrained_count = 0;
};

// One group per axis other than the restricted element's. Throws
// std::invalid_argument for non-restricted splits.
std::vector<SharedElementGroup> SharedElementBreakdown(const EvalResult& zero_shot,
                                                       const BenchmarkSplit& split);

// R^2 of the least-squares line predicting y from x: 1 - SS_res / SS_tot.
// A constant x yields 0; a constant y yields 0 (no variance to explain).
// Throws std::invalid_argument on size mismatch or fewer than 2 points.
double CoefficientOfDetermination(const std::vector<double>& x,
                                  const std::vector<double>& y);

struct BestMatch {
  TaskDescriptor test_task;
  TaskDescriptor best_policy_task;
  double best_policy_success = 0.0;
  double agent_success = 0.0;
};

struct BestMatchReport {
  double r2 = 0.0;
  std::vector<BestMatch> matches;
};

// success(policy_task, test_task): success of the single-task policy
// trained on policy_task when run on test_task.
using PolicyEvaluator =
    std::function<double(const TaskDescriptor&, const TaskDescriptor&)>;

// For every test task with nonzero zero-shot success, picks the best
// single-task policy among training tasks that differ in exactly one
// element, then relates its success to the agent's. Throws
// std::invalid_argument when fewer than 2 test tasks qualify.
BestMatchReport BestMatchingPolicyR2(const EvalResult& zero_shot,
                                     const std::vector<TaskDescriptor>& single_task_tasks,
                                     const PolicyEvaluator& success);

// performance(task, descriptor) for a descriptor-conditioned agent.
using DescriptorPerformance =
    std::function<double(const TaskDescriptor&, const TaskDescriptor&)>;

// Per axis, a curve of length 4: position 0 is the mean performance with the
// correct descriptor; positions 1..3 are the substitutes of that axis
// sorted in descending order per task and averaged across tasks by rank.
std::array<std::vector<double>, kNumAxes> DescriptorSwapRanking(
    const std::vector<TaskDescriptor>& tasks, const DescriptorPerformance& perf);

// Builds the performance table for DescriptorSwapRanking by evaluating the
// model with every single-axis substitute descriptor (success rate).
std::map<std::pair<int, int>, double> DescriptorSwapTable(
    const TrainedModel& model, const std::vector<TaskDescriptor>& tasks,
    const EvalOptions& options);

struct MaxSuccessReport {
  std::map<TaskDescriptor, double> max_success;
  std::vector<TaskDescriptor> flagged;  // max success == 0
  std::vector<TaskDescriptor> missing;  // expected but never evaluated
};

MaxSuccessReport MaxSuccessPerTask(const std::vector<EvalResult>& results,
                                   const std::vector<TaskDescriptor>& expected);

nlohmann::json BreakdownToJson(const std::vector<SharedElementGroup>& groups);
nlohmann::json BestMatchToJson(const BestMatchReport& report);
nlohmann::json SwapToJson(const std::array<std::vector<double>, kNumAxes>& curves);
nlohmann::json MaxSuccessToJson(const MaxSuccessReport& report);

}  // namespace modarena

#endif  // MODARENA_ANALYSIS_H_
