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

#include "modarena/analysis.h"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace modarena {
namespace {

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<SharedElementGroup> SharedElementBreakdown(const EvalResult& zero_shot,
                                                       const BenchmarkSplit& split) {
  if (split.kind != SplitKind::kRestricted || !split.fixed_element) {
    throw std::invalid_argument("shared-element breakdown needs a restricted split");
  }
  const AxisElement fixed = *split.fixed_element;
  const auto anchor = std::find_if(split.train.begin(), split.train.end(),
                                   [&](const TaskDescriptor& t) {
                                     return t.Contains(fixed);
                                   });
  if (anchor == split.train.end()) {
    throw std::invalid_argument("restricted split has no training task with " +
                                std::string(fixed.name()));
  }
  std::vector<SharedElementGroup> out;
  for (Axis axis : kAllAxes) {
    if (axis == fixed.axis) continue;
    SharedElementGroup g;
    g.axis = axis;
    g.trained_element = anchor->element(axis);
    double trained = 0.0;
    double untrained = 0.0;
    for (const TaskEval& t : zero_shot.tasks) {
      if (t.task.Contains(g.trained_element)) {
        trained += t.success_rate;
        ++g.trained_count;
      } else {
        untrained += t.success_rate;
        ++g.untrained_count;
      }
    }
    if (g.trained_count > 0) g.trained_mean = trained / g.trained_count;
    if (g.untrained_count > 0) g.untrained_mean = untrained / g.untrained_count;
    out.push_back(g);
  }
  return out;
}

double CoefficientOfDetermination(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("R^2 inputs differ in length");
  if (x.size() < 2) throw std::invalid_argument("R^2 needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0) return 0.0;
  const double slope = sxx == 0.0 ? 0.0 : sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    ss_res += e * e;
  }
  return 1.0 - ss_res / syy;
}

BestMatchReport BestMatchingPolicyR2(const EvalResult& zero_shot,
                                     const std::vector<TaskDescriptor>& single_task_tasks,
                                     const PolicyEvaluator& success) {
  BestMatchReport report;
  for (const TaskEval& t : zero_shot.tasks) {
    if (!(t.success_rate > 0.0)) continue;
    std::optional<BestMatch> best;
    for (const TaskDescriptor& p : single_task_tasks) {
      if (AxisDistance(p, t.task) != 1) continue;
      const double s = success(p, t.task);
      if (!best || s > best->best_policy_success) {
        best = BestMatch{t.task, p, s, t.success_rate};
      }
    }
    if (best) report.matches.push_back(*best);
  }
  if (report.matches.size() < 2) {
    throw std::invalid_argument(
        "best-matching-policy analysis needs at least 2 test tasks with "
        "nonzero zero-shot success and a neighboring single-task policy; found " +
        std::to_string(report.matches.size()));
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const BestMatch& m : report.matches) {
    x.push_back(m.best_policy_success);
    y.push_back(m.agent_success);
  }
  report.r2 = CoefficientOfDetermination(x, y);
  return report;
}

std::array<std::vector<double>, kNumAxes> DescriptorSwapRanking(
    const std::vector<TaskDescriptor>& tasks, const DescriptorPerformance& perf) {
  std::array<std::vector<double>, kNumAxes> curves;
  for (auto& c : curves) c.assign(kElementsPerAxis, 0.0);
  if (tasks.empty()) return curves;
  for (const TaskDescriptor& task : tasks) {
    const double correct = perf(task, task);
    for (int a = 0; a < kNumAxes; ++a) {
      const Axis axis = kAllAxes[a];
      std::vector<double> subs;
      for (int e = 0; e < kElementsPerAxis; ++e) {
        if (e == task.index(axis)) continue;
        subs.push_back(perf(task, task.With({axis, e})));
      }
      std::sort(subs.begin(), subs.end(), std::greater<>());
      curves[a][0] += correct;
      for (size_t r = 0; r < subs.size(); ++r) curves[a][r + 1] += subs[r];
    }
  }
  for (auto& c : curves) {
    for (double& v : c) v /= static_cast<double>(tasks.size());
  }
  return curves;
}

std::map<std::pair<int, int>, double> DescriptorSwapTable(
    const TrainedModel& model, const std::vector<TaskDescriptor>& tasks,
    const EvalOptions& options) {
  if (!model.UsesDescriptor()) {
    throw std::invalid_argument("descriptor swap needs a descriptor-conditioned agent");
  }
  std::map<std::pair<int, int>, double> table;
  for (const TaskDescriptor& task : tasks) {
    table[{task.id(), task.id()}] =
        EvaluateVariant(model, task, task, std::nullopt, options).success_rate;
    for (Axis axis : kAllAxes) {
      for (int e = 0; e < kElementsPerAxis; ++e) {
        if (e == task.index(axis)) continue;
        const TaskDescriptor d = task.With({axis, e});
        table[{task.id(), d.id()}] =
            EvaluateVariant(model, task, d, std::nullopt, options).success_rate;
      }
    }
  }
  return table;
}

MaxSuccessReport MaxSuccessPerTask(const std::vector<EvalResult>& results,
                                   const std::vector<TaskDescriptor>& expected) {
  MaxSuccessReport report;
  for (const EvalResult& r : results) {
    for (const TaskEval& t : r.tasks) {
      auto [it, inserted] = report.max_success.emplace(t.task, t.success_rate);
      if (!inserted) it->second = std::max(it->second, t.success_rate);
    }
  }
  for (const auto& [task, s] : report.max_success) {
    if (s == 0.0) report.flagged.push_back(task);
  }
  for (const TaskDescriptor& t : expected) {
    if (!report.max_success.contains(t)) report.missing.push_back(t);
  }
  return report;
}

nlohmann::json BreakdownToJson(const std::vector<SharedElementGroup>& groups) {
  nlohmann::json out = nlohmann::json::array();
  for (const SharedElementGroup& g : groups) {
    out.push_back({{"axis", AxisName(g.axis)},
                   {"trained_element", g.trained_element.name()},
                   {"trained_mean", OptionalJson(g.trained_mean)},
                   {"untrained_mean", OptionalJson(g.untrained_mean)},
                   {"trained_count", g.trained_count},
                   {"untrained_count", g.untrained_count}});
  }
  return out;
}

nlohmann::json BestMatchToJson(const BestMatchReport& report) {
  nlohmann::json matches = nlohmann::json::array();
  for (const BestMatch& m : report.matches) {
    matches.push_back({{"test_task", m.test_task.ToString()},
                       {"best_policy_task", m.best_policy_task.ToString()},
                       {"best_policy_success", m.best_policy_success},
                       {"agent_success", m.agent_success}});
  }
  return {{"r2", report.r2}, {"matches", matches}};
}

nlohmann::json SwapToJson(const std::array<std::vector<double>, kNumAxes>& curves) {
  nlohmann::json out = nlohmann::json::object();
  for (int a = 0; a < kNumAxes; ++a) out[std::string(AxisName(kAllAxes[a]))] = curves[a];
  return out;
}

nlohmann::json MaxSuccessToJson(const MaxSuccessReport& report) {
  nlohmann::json per_task = nlohmann::json::object();
  for (const auto& [task, s] : report.max_success) per_task[task.ToString()] = s;
  nlohmann::json flagged = nlohmann::json::array();
  for (const auto& t : report.flagged) flagged.push_back(t.ToString());
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& t : report.missing) missing.push_back(t.ToString());
  return {{"max_success", per_task}, {"flagged", flagged}, {"missing", missing}};
}

}  // namespace modarena
