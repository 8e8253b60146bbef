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

#include "modarena/task_space.h"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>

namespace modarena {
namespace {

constexpr std::array<std::array<std::string_view, kElementsPerAxis>, kNumAxes>
    kElementNames = {{
        {"IIWA", "Jaco", "Gen3", "Panda"},
        {"Box", "HollowBox", "Plate", "Dumbbell"},
        {"None", "ObjectDoor", "GoalWall", "ObjectWall"},
        {"PickPlace", "Push", "Trashcan", "Shelf"},
    }};

std::string Normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

void CheckIndex(int index) {
  if (index < 0 || index >= kElementsPerAxis) {
    throw std::invalid_argument("axis element index out of range: " +
                                std::to_string(index));
  }
}

std::vector<TaskDescriptor> TasksWhere(bool want, const AxisElement& e) {
  std::vector<TaskDescriptor> out;
  for (const TaskDescriptor& t : EnumerateTasks()) {
    if (t.Contains(e) == want) out.push_back(t);
  }
  return out;
}

void SortById(std::vector<TaskDescriptor>& tasks) {
  std::sort(tasks.begin(), tasks.end(),
            [](const auto& a, const auto& b) { return a.id() < b.id(); });
}

}  // namespace

std::string_view AxisName(Axis axis) {
  switch (axis) {
    case Axis::kRobot:
      return "robot";
    case Axis::kObject:
      return "object";
    case Axis::kObstacle:
      return "obstacle";
    case Axis::kObjective:
      return "objective";
  }
  return "?";
}

std::string_view AxisElement::name() const {
  CheckIndex(index);
  return kElementNames[static_cast<int>(axis)][index];
}

AxisElement ParseElement(std::string_view name) {
  const std::string key = Normalize(name);
  for (Axis axis : kAllAxes) {
    for (int i = 0; i < kElementsPerAxis; ++i) {
      if (Normalize(kElementNames[static_cast<int>(axis)][i]) == key) {
        return {axis, i};
      }
    }
  }
  // snake_case aliases that do not reduce to the canonical spelling
  if (key == "noobstacle") return {Axis::kObstacle, 0};
  if (key == "pickandplace") return {Axis::kObjective, 0};
  throw std::invalid_argument("unknown axis element '" + std::string(name) +
                              "'; valid elements: " + ValidElementNames());
}

std::string ValidElementNames() {
  std::string out;
  for (Axis axis : kAllAxes) {
    for (int i = 0; i < kElementsPerAxis; ++i) {
      if (!out.empty()) out += ", ";
      out += kElementNames[static_cast<int>(axis)][i];
    }
  }
  return out;
}

TaskDescriptor::TaskDescriptor(int robot, int object, int obstacle,
                               int objective)
    : indices_{robot, object, obstacle, objective} {
  for (int i : indices_) CheckIndex(i);
}

TaskDescriptor::TaskDescriptor(Robot robot, Object object, Obstacle obstacle,
                               Objective objective)
    : TaskDescriptor(static_cast<int>(robot), static_cast<int>(object),
                     static_cast<int>(obstacle), static_cast<int>(objective)) {}

TaskDescriptor TaskDescriptor::FromId(int id) {
  if (id < 0 || id >= kNumTasks) {
    throw std::invalid_argument("task id out of range: " + std::to_string(id));
  }
  return TaskDescriptor(id / 64, (id / 16) % 4, (id / 4) % 4, id % 4);
}

TaskDescriptor TaskDescriptor::FromString(std::string_view name) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = name.find('_', start);
    parts.push_back(name.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != kNumAxes) {
    throw std::invalid_argument(
        "task name must have the form Robot_Object_Obstacle_Objective, got '" +
        std::string(name) + "'; valid elements: " + ValidElementNames());
  }
  TaskDescriptor task;
  for (int a = 0; a < kNumAxes; ++a) {
    const AxisElement e = ParseElement(parts[a]);
    if (static_cast<int>(e.axis) != a) {
      throw std::invalid_argument("element '" + std::string(parts[a]) +
                                  "' belongs to axis " +
                                  std::string(AxisName(e.axis)) +
                                  ", expected " +
                                  std::string(AxisName(kAllAxes[a])));
    }
    task.indices_[a] = e.index;
  }
  return task;
}

int TaskDescriptor::id() const {
  return indices_[0] * 64 + indices_[1] * 16 + indices_[2] * 4 + indices_[3];
}

std::string TaskDescriptor::ToString() const {
  std::string out;
  for (Axis axis : kAllAxes) {
    if (!out.empty()) out += "_";
    out += element(axis).name();
  }
  return out;
}

AxisElement TaskDescriptor::element(Axis axis) const {
  return {axis, indices_[static_cast<int>(axis)]};
}

TaskDescriptor TaskDescriptor::With(const AxisElement& e) const {
  CheckIndex(e.index);
  TaskDescriptor out = *this;
  out.indices_[static_cast<int>(e.axis)] = e.index;
  return out;
}

std::vector<TaskDescriptor> EnumerateTasks() {
  std::vector<TaskDescriptor> tasks;
  tasks.reserve(kNumTasks);
  for (int id = 0; id < kNumTasks; ++id) tasks.push_back(TaskDescriptor::FromId(id));
  return tasks;
}

std::array<double, kMultiHotSize> EncodeMultiHot(const TaskDescriptor& task) {
  std::array<double, kMultiHotSize> out{};
  for (int a = 0; a < kNumAxes; ++a) {
    out[a * kElementsPerAxis + task.index(kAllAxes[a])] = 1.0;
  }
  return out;
}

TaskDescriptor DecodeMultiHot(std::span<const double> multihot) {
  if (multihot.size() != kMultiHotSize) {
    throw std::invalid_argument("multi-hot vector must have length 16");
  }
  std::array<int, kNumAxes> idx{};
  for (int a = 0; a < kNumAxes; ++a) {
    int ones = 0;
    for (int i = 0; i < kElementsPerAxis; ++i) {
      const double v = multihot[a * kElementsPerAxis + i];
      if (v == 1.0) {
        ++ones;
        idx[a] = i;
      } else if (v != 0.0) {
        throw std::invalid_argument("multi-hot entries must be 0 or 1");
      }
    }
    if (ones != 1) {
      throw std::invalid_argument("multi-hot block for " +
                                  std::string(AxisName(kAllAxes[a])) +
                                  " must contain exactly one 1");
    }
  }
  return TaskDescriptor(idx[0], idx[1], idx[2], idx[3]);
}

int AxisDistance(const TaskDescriptor& a, const TaskDescriptor& b) {
  int d = 0;
  for (Axis axis : kAllAxes) d += a.index(axis) != b.index(axis);
  return d;
}

std::string_view SplitKindName(SplitKind kind) {
  switch (kind) {
    case SplitKind::kUniform:
      return "uniform";
    case SplitKind::kRestricted:
      return "restricted";
    case SplitKind::kSmallerScale:
      return "smaller_scale";
  }
  return "?";
}

SplitKind ParseSplitKind(std::string_view name) {
  const std::string key = Normalize(name);
  if (key == "uniform" || key == "full") return SplitKind::kUniform;
  if (key == "restricted") return SplitKind::kRestricted;
  if (key == "smallerscale") return SplitKind::kSmallerScale;
  throw std::invalid_argument("unknown split kind '" + std::string(name) +
                              "' (expected uniform, restricted, smaller_scale)");
}

BenchmarkSplit MakeSplit(SplitKind kind, std::optional<AxisElement> fixed,
                         std::optional<int> train_count, std::uint64_t seed) {
  BenchmarkSplit split;
  split.kind = kind;
  split.seed = seed;
  std::mt19937_64 rng(seed);

  switch (kind) {
    case SplitKind::kUniform: {
      if (!train_count || *train_count < 1 || *train_count >= kNumTasks) {
        throw std::invalid_argument(
            "uniform split requires train_count in [1, 255]");
      }
      std::vector<TaskDescriptor> all = EnumerateTasks();
      std::shuffle(all.begin(), all.end(), rng);
      split.train.assign(all.begin(), all.begin() + *train_count);
      split.test.assign(all.begin() + *train_count, all.end());
      break;
    }
    case SplitKind::kSmallerScale: {
      if (!fixed) {
        throw std::invalid_argument("smaller-scale split requires an element");
      }
      const int count = train_count.value_or(32);
      std::vector<TaskDescriptor> pool = TasksWhere(true, *fixed);
      if (count < 1 || count >= static_cast<int>(pool.size())) {
        throw std::invalid_argument(
            "smaller-scale split requires train_count in [1, 63]");
      }
      std::shuffle(pool.begin(), pool.end(), rng);
      split.train.assign(pool.begin(), pool.begin() + count);
      split.test.assign(pool.begin() + count, pool.end());
      split.fixed_element = fixed;
      break;
    }
    case SplitKind::kRestricted: {
      if (!fixed) {
        throw std::invalid_argument("restricted split requires an element");
      }
      const int count = train_count.value_or(56);
      std::vector<TaskDescriptor> with = TasksWhere(true, *fixed);
      std::vector<TaskDescriptor> without = TasksWhere(false, *fixed);
      if (count < 1 || count > static_cast<int>(without.size()) + 1) {
        throw std::invalid_argument(
            "restricted split requires train_count in [1, 193]");
      }
      std::shuffle(with.begin(), with.end(), rng);
      std::shuffle(without.begin(), without.end(), rng);
      split.train.push_back(with.front());
      split.train.insert(split.train.end(), without.begin(),
                         without.begin() + (count - 1));
      split.test.assign(with.begin() + 1, with.end());
      split.fixed_element = fixed;
      break;
    }
  }
  SortById(split.train);
  SortById(split.test);
  return split;
}

nlohmann::json SplitToJson(const BenchmarkSplit& split) {
  nlohmann::json j;
  j["kind"] = SplitKindName(split.kind);
  j["seed"] = split.seed;
  if (split.fixed_element) {
    j["fixed_element"] = split.fixed_element->name();
  }
  j["train"] = nlohmann::json::array();
  for (const auto& t : split.train) j["train"].push_back(t.ToString());
  j["test"] = nlohmann::json::array();
  for (const auto& t : split.test) j["test"].push_back(t.ToString());
  return j;
}

BenchmarkSplit SplitFromJson(const nlohmann::json& j) {
  BenchmarkSplit split;
  split.kind = ParseSplitKind(j.at("kind").get<std::string>());
  split.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("fixed_element") && !j["fixed_element"].is_null()) {
    split.fixed_element = ParseElement(j["fixed_element"].get<std::string>());
  }
  for (const auto& s : j.at("train")) {
    split.train.push_back(TaskDescriptor::FromString(s.get<std::string>()));
  }
  for (const auto& s : j.at("test")) {
    split.test.push_back(TaskDescriptor::FromString(s.get<std::string>()));
  }
  return split;
}

}  // namespace modarena
