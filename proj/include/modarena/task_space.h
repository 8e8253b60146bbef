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

#ifndef MODARENA_TASK_SPACE_H_
#define MODARENA_TASK_SPACE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace modarena {

// The four compositional axes, in canonical order.
enum class Axis { kRobot = 0, kObject = 1, kObstacle = 2, kObjective = 3 };

inline constexpr int kNumAxes = 4;
inline constexpr int kElementsPerAxis = 4;
inline constexpr int kNumTasks = 256;
inline constexpr int kMultiHotSize = kNumAxes * kElementsPerAxis;

inline constexpr std::array<Axis, kNumAxes> kAllAxes = {
    Axis::kRobot, Axis::kObject, Axis::kObstacle, Axis::kObjective};

// Element indices follow a fixed listing order per axis:
//   robot:     IIWA, Jaco, Gen3, Panda
//   object:    Box, HollowBox, Plate, Dumbbell
//   obstacle:  None, ObjectDoor, GoalWall, ObjectWall
//   objective: PickPlace, Push, Trashcan, Shelf
enum class Robot { kIIWA = 0, kJaco = 1, kGen3 = 2, kPanda = 3 };
enum class Object { kBox = 0, kHollowBox = 1, kPlate = 2, kDumbbell = 3 };
enum class Obstacle {
  kNone = 0,
  kObjectDoor = 1,
  kGoalWall = 2,
  kObjectWall = 3
};
enum class Objective { kPickPlace = 0, kPush = 1, kTrashcan = 2, kShelf = 3 };

std::string_view AxisName(Axis axis);

struct AxisElement {
  Axis axis = Axis::kRobot;
  int index = 0;

  // Canonical CamelCase name, e.g. "IIWA", "HollowBox", "None", "PickPlace".
  std::string_view name() const;

  friend bool operator==(const AxisElement&, const AxisElement&) = default;
};

// Parses an element name. Matching ignores case, '_' and '-', and accepts
// the snake_case spellings ("pick_place", "no_obstacle", "trash_can", ...).
// Throws std::invalid_argument listing the 16 valid names.
AxisElement ParseElement(std::string_view name);

// Comma-separated list of every valid element name, grouped by axis.
std::string ValidElementNames();

class TaskDescriptor {
 public:
  TaskDescriptor() = default;
  TaskDescriptor(int robot, int object, int obstacle, int objective);
  TaskDescriptor(Robot robot, Object object, Obstacle obstacle,
                 Objective objective);

  // Task id in [0, 256): robot * 64 + object * 16 + obstacle * 4 + objective.
  static TaskDescriptor FromId(int id);
  // Parses "Robot_Object_Obstacle_Objective", e.g. "IIWA_Box_None_PickPlace".
  static TaskDescriptor FromString(std::string_view name);

  int id() const;
  std::string ToString() const;

  AxisElement element(Axis axis) const;
  int index(Axis axis) const { return indices_[static_cast<int>(axis)]; }
  bool Contains(const AxisElement& e) const { return index(e.axis) == e.index; }
  // Copy with one axis replaced.
  TaskDescriptor With(const AxisElement& e) const;

  Robot robot() const { return static_cast<Robot>(indices_[0]); }
  Object object() const { return static_cast<Object>(indices_[1]); }
  Obstacle obstacle() const { return static_cast<Obstacle>(indices_[2]); }
  Objective objective() const { return static_cast<Objective>(indices_[3]); }

  friend bool operator==(const TaskDescriptor&,
                         const TaskDescriptor&) = default;
  friend auto operator<=>(const TaskDescriptor&,
                          const TaskDescriptor&) = default;

 private:
  std::array<int, kNumAxes> indices_ = {0, 0, 0, 0};
};

// All 256 tasks in lexicographic (robot, object, obstacle, objective) order.
std::vector<TaskDescriptor> EnumerateTasks();

// Multi-hot layout: one 4-slot block per axis in canonical axis order.
std::array<double, kMultiHotSize> EncodeMultiHot(const TaskDescriptor& task);
// Throws std::invalid_argument unless every block holds exactly one 1.
TaskDescriptor DecodeMultiHot(std::span<const double> multihot);

// Number of axes on which two tasks differ.
int AxisDistance(const TaskDescriptor& a, const TaskDescriptor& b);

enum class SplitKind { kUniform, kRestricted, kSmallerScale };

std::string_view SplitKindName(SplitKind kind);
SplitKind ParseSplitKind(std::string_view name);

struct BenchmarkSplit {
  SplitKind kind = SplitKind::kUniform;
  std::vector<TaskDescriptor> train;  // sorted by id
  std::vector<TaskDescriptor> test;   // sorted by id
  std::optional<AxisElement> fixed_element;
  std::uint64_t seed = 0;
};

// Builds a train/test split.
//   Uniform:      train_count in [1, 255] tasks drawn from all 256, rest test.
//   SmallerScale: the 64 tasks containing `fixed`; train_count in [1, 63]
//                 (default 32) drawn from them, rest test.
//   Restricted:   one random task containing `fixed` plus train_count - 1
//                 (default 56 total) tasks without it; test is every other
//                 task containing `fixed`.
// Throws std::invalid_argument on a bad count or a missing fixed element.
BenchmarkSplit MakeSplit(SplitKind kind, std::optional<AxisElement> fixed,
                         std::optional<int> train_count, std::uint64_t seed);

nlohmann::json SplitToJson(const BenchmarkSplit& split);
BenchmarkSplit SplitFromJson(const nlohmann::json& j);

}  // namespace modarena

#endif  // MODARENA_TASK_SPACE_H_
