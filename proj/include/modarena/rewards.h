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

#ifndef MODARENA_REWARDS_H_
#define MODARENA_REWARDS_H_

#include <string_view>
#include <utility>
#include <vector>

#include "modarena/task_space.h"

namespace modarena {

class Simulator;
struct ArenaState;

enum class Stage { kReach, kGrasp, kLift, kAlign, kApproach, kLower, kDrop, kSuccess };

std::string_view StageName(Stage stage);

// Ordered stage list per objective:
//   pick-and-place: reach, grasp, lift, approach, lower, success
//   push:           reach, grasp, approach, success
//   trash can:      reach, grasp, lift, approach, drop, success
//   shelf:          reach, grasp, lift, align, approach, success
const std::vector<Stage>& StagesFor(Objective objective);

struct RewardInputs {
  double target_dist = 0.0;  // gripper to the object's grasp point
  bool grasping = false;
  double z_dist_target_height = 0.0;
  double goal_xy_dist = 0.0;
  double z_dist_bin = 0.0;
  double y_dist_shelf = 0.0;
  double y_axis_orientation = 0.0;  // radians between tool axis and +y
  bool object_above_bin = false;
  bool object_in_bin = false;
  bool object_in_trash_can = false;
  bool object_above_trash_can = false;
  bool gripper_in_trash_can = false;
  bool object_in_front_of_shelf = false;
  bool object_in_shelf = false;
};

struct StagedRewardReport {
  // Values in StagesFor(objective) order.
  std::vector<std::pair<Stage, double>> stage_values;
  double reward = 0.0;
  bool success = false;
  Stage active_stage = Stage::kReach;

  double value(Stage stage) const;
};

enum class RewardMode {
  kDense,   // max over staged values
  kSparse,  // success indicator only
};

StagedRewardReport RewardPickPlace(const RewardInputs& in);
StagedRewardReport RewardPush(const RewardInputs& in);
StagedRewardReport RewardTrashcan(const RewardInputs& in);
StagedRewardReport RewardShelf(const RewardInputs& in);

StagedRewardReport ComputeReward(Objective objective, const RewardInputs& in,
                                 RewardMode mode = RewardMode::kDense);

// Distances and region predicates from the current poses.
RewardInputs ComputeRewardInputs(const Simulator& sim, const ArenaState& state);

}  // namespace modarena

#endif  // MODARENA_REWARDS_H_
