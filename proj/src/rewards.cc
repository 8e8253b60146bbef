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

#include "modarena/rewards.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modarena/simulator.h"

namespace modarena {
namespace {

double Reach(const RewardInputs& in) {
  return 0.2 * (1.0 - std::tanh(10.0 * in.target_dist));
}

double Lift(double grasp, const RewardInputs& in) {
  return grasp > 0.0 ? 0.3 + 0.2 * (1.0 - std::tanh(5.0 * in.z_dist_target_height))
                     : 0.0;
}

// Reward is the max over stage values. The active stage is the latest stage
// attaining that max, or reach when nothing is positive.
StagedRewardReport Finish(std::vector<std::pair<Stage, double>> values) {
  StagedRewardReport r;
  r.stage_values = std::move(values);
  r.reward = 0.0;
  for (const auto& [stage, v] : r.stage_values) r.reward = std::max(r.reward, v);
  r.active_stage = Stage::kReach;
  if (r.reward > 0.0) {
    for (const auto& [stage, v] : r.stage_values) {
      if (v == r.reward) r.active_stage = stage;
    }
  }
  r.success = r.value(Stage::kSuccess) == 1.0;
  return r;
}

}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kReach:
      return "reach";
    case Stage::kGrasp:
      return "grasp";
    case Stage::kLift:
      return "lift";
    case Stage::kAlign:
      return "align";
    case Stage::kApproach:
      return "approach";
    case Stage::kLower:
      return "lower";
    case Stage::kDrop:
      return "drop";
    case Stage::kSuccess:
      return "success";
  }
  return "?";
}

const std::vector<Stage>& StagesFor(Objective objective) {
  using S = Stage;
  static const std::vector<Stage> kPickPlace = {S::kReach,    S::kGrasp,
                                                S::kLift,     S::kApproach,
                                                S::kLower,    S::kSuccess};
  static const std::vector<Stage> kPush = {S::kReach, S::kGrasp, S::kApproach,
                                           S::kSuccess};
  static const std::vector<Stage> kTrashcan = {S::kReach,    S::kGrasp,
                                               S::kLift,     S::kApproach,
                                               S::kDrop,     S::kSuccess};
  static const std::vector<Stage> kShelf = {S::kReach, S::kGrasp,    S::kLift,
                                            S::kAlign, S::kApproach, S::kSuccess};
  switch (objective) {
    case Objective::kPickPlace:
      return kPickPlace;
    case Objective::kPush:
      return kPush;
    case Objective::kTrashcan:
      return kTrashcan;
    case Objective::kShelf:
      return kShelf;
  }
  return kPickPlace;
}

double StagedRewardReport::value(Stage stage) const {
  for (const auto& [s, v] : stage_values) {
    if (s == stage) return v;
  }
  return 0.0;
}

StagedRewardReport RewardPickPlace(const RewardInputs& in) {
  const double reach = Reach(in);
  const double grasp = in.grasping ? 0.3 : 0.0;
  const double lift = Lift(grasp, in);
  const double xy = 0.2 * (1.0 - std::tanh(2.0 * in.goal_xy_dist));
  double approach = 0.0;
  if (lift > 0.45) approach = in.object_above_bin ? 0.5 + xy : lift + xy;
  const double lower =
      in.object_above_bin && grasp > 0.0
          ? 0.7 + 0.2 * (1.0 - std::tanh(5.0 * in.z_dist_bin))
          : 0.0;
  const double success = in.object_in_bin && reach > 0.07 ? 1.0 : 0.0;
  return Finish({{Stage::kReach, reach},
                 {Stage::kGrasp, grasp},
                 {Stage::kLift, lift},
                 {Stage::kApproach, approach},
                 {Stage::kLower, lower},
                 {Stage::kSuccess, success}});
}

StagedRewardReport RewardPush(const RewardInputs& in) {
  const double reach = Reach(in);
  const double grasp = in.grasping ? 0.3 : 0.0;
  const double approach =
      grasp > 0.0 ? 0.3 + 0.4 * (1.0 - std::tanh(5.0 * in.goal_xy_dist)) : 0.0;
  const double success = in.goal_xy_dist <= 0.03 ? 1.0 : 0.0;
  return Finish({{Stage::kReach, reach},
                 {Stage::kGrasp, grasp},
                 {Stage::kApproach, approach},
                 {Stage::kSuccess, success}});
}

StagedRewardReport RewardTrashcan(const RewardInputs& in) {
  const double reach = Reach(in);
  const double grasp = in.grasping && !in.object_in_trash_can ? 0.3 : 0.0;
  const double lift = !in.object_in_trash_can ? Lift(grasp, in) : 0.0;
  const double xy = 0.2 * (1.0 - std::tanh(2.0 * in.goal_xy_dist));
  double approach = 0.0;
  if (lift > 0.45) {
    if (in.object_above_trash_can) {
      approach = 0.5 + xy;
    } else if (!in.object_in_trash_can) {
      approach = lift + xy;
    }
  }
  const double drop = in.object_above_trash_can && grasp == 0.0 ? 0.95 : 0.0;
  const double success =
      in.object_in_trash_can && !in.gripper_in_trash_can ? 1.0 : 0.0;
  return Finish({{Stage::kReach, reach},
                 {Stage::kGrasp, grasp},
                 {Stage::kLift, lift},
                 {Stage::kApproach, approach},
                 {Stage::kDrop, drop},
                 {Stage::kSuccess, success}});
}

StagedRewardReport RewardShelf(const RewardInputs& in) {
  const double reach = Reach(in);
  const double grasp = in.grasping ? 0.3 : 0.0;
  const double lift = Lift(grasp, in);
  const double align =
      in.object_in_front_of_shelf
          ? 0.5 + 0.3 * (1.0 - std::tanh(in.y_axis_orientation))
          : 0.0;
  const double approach =
      in.object_in_front_of_shelf && align > 0.6
          ? 0.8 + 0.1 * (1.0 - std::tanh(5.0 * in.y_dist_shelf))
          : 0.0;
  const double success = in.object_in_shelf ? 1.0 : 0.0;
  return Finish({{Stage::kReach, reach},
                 {Stage::kGrasp, grasp},
                 {Stage::kLift, lift},
                 {Stage::kAlign, align},
                 {Stage::kApproach, approach},
                 {Stage::kSuccess, success}});
}

StagedRewardReport ComputeReward(Objective objective, const RewardInputs& in,
                                 RewardMode mode) {
  StagedRewardReport r;
  switch (objective) {
    case Objective::kPickPlace:
      r = RewardPickPlace(in);
      break;
    case Objective::kPush:
      r = RewardPush(in);
      break;
    case Objective::kTrashcan:
      r = RewardTrashcan(in);
      break;
    case Objective::kShelf:
      r = RewardShelf(in);
      break;
  }
  if (mode == RewardMode::kSparse) r.reward = r.success ? 1.0 : 0.0;
  return r;
}

RewardInputs ComputeRewardInputs(const Simulator& sim, const ArenaState& state) {
  const ArenaConfig& arena = sim.arena();
  const ObjectModel& object = sim.object();
  const Pose ee = sim.EndEffector(state);
  const Eigen::Vector3d& obj = state.object_pose.position;
  const Eigen::Vector3d& goal = state.goal_pose.position;
  const double bottom = obj.z() - object.half_height;

  RewardInputs in;
  in.target_dist = (ee.position - sim.GraspPoint(state)).norm();
  in.grasping = state.grasped;
  in.z_dist_target_height = std::abs(obj.z() - sim.LiftTargetHeight());
  in.goal_xy_dist = (obj.head<2>() - goal.head<2>()).norm();
  in.z_dist_bin = std::max(0.0, bottom - arena.table_height);

  const Aabb bin = arena.BinBox(true);
  in.object_in_bin = bin.ContainsXY(obj) && bottom <= bin.hi.z();
  in.object_above_bin = bin.ContainsXY(obj) && bottom > bin.hi.z();

  const Aabb can = arena.TrashCanBox();
  in.object_in_trash_can = can.ContainsXY(obj) && bottom < can.hi.z();
  in.object_above_trash_can = can.ContainsXY(obj) && bottom >= can.hi.z();
  in.gripper_in_trash_can =
      can.ContainsXY(ee.position) && ee.position.z() < can.hi.z();

  const Aabb shelf = arena.ShelfInterior();
  const Eigen::Vector3d obj_bottom(obj.x(), obj.y(), bottom);
  in.object_in_shelf = shelf.Contains(obj_bottom);
  in.object_in_front_of_shelf = arena.ShelfFrontZone().Contains(obj_bottom);
  in.y_dist_shelf = std::abs(obj.y() - 0.5 * (shelf.lo.y() + shelf.hi.y()));
  const double c = std::clamp(ToolAxis(ee).dot(Eigen::Vector3d::UnitY()), -1.0, 1.0);
  in.y_axis_orientation = std::acos(c);
  return in;
}

}  // namespace modarena
