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

#ifndef MODARENA_SIMULATOR_H_
#define MODARENA_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "modarena/arena.h"
#include "modarena/rewards.h"
#include "modarena/task_space.h"

namespace modarena {

inline constexpr int kActionSize = 8;

struct Action {
  Joints target_joints{};
  bool gripper_closed = false;
};

// Maps a policy output to an env action: each of the first seven entries is
// clamped to [-1, 1] and mapped affinely onto the joint's limit range; the
// eighth closes the gripper when positive. Throws on wrong length or
// non-finite entries.
Action ActionFromNormalized(const RobotModel& robot,
                            std::span<const double> normalized);

struct ArenaState {
  Joints joints{};
  Joints joint_vel{};  // rad per step
  bool gripper_closed = false;
  std::array<double, 2> finger_pos{};
  std::array<double, 2> finger_vel{};
  Pose object_pose;
  bool grasped = false;
  // Object pose expressed in the end-effector frame while grasped.
  Pose grasp_offset;
  Pose goal_pose;
  int step_count = 0;
  std::uint64_t rng_seed = 0;
};

struct StepOutcome {
  ArenaState state;
  StagedRewardReport report;
  bool done = false;
};

// Deterministic kinematic simulator for one task. Stateless: all mutable
// data lives in ArenaState, so a Simulator may be shared across threads.
class Simulator {
 public:
  explicit Simulator(TaskDescriptor task, ArenaConfig arena = {},
                     RewardMode reward_mode = RewardMode::kDense);

  ArenaState Reset(std::uint64_t seed) const;

  // Throws std::logic_error when `state` is already terminal.
  StepOutcome Step(const ArenaState& state, const Action& action) const;

  bool IsTerminal(const ArenaState& state) const;
  bool PushLifted(const ArenaState& state) const;

  Pose EndEffector(const ArenaState& state) const {
    return ForwardKinematics(robot_, state.joints);
  }
  Eigen::Vector3d GraspPoint(const ArenaState& state) const;
  bool GraspFeasible(const ArenaState& state) const;
  StagedRewardReport Reward(const ArenaState& state) const;

  // Regions the object is spawned in (x, y bounds; z ignored). The object
  // position is uniform over their union.
  const std::vector<Aabb>& spawn_regions() const { return spawn_regions_; }
  double LiftTargetHeight() const;
  // Table, objective fixtures and obstacle walls.
  const std::vector<Aabb>& blocked_regions() const { return blocked_; }
  bool IsBlocked(const Eigen::Vector3d& p) const;

  const TaskDescriptor& task() const { return task_; }
  const ArenaConfig& arena() const { return arena_; }
  const RobotModel& robot() const { return robot_; }
  const ObjectModel& object() const { return object_; }
  const ObstacleModel& obstacle() const { return obstacle_; }
  RewardMode reward_mode() const { return reward_mode_; }
  int horizon() const { return arena_.horizon; }

 private:
  // Points that must stay outside blocked regions for a configuration.
  bool ConfigurationBlocked(const Joints& joints, const ArenaState& state,
                            bool carrying) const;
  Pose CarriedObjectPose(const Pose& ee, const Pose& offset) const;
  double SupportHeight(const Eigen::Vector3d& p) const;
  void ApplyPush(const Pose& ee, ArenaState& state) const;

  TaskDescriptor task_;
  ArenaConfig arena_;
  RewardMode reward_mode_;
  RobotModel robot_;
  ObjectModel object_;
  ObstacleModel obstacle_;
  std::vector<Aabb> blocked_;
  std::vector<Aabb> spawn_regions_;
};

// Stand-alone grasp test for an end-effector pose against an object's grasp
// point and admissible grasp axis.
bool GraspFeasible(const Pose& ee, const Eigen::Vector3d& grasp_point,
                   const ObjectModel& object);

// Stateful wrapper holding one episode.
class Env {
 public:
  explicit Env(TaskDescriptor task, ArenaConfig arena = {},
               RewardMode reward_mode = RewardMode::kDense);

  const ArenaState& Reset(std::uint64_t seed);
  const StepOutcome& Step(const Action& action);
  const StepOutcome& StepNormalized(std::span<const double> normalized);

  const ArenaState& state() const { return last_.state; }
  bool done() const { return last_.done; }
  const Simulator& sim() const { return sim_; }

 private:
  Simulator sim_;
  StepOutcome last_;
  bool started_ = false;
};

nlohmann::json StateToJson(const ArenaState& state);
ArenaState StateFromJson(const nlohmann::json& j);

}  // namespace modarena

#endif  // MODARENA_SIMULATOR_H_
