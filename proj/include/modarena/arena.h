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

#ifndef MODARENA_ARENA_H_
#define MODARENA_ARENA_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <json.hpp>

#include "modarena/task_space.h"

namespace modarena {

inline constexpr int kNumJoints = 7;
using Joints = std::array<double, kNumJoints>;

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

// Axis-aligned box in the world frame. Closed on all faces.
struct Aabb {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;

  bool Contains(const Eigen::Vector3d& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
  bool ContainsXY(const Eigen::Vector3d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() &&
           p.y() <= hi.y();
  }
};

struct RobotOverride {
  std::optional<Joints> link_lengths;
  std::optional<Joints> max_joint_speed;
  std::optional<Joints> joint_half_range;
};

// Arena geometry and controller constants. World frame: z up, table top at
// z = table_height, left bin at -x, right bin at +x, robot base at -y.
struct ArenaConfig {
  double table_height = 0.8;
  double table_half_x = 0.5;
  double table_half_y = 0.4;
  double bin_center_x = 0.25;  // bins at x = -/+ bin_center_x, y = 0
  double bin_half_width = 0.15;
  double bin_wall_height = 0.06;
  double shelf_height = 0.3;  // above the table
  double shelf_depth = 0.15;  // shelf spans y in [0, shelf_depth]
  double shelf_thickness = 0.02;
  double shelf_front_zone = 0.15;
  double trash_rim_height = 0.15;
  double wall_thickness = 0.05;
  double wall_height = 0.25;
  double object_wall_y = -0.195;
  double barrier_half_span = 0.25;  // door + wall together cover this
  double door_half_gap = 0.08;
  double goal_wall_half_length = 0.2;
  double spawn_margin = 0.03;
  double lift_target_height = 0.3;
  double push_lift_threshold = 0.04;
  double grasp_tolerance_pos = 0.04;
  double grasp_tolerance_ang = 0.4;
  double kp = 0.3;
  int horizon = 500;
  Eigen::Vector3d robot_base{0.0, -0.45, 0.0};  // z relative to table top
  Eigen::Vector3d home_ee{0.0, -0.30, 0.20};    // z relative to table top
  std::map<std::string, RobotOverride> robot_overrides;

  Eigen::Vector3d LeftBinCenter() const;
  Eigen::Vector3d RightBinCenter() const;
  // Bin footprint from the table top up to the bin wall height.
  Aabb BinBox(bool right) const;
  Aabb TrashCanBox() const;
  Aabb ShelfInterior() const;
  Aabb ShelfFrontZone() const;
  Aabb ShelfBoard() const;

  static ArenaConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

enum class GraspAxis { kTopDown, kHorizontalEdge, kHorizontalBar };

struct ObjectModel {
  std::string name;
  GraspAxis grasp_axis = GraspAxis::kTopDown;
  double grasp_tolerance_pos = 0.04;
  double grasp_tolerance_ang = 0.4;
  double lift_threshold_height = 0.04;
  double half_height = 0.025;
  double radius = 0.025;
  // Grasp point in the object frame, relative to the object center.
  Eigen::Vector3d grasp_offset = Eigen::Vector3d::Zero();
  // Finger opening (per finger) while holding the object.
  double grip_width = 0.02;
};

ObjectModel MakeObjectModel(Object object, const ArenaConfig& arena);

enum class ObstaclePlacement { kNone, kBetweenRobotAndObject, kBetweenBins };

struct ObstacleModel {
  std::string name;
  std::vector<Aabb> blocked_regions;
  ObstaclePlacement placement = ObstaclePlacement::kNone;
  // Pose reported in observations. Identical for door and wall.
  Pose anchor;
};

ObstacleModel MakeObstacleModel(Obstacle obstacle, const ArenaConfig& arena);

struct JointLimit {
  double lo = 0.0;
  double hi = 0.0;
};

struct RobotModel {
  std::string name;
  Joints link_lengths{};
  std::array<JointLimit, kNumJoints> joint_limits{};
  Joints max_joint_speed{};  // rad per step
  Joints home_pose{};
  Eigen::Vector3d base_position = Eigen::Vector3d::Zero();
};

// Builds the arm and solves for the home configuration that puts the tool
// point at arena.home_ee pointing straight down. Joint limits are symmetric
// around the home pose.
RobotModel MakeRobotModel(Robot robot, const ArenaConfig& arena);

// Serial chain: base rotated to face +y, then for joint i a rotation about
// local z (even i) or local y (odd i) followed by a translation of
// link_lengths[i] along local z. The tool axis is the final local z.
Pose ForwardKinematics(const RobotModel& robot, const Joints& joints);

Eigen::Vector3d ToolAxis(const Pose& ee);    // approach direction
Eigen::Vector3d FingerAxis(const Pose& ee);  // finger closing direction

}  // namespace modarena

#endif  // MODARENA_ARENA_H_
