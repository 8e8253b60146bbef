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

#include "modarena/arena.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace modarena {
namespace {

struct RobotParams {
  const char* name;
  Joints link_lengths;
  Joints half_range;
  double max_speed;
};

// Half ranges cover yaw, shoulder, upper-arm roll, elbow, forearm roll,
// wrist pitch and wrist roll. Wrist pitch and roll need at least pi/2 to
// reach the horizontal grasp orientations; together the ranges let every arm
// take a grasp pose at any spawn or goal position (checked by the tests).
constexpr std::array<RobotParams, 4> kRobotParams = {{
    {"IIWA",
     {0.36, 0.21, 0.21, 0.20, 0.20, 0.08, 0.12},
     {1.95, 1.5, 1.8, 1.8, 1.8, 2.7, 2.7},
     0.05},
    {"Jaco",
     {0.28, 0.22, 0.22, 0.21, 0.21, 0.06, 0.16},
     {2.25, 1.65, 2.1, 1.95, 2.1, 2.85, 3.0},
     0.06},
    {"Gen3",
     {0.30, 0.20, 0.22, 0.19, 0.21, 0.07, 0.15},
     {2.0, 1.5, 1.8, 1.8, 1.8, 2.8, 2.8},
     0.055},
    {"Panda",
     {0.33, 0.18, 0.17, 0.20, 0.19, 0.09, 0.11},
     {2.1, 1.575, 1.95, 1.875, 1.95, 2.775, 2.85},
     0.045},
}};

Eigen::Matrix3d RotZ(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Eigen::Matrix3d RotY(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Joints ReadJoints(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumJoints) {
    throw std::invalid_argument("expected an array of 7 numbers");
  }
  Joints out{};
  for (int i = 0; i < kNumJoints; ++i) out[i] = j[i].get<double>();
  return out;
}

Eigen::Vector3d ReadVec3(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("expected an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Solves yaw, shoulder, elbow and wrist pitch so that the tool point reaches
// `target` with the tool axis pointing down. Rolls are zero.
Joints SolveDownwardPose(const RobotModel& robot, const Eigen::Vector3d& target) {
  const auto& l = robot.link_lengths;
  const double upper = l[1] + l[2];
  const double fore = l[3] + l[4];
  const double hand = l[5] + l[6];
  const Eigen::Vector3d d = target - robot.base_position;
  const double yaw = std::atan2(-d.x(), d.y());
  const double reach = std::hypot(d.x(), d.y());
  const double height = d.z() + hand - l[0];
  const double c = (reach * reach + height * height - upper * upper -
                    fore * fore) /
                   (2.0 * upper * fore);
  if (c < -1.0 || c > 1.0) {
    throw std::invalid_argument(robot.name + ": home pose out of reach");
  }
  const double elbow = std::acos(c);
  const double shoulder =
      std::atan2(reach, height) -
      std::atan2(fore * std::sin(elbow), upper + fore * std::cos(elbow));
  const double wrist = std::numbers::pi - shoulder - elbow;
  return {yaw, shoulder, 0.0, elbow, 0.0, wrist, 0.0};
}

}  // namespace

Eigen::Vector3d ArenaConfig::LeftBinCenter() const {
  return {-bin_center_x, 0.0, table_height};
}

Eigen::Vector3d ArenaConfig::RightBinCenter() const {
  return {bin_center_x, 0.0, table_height};
}

Aabb ArenaConfig::BinBox(bool right) const {
  const Eigen::Vector3d c = right ? RightBinCenter() : LeftBinCenter();
  return {{c.x() - bin_half_width, c.y() - bin_half_width, table_height},
          {c.x() + bin_half_width, c.y() + bin_half_width,
           table_height + bin_wall_height}};
}

Aabb ArenaConfig::TrashCanBox() const {
  Aabb box = BinBox(true);
  box.hi.z() = table_height + trash_rim_height;
  return box;
}

Aabb ArenaConfig::ShelfInterior() const {
  const double top = table_height + shelf_height;
  return {{bin_center_x - bin_half_width, 0.0, top},
          {bin_center_x + bin_half_width, shelf_depth, top + 0.1}};
}

Aabb ArenaConfig::ShelfFrontZone() const {
  const double top = table_height + shelf_height;
  return {{bin_center_x - bin_half_width, -shelf_front_zone, top - 0.02},
          {bin_center_x + bin_half_width, 0.0, top + 0.15}};
}

Aabb ArenaConfig::ShelfBoard() const {
  const double top = table_height + shelf_height;
  return {{bin_center_x - bin_half_width, 0.0, top - shelf_thickness},
          {bin_center_x + bin_half_width, shelf_depth, top}};
}

ArenaConfig ArenaConfig::FromJson(const nlohmann::json& j) {
  ArenaConfig c;
  if (!j.is_object()) throw std::invalid_argument("arena config must be an object");
  const nlohmann::json known = c.ToJson();
  for (const auto& [key, value] : j.items()) {
    if (key != "robots" && !known.contains(key)) {
      throw std::invalid_argument("unknown arena key '" + key + "'");
    }
  }
#define MODARENA_READ(field) \
  if (j.contains(#field)) c.field = j.at(#field).get<decltype(c.field)>()
  MODARENA_READ(table_height);
  MODARENA_READ(table_half_x);
  MODARENA_READ(table_half_y);
  MODARENA_READ(bin_center_x);
  MODARENA_READ(bin_half_width);
  MODARENA_READ(bin_wall_height);
  MODARENA_READ(shelf_height);
  MODARENA_READ(shelf_depth);
  MODARENA_READ(shelf_thickness);
  MODARENA_READ(shelf_front_zone);
  MODARENA_READ(trash_rim_height);
  MODARENA_READ(wall_thickness);
  MODARENA_READ(wall_height);
  MODARENA_READ(object_wall_y);
  MODARENA_READ(barrier_half_span);
  MODARENA_READ(door_half_gap);
  MODARENA_READ(goal_wall_half_length);
  MODARENA_READ(spawn_margin);
  MODARENA_READ(lift_target_height);
  MODARENA_READ(push_lift_threshold);
  MODARENA_READ(grasp_tolerance_pos);
  MODARENA_READ(grasp_tolerance_ang);
  MODARENA_READ(kp);
  MODARENA_READ(horizon);
#undef MODARENA_READ
  if (j.contains("robot_base")) c.robot_base = ReadVec3(j["robot_base"]);
  if (j.contains("home_ee")) c.home_ee = ReadVec3(j["home_ee"]);
  if (j.contains("robots")) {
    for (const auto& [name, spec] : j["robots"].items()) {
      RobotOverride o;
      if (spec.contains("link_lengths")) {
        o.link_lengths = ReadJoints(spec["link_lengths"]);
      }
      if (spec.contains("max_joint_speed")) {
        o.max_joint_speed = ReadJoints(spec["max_joint_speed"]);
      }
      if (spec.contains("joint_half_range")) {
        o.joint_half_range = ReadJoints(spec["joint_half_range"]);
      }
      c.robot_overrides[name] = o;
    }
  }
  if (c.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (c.kp <= 0.0 || c.kp > 1.0) {
    throw std::invalid_argument("kp must be in (0, 1]");
  }
  return c;
}

nlohmann::json ArenaConfig::ToJson() const {
  nlohmann::json j = {
      {"table_height", table_height},
      {"table_half_x", table_half_x},
      {"table_half_y", table_half_y},
      {"bin_center_x", bin_center_x},
      {"bin_half_width", bin_half_width},
      {"bin_wall_height", bin_wall_height},
      {"shelf_height", shelf_height},
      {"shelf_depth", shelf_depth},
      {"shelf_thickness", shelf_thickness},
      {"shelf_front_zone", shelf_front_zone},
      {"trash_rim_height", trash_rim_height},
      {"wall_thickness", wall_thickness},
      {"wall_height", wall_height},
      {"object_wall_y", object_wall_y},
      {"barrier_half_span", barrier_half_span},
      {"door_half_gap", door_half_gap},
      {"goal_wall_half_length", goal_wall_half_length},
      {"spawn_margin", spawn_margin},
      {"lift_target_height", lift_target_height},
      {"push_lift_threshold", push_lift_threshold},
      {"grasp_tolerance_pos", grasp_tolerance_pos},
      {"grasp_tolerance_ang", grasp_tolerance_ang},
      {"kp", kp},
      {"horizon", horizon},
      {"robot_base", {robot_base.x(), robot_base.y(), robot_base.z()}},
      {"home_ee", {home_ee.x(), home_ee.y(), home_ee.z()}},
  };
  if (!robot_overrides.empty()) {
    nlohmann::json robots = nlohmann::json::object();
    for (const auto& [name, o] : robot_overrides) {
      nlohmann::json r = nlohmann::json::object();
      if (o.link_lengths) r["link_lengths"] = *o.link_lengths;
      if (o.max_joint_speed) r["max_joint_speed"] = *o.max_joint_speed;
      if (o.joint_half_range) r["joint_half_range"] = *o.joint_half_range;
      robots[name] = r;
    }
    j["robots"] = robots;
  }
  return j;
}

ObjectModel MakeObjectModel(Object object, const ArenaConfig& arena) {
  ObjectModel m;
  m.grasp_tolerance_pos = arena.grasp_tolerance_pos;
  m.grasp_tolerance_ang = arena.grasp_tolerance_ang;
  m.lift_threshold_height = arena.push_lift_threshold;
  switch (object) {
    case Object::kBox:
      m.name = "Box";
      m.grasp_axis = GraspAxis::kTopDown;
      m.half_height = 0.025;
      m.radius = 0.025;
      m.grasp_offset = {0.0, 0.0, 0.025};
      m.grip_width = 0.025;
      break;
    case Object::kHollowBox:
      // Open package: pinch the near wall at its top edge.
      m.name = "HollowBox";
      m.grasp_axis = GraspAxis::kHorizontalEdge;
      m.half_height = 0.04;
      m.radius = 0.08;
      m.grasp_offset = {0.0, -0.08, 0.04};
      m.grip_width = 0.005;
      break;
    case Object::kPlate:
      m.name = "Plate";
      m.grasp_axis = GraspAxis::kHorizontalEdge;
      m.half_height = 0.01;
      m.radius = 0.09;
      m.grasp_offset = {0.0, -0.09, 0.0};
      m.grip_width = 0.01;
      break;
    case Object::kDumbbell:
      // Upright; the bar runs vertically through the center.
      m.name = "Dumbbell";
      m.grasp_axis = GraspAxis::kHorizontalBar;
      m.half_height = 0.08;
      m.radius = 0.04;
      m.grasp_offset = {0.0, 0.0, 0.0};
      m.grip_width = 0.015;
      break;
  }
  return m;
}

ObstacleModel MakeObstacleModel(Obstacle obstacle, const ArenaConfig& arena) {
  ObstacleModel m;
  const double z0 = arena.table_height;
  const double z1 = arena.table_height + arena.wall_height;
  const double t = 0.5 * arena.wall_thickness;
  const double cx = -arena.bin_center_x;
  const double wy = arena.object_wall_y;
  const Pose barrier_anchor{{cx, wy, z0 + 0.5 * arena.wall_height},
                            Eigen::Quaterniond::Identity()};
  switch (obstacle) {
    case Obstacle::kNone:
      m.name = "None";
      m.placement = ObstaclePlacement::kNone;
      break;
    case Obstacle::kObjectWall:
      m.name = "ObjectWall";
      m.placement = ObstaclePlacement::kBetweenRobotAndObject;
      m.blocked_regions.push_back(
          {{cx - arena.door_half_gap, wy - t, z0},
           {cx + arena.door_half_gap, wy + t, z1}});
      m.anchor = barrier_anchor;
      break;
    case Obstacle::kObjectDoor:
      m.name = "ObjectDoor";
      m.placement = ObstaclePlacement::kBetweenRobotAndObject;
      m.blocked_regions.push_back(
          {{cx - arena.barrier_half_span, wy - t, z0},
           {cx - arena.door_half_gap, wy + t, z1}});
      m.blocked_regions.push_back(
          {{cx + arena.door_half_gap, wy - t, z0},
           {cx + arena.barrier_half_span, wy + t, z1}});
      m.anchor = barrier_anchor;
      break;
    case Obstacle::kGoalWall:
      m.name = "GoalWall";
      m.placement = ObstaclePlacement::kBetweenBins;
      m.blocked_regions.push_back(
          {{-t, -arena.goal_wall_half_length, z0},
           {t, arena.goal_wall_half_length, z1}});
      m.anchor = {{0.0, 0.0, z0 + 0.5 * arena.wall_height},
                  Eigen::Quaterniond::Identity()};
      break;
  }
  return m;
}

RobotModel MakeRobotModel(Robot robot, const ArenaConfig& arena) {
  const RobotParams& p = kRobotParams[static_cast<int>(robot)];
  RobotModel m;
  m.name = p.name;
  m.link_lengths = p.link_lengths;
  Joints half_range = p.half_range;
  m.max_joint_speed.fill(p.max_speed);
  if (auto it = arena.robot_overrides.find(m.name);
      it != arena.robot_overrides.end()) {
    if (it->second.link_lengths) m.link_lengths = *it->second.link_lengths;
    if (it->second.max_joint_speed) {
      m.max_joint_speed = *it->second.max_joint_speed;
    }
    if (it->second.joint_half_range) half_range = *it->second.joint_half_range;
  }
  for (int i = 0; i < kNumJoints; ++i) {
    if (m.link_lengths[i] < 0.0 || m.max_joint_speed[i] <= 0.0 ||
        half_range[i] <= 0.0) {
      throw std::invalid_argument(m.name + ": invalid robot parameters");
    }
  }
  m.base_position = arena.robot_base + Eigen::Vector3d(0, 0, arena.table_height);
  m.home_pose = SolveDownwardPose(
      m, arena.home_ee + Eigen::Vector3d(0, 0, arena.table_height));
  for (int i = 0; i < kNumJoints; ++i) {
    m.joint_limits[i] = {m.home_pose[i] - half_range[i],
                         m.home_pose[i] + half_range[i]};
  }
  return m;
}

Pose ForwardKinematics(const RobotModel& robot, const Joints& joints) {
  Eigen::Matrix3d rot = RotZ(0.5 * std::numbers::pi);
  Eigen::Vector3d pos = robot.base_position;
  for (int i = 0; i < kNumJoints; ++i) {
    rot = rot * (i % 2 == 0 ? RotZ(joints[i]) : RotY(joints[i]));
    pos += rot.col(2) * robot.link_lengths[i];
  }
  Pose pose;
  pose.position = pos;
  pose.orientation = Eigen::Quaterniond(rot).normalized();
  return pose;
}

Eigen::Vector3d ToolAxis(const Pose& ee) {
  return ee.orientation * Eigen::Vector3d::UnitZ();
}

Eigen::Vector3d FingerAxis(const Pose& ee) {
  return ee.orientation * Eigen::Vector3d::UnitX();
}

}  // namespace modarena
