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

#include "modarena/simulator.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace modarena {
namespace {

constexpr double kFingerOpen = 0.04;
constexpr double kFingerRadius = 0.01;
constexpr int kCollisionSubsteps = 16;
constexpr int kBisectionIters = 24;

Joints Lerp(const Joints& a, const Joints& b, double alpha) {
  Joints out{};
  for (int i = 0; i < kNumJoints; ++i) out[i] = a[i] + alpha * (b[i] - a[i]);
  return out;
}

double Area(const Aabb& box) {
  return (box.hi.x() - box.lo.x()) * (box.hi.y() - box.lo.y());
}

Eigen::Quaterniond UprightWithYaw(const Eigen::Quaterniond& q) {
  const Eigen::Matrix3d r = q.toRotationMatrix();
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));
}

nlohmann::json PoseToJson(const Pose& p) {
  return {{"position", {p.position.x(), p.position.y(), p.position.z()}},
          {"orientation",
           {p.orientation.w(), p.orientation.x(), p.orientation.y(),
            p.orientation.z()}}};
}

Pose PoseFromJson(const nlohmann::json& j) {
  Pose p;
  const auto& pos = j.at("position");
  p.position = {pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()};
  const auto& q = j.at("orientation");
  p.orientation = Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(),
                                     q[2].get<double>(), q[3].get<double>());
  return p;
}

}  // namespace

Action ActionFromNormalized(const RobotModel& robot,
                            std::span<const double> normalized) {
  if (normalized.size() != kActionSize) {
    throw std::invalid_argument("action must have 8 entries, got " +
                                std::to_string(normalized.size()));
  }
  Action action;
  for (int i = 0; i < kActionSize; ++i) {
    if (!std::isfinite(normalized[i])) {
      throw std::invalid_argument("action entries must be finite");
    }
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const double a = std::clamp(normalized[i], -1.0, 1.0);
    const JointLimit& lim = robot.joint_limits[i];
    action.target_joints[i] = lim.lo + 0.5 * (a + 1.0) * (lim.hi - lim.lo);
  }
  action.gripper_closed = normalized[kNumJoints] > 0.0;
  return action;
}

bool GraspFeasible(const Pose& ee, const Eigen::Vector3d& grasp_point,
                   const ObjectModel& object) {
  if ((ee.position - grasp_point).norm() > object.grasp_tolerance_pos) {
    return false;
  }
  const Eigen::Vector3d tool = ToolAxis(ee);
  const Eigen::Vector3d finger = FingerAxis(ee);
  const double tol = object.grasp_tolerance_ang;
  // Angle of a unit vector above/below the horizontal plane.
  auto elevation = [](const Eigen::Vector3d& v) {
    return std::asin(std::clamp(std::abs(v.z()), 0.0, 1.0));
  };
  switch (object.grasp_axis) {
    case GraspAxis::kTopDown:
      return std::acos(std::clamp(-tool.z(), -1.0, 1.0)) <= tol;
    case GraspAxis::kHorizontalEdge:
      // Horizontal approach, fingers pinching vertically.
      return elevation(tool) <= tol &&
             std::acos(std::clamp(std::abs(finger.z()), 0.0, 1.0)) <= tol;
    case GraspAxis::kHorizontalBar:
      // Horizontal approach, fingers closing horizontally around the bar.
      return elevation(tool) <= tol && elevation(finger) <= tol;
  }
  return false;
}

Simulator::Simulator(TaskDescriptor task, ArenaConfig arena,
                     RewardMode reward_mode)
    : task_(task),
      arena_(std::move(arena)),
      reward_mode_(reward_mode),
      robot_(MakeRobotModel(task.robot(), arena_)),
      object_(MakeObjectModel(task.object(), arena_)),
      obstacle_(MakeObstacleModel(task.obstacle(), arena_)) {
  // Everything below the table top.
  blocked_.push_back({{-10.0, -10.0, -10.0}, {10.0, 10.0, arena_.table_height}});
  if (task_.objective() == Objective::kShelf) {
    blocked_.push_back(arena_.ShelfBoard());
  }
  for (const Aabb& box : obstacle_.blocked_regions) blocked_.push_back(box);

  // Spawn regions: the left bin shrunk by the margin, then restricted to the
  // part that forces the arm around the obstacle.
  const Aabb bin = arena_.BinBox(false);
  const double m = arena_.spawn_margin;
  const double x0 = bin.lo.x() + m, x1 = bin.hi.x() - m;
  const double y0 = bin.lo.y() + m, y1 = bin.hi.y() - m;
  const double cx = -arena_.bin_center_x;
  const double gap = arena_.door_half_gap;
  auto region = [&](double xa, double xb, double ya, double yb) {
    return Aabb{{xa, ya, arena_.table_height}, {xb, yb, arena_.table_height}};
  };
  switch (task_.obstacle()) {
    case Obstacle::kNone:
      spawn_regions_.push_back(region(x0, x1, y0, y1));
      break;
    case Obstacle::kObjectWall:
      // Directly behind the wall, in the near half of the bin.
      spawn_regions_.push_back(region(cx - gap, cx + gap, y0, 0.0));
      break;
    case Obstacle::kObjectDoor:
      // Behind either door post, in the near half of the bin.
      spawn_regions_.push_back(region(x0, cx - gap, y0, 0.0));
      spawn_regions_.push_back(region(cx + gap, x1, y0, 0.0));
      break;
    case Obstacle::kGoalWall:
      // Half of the bin next to the wall.
      spawn_regions_.push_back(region(cx, x1, y0, y1));
      break;
  }
}

double Simulator::LiftTargetHeight() const {
  if (task_.objective() == Objective::kShelf) {
    return arena_.table_height + arena_.shelf_height + object_.half_height + 0.02;
  }
  return arena_.table_height + arena_.lift_target_height;
}

ArenaState Simulator::Reset(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ArenaState s;
  s.rng_seed = seed;
  s.joints = robot_.home_pose;
  s.gripper_closed = false;
  s.finger_pos = {kFingerOpen, kFingerOpen};

  double total = 0.0;
  for (const Aabb& r : spawn_regions_) total += Area(r);
  double pick = unit(rng) * total;
  const Aabb* chosen = &spawn_regions_.back();
  for (const Aabb& r : spawn_regions_) {
    if (pick < Area(r)) {
      chosen = &r;
      break;
    }
    pick -= Area(r);
  }
  const double ox = chosen->lo.x() + unit(rng) * (chosen->hi.x() - chosen->lo.x());
  const double oy = chosen->lo.y() + unit(rng) * (chosen->hi.y() - chosen->lo.y());
  s.object_pose.position = {ox, oy, arena_.table_height + object_.half_height};

  const Aabb right = arena_.BinBox(true);
  const double m = arena_.spawn_margin;
  const double gx = right.lo.x() + m + unit(rng) * (right.hi.x() - right.lo.x() - 2 * m);
  const double gy = right.lo.y() + m + unit(rng) * (right.hi.y() - right.lo.y() - 2 * m);
  switch (task_.objective()) {
    case Objective::kPickPlace:
      s.goal_pose.position = {gx, gy, arena_.table_height + object_.half_height};
      break;
    case Objective::kPush:
      s.goal_pose.position = {gx, gy, arena_.table_height};
      break;
    case Objective::kTrashcan: {
      const Eigen::Vector3d c = arena_.RightBinCenter();
      s.goal_pose.position = {c.x(), c.y(),
                              arena_.table_height + arena_.trash_rim_height};
      break;
    }
    case Objective::kShelf: {
      const Aabb shelf = arena_.ShelfInterior();
      s.goal_pose.position = {0.5 * (shelf.lo.x() + shelf.hi.x()),
                              0.5 * (shelf.lo.y() + shelf.hi.y()),
                              shelf.lo.z() + object_.half_height};
      break;
    }
  }
  return s;
}

bool Simulator::IsBlocked(const Eigen::Vector3d& p) const {
  return std::any_of(blocked_.begin(), blocked_.end(),
                     [&](const Aabb& b) { return b.Contains(p); });
}

Pose Simulator::CarriedObjectPose(const Pose& ee, const Pose& offset) const {
  Pose out;
  out.position = ee.position + ee.orientation * offset.position;
  out.orientation = (ee.orientation * offset.orientation).normalized();
  return out;
}

bool Simulator::ConfigurationBlocked(const Joints& joints,
                                     const ArenaState& state,
                                     bool carrying) const {
  const Pose ee = ForwardKinematics(robot_, joints);
  if (IsBlocked(ee.position)) return true;
  if (carrying) {
    return IsBlocked(CarriedObjectPose(ee, state.grasp_offset).position);
  }
  return false;
}

double Simulator::SupportHeight(const Eigen::Vector3d& p) const {
  const double bottom = p.z() - object_.half_height;
  double support = arena_.table_height;
  for (size_t i = 1; i < blocked_.size(); ++i) {
    const Aabb& box = blocked_[i];
    if (box.ContainsXY(p) && box.hi.z() <= bottom + 1e-9) {
      support = std::max(support, box.hi.z());
    } else if (box.ContainsXY(p) && box.lo.z() <= arena_.table_height) {
      // Walls reaching the table: the object rests on top.
      support = std::max(support, box.hi.z());
    }
  }
  return support;
}

void Simulator::ApplyPush(const Pose& ee, ArenaState& state) const {
  Eigen::Vector3d& obj = state.object_pose.position;
  const double bottom = obj.z() - object_.half_height;
  const double top = obj.z() + object_.half_height;
  if (ee.position.z() < bottom - kFingerRadius ||
      ee.position.z() > top + kFingerRadius) {
    return;
  }
  const double contact = object_.radius + kFingerRadius;
  Eigen::Vector2d delta = obj.head<2>() - ee.position.head<2>();
  const double dist = delta.norm();
  if (dist >= contact) return;
  const Eigen::Vector2d dir =
      dist > 1e-12 ? Eigen::Vector2d(delta / dist) : Eigen::Vector2d(0.0, 1.0);
  Eigen::Vector3d moved = obj;
  moved.head<2>() = ee.position.head<2>() + dir * contact;
  moved.x() = std::clamp(moved.x(), -arena_.table_half_x, arena_.table_half_x);
  moved.y() = std::clamp(moved.y(), -arena_.table_half_y, arena_.table_half_y);
  if (IsBlocked(moved)) return;
  moved.z() = SupportHeight(moved) + object_.half_height;
  if (IsBlocked(moved)) return;
  obj = moved;
}

Eigen::Vector3d Simulator::GraspPoint(const ArenaState& state) const {
  return state.object_pose.position +
         state.object_pose.orientation * object_.grasp_offset;
}

bool Simulator::GraspFeasible(const ArenaState& state) const {
  return modarena::GraspFeasible(EndEffector(state), GraspPoint(state), object_);
}

bool Simulator::PushLifted(const ArenaState& state) const {
  if (task_.objective() != Objective::kPush) return false;
  const double bottom = state.object_pose.position.z() - object_.half_height;
  return bottom - arena_.table_height > arena_.push_lift_threshold;
}

bool Simulator::IsTerminal(const ArenaState& state) const {
  return state.step_count >= arena_.horizon || PushLifted(state);
}

StagedRewardReport Simulator::Reward(const ArenaState& state) const {
  return ComputeReward(task_.objective(), ComputeRewardInputs(*this, state),
                       reward_mode_);
}

StepOutcome Simulator::Step(const ArenaState& state, const Action& action) const {
  if (IsTerminal(state)) {
    throw std::logic_error("step called on a terminal state; reset first");
  }
  for (double t : action.target_joints) {
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite action");
  }
  StepOutcome out;
  ArenaState& next = out.state;
  next = state;
  next.gripper_closed = action.gripper_closed;
  const bool carrying = state.grasped && action.gripper_closed;

  // First-order tracking capped at the joint speed.
  Joints candidate{};
  for (int i = 0; i < kNumJoints; ++i) {
    const JointLimit& lim = robot_.joint_limits[i];
    const double target = std::clamp(action.target_joints[i], lim.lo, lim.hi);
    const double delta =
        std::clamp(arena_.kp * (target - state.joints[i]),
                   -robot_.max_joint_speed[i], robot_.max_joint_speed[i]);
    candidate[i] = std::clamp(state.joints[i] + delta, lim.lo, lim.hi);
  }

  // Stop at the obstacle boundary along the joint-space segment.
  const bool check_object =
      carrying && !ConfigurationBlocked(state.joints, state, true);
  double free_alpha = 1.0;
  for (int k = 1; k <= kCollisionSubsteps; ++k) {
    const double alpha = static_cast<double>(k) / kCollisionSubsteps;
    if (ConfigurationBlocked(Lerp(state.joints, candidate, alpha), state,
                             check_object)) {
      double lo = static_cast<double>(k - 1) / kCollisionSubsteps;
      double hi = alpha;
      for (int it = 0; it < kBisectionIters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ConfigurationBlocked(Lerp(state.joints, candidate, mid), state,
                                 check_object)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      free_alpha = lo;
      break;
    }
  }
  next.joints = free_alpha == 1.0 ? candidate
                                  : Lerp(state.joints, candidate, free_alpha);
  for (int i = 0; i < kNumJoints; ++i) {
    next.joint_vel[i] = next.joints[i] - state.joints[i];
  }

  const Pose ee = ForwardKinematics(robot_, next.joints);
  if (carrying) {
    next.object_pose = CarriedObjectPose(ee, state.grasp_offset);
  } else if (state.grasped) {
    // Released: settle straight down onto the nearest support.
    next.grasped = false;
    next.grasp_offset = Pose{};
    Eigen::Vector3d& p = next.object_pose.position;
    p.z() = SupportHeight(p) + object_.half_height;
    next.object_pose.orientation = UprightWithYaw(next.object_pose.orientation);
  } else if (!modarena::GraspFeasible(ee, GraspPoint(next), object_)) {
    // A gripper in a grasp pose straddles the object instead of pushing it.
    ApplyPush(ee, next);
  }

  if (next.gripper_closed && !next.grasped &&
      modarena::GraspFeasible(ee, GraspPoint(next), object_)) {
    next.grasped = true;
    next.grasp_offset.position =
        ee.orientation.conjugate() * (next.object_pose.position - ee.position);
    next.grasp_offset.orientation =
        (ee.orientation.conjugate() * next.object_pose.orientation).normalized();
  }

  const double finger = !next.gripper_closed ? kFingerOpen
                        : next.grasped       ? object_.grip_width
                                             : 0.0;
  for (int i = 0; i < 2; ++i) {
    next.finger_vel[i] = finger - state.finger_pos[i];
    next.finger_pos[i] = finger;
  }

  next.step_count = state.step_count + 1;
  out.report = Reward(next);
  out.done = IsTerminal(next);
  return out;
}

Env::Env(TaskDescriptor task, ArenaConfig arena, RewardMode reward_mode)
    : sim_(task, std::move(arena), reward_mode) {}

const ArenaState& Env::Reset(std::uint64_t seed) {
  last_ = StepOutcome{};
  last_.state = sim_.Reset(seed);
  last_.report = sim_.Reward(last_.state);
  last_.done = false;
  started_ = true;
  return last_.state;
}

const StepOutcome& Env::Step(const Action& action) {
  if (!started_) throw std::logic_error("step called before reset");
  if (last_.done) throw std::logic_error("step called after episode end");
  last_ = sim_.Step(last_.state, action);
  return last_;
}

const StepOutcome& Env::StepNormalized(std::span<const double> normalized) {
  return Step(ActionFromNormalized(sim_.robot(), normalized));
}

nlohmann::json StateToJson(const ArenaState& s) {
  return {{"joints", s.joints},
          {"joint_vel", s.joint_vel},
          {"gripper_closed", s.gripper_closed},
          {"finger_pos", s.finger_pos},
          {"finger_vel", s.finger_vel},
          {"object_pose", PoseToJson(s.object_pose)},
          {"grasped", s.grasped},
          {"grasp_offset", PoseToJson(s.grasp_offset)},
          {"goal_pose", PoseToJson(s.goal_pose)},
          {"step_count", s.step_count},
          {"rng_seed", s.rng_seed}};
}

ArenaState StateFromJson(const nlohmann::json& j) {
  ArenaState s;
  s.joints = j.at("joints").get<Joints>();
  s.joint_vel = j.at("joint_vel").get<Joints>();
  s.gripper_closed = j.at("gripper_closed").get<bool>();
  s.finger_pos = j.at("finger_pos").get<std::array<double, 2>>();
  s.finger_vel = j.at("finger_vel").get<std::array<double, 2>>();
  s.object_pose = PoseFromJson(j.at("object_pose"));
  s.grasped = j.at("grasped").get<bool>();
  s.grasp_offset = PoseFromJson(j.at("grasp_offset"));
  s.goal_pose = PoseFromJson(j.at("goal_pose"));
  s.step_count = j.at("step_count").get<int>();
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return s;
}

}  // namespace modarena
