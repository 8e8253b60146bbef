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

#include "modarena/observations.h"

#include <cmath>
#include <stdexcept>

namespace modarena {
namespace {

void PushPose(std::vector<double>& out, const Pose& p) {
  out.insert(out.end(), {p.position.x(), p.position.y(), p.position.z()});
  const Eigen::Quaterniond q = p.orientation.normalized();
  out.insert(out.end(), {q.w(), q.x(), q.y(), q.z()});
}

Pose Relative(const Pose& frame, const Pose& p) {
  Pose out;
  out.position = frame.orientation.conjugate() * (p.position - frame.position);
  out.orientation = (frame.orientation.conjugate() * p.orientation).normalized();
  return out;
}

std::vector<double> Slice(std::span<const double> obs, const Segment& s) {
  return {obs.begin() + s.offset, obs.begin() + s.offset + s.length};
}

}  // namespace

std::vector<double> Observe(const Simulator& sim, const ArenaState& state,
                            std::optional<TaskDescriptor> descriptor) {
  std::vector<double> obs;
  obs.reserve(kFullObservationSize);
  const Pose ee = sim.EndEffector(state);

  for (double q : state.joints) obs.push_back(std::sin(q));
  for (double q : state.joints) obs.push_back(std::cos(q));
  obs.insert(obs.end(), state.joint_vel.begin(), state.joint_vel.end());
  PushPose(obs, ee);
  obs.insert(obs.end(), state.finger_pos.begin(), state.finger_pos.end());
  obs.insert(obs.end(), state.finger_vel.begin(), state.finger_vel.end());

  PushPose(obs, state.object_pose);
  PushPose(obs, Relative(ee, state.object_pose));

  const ObstacleModel& obstacle = sim.obstacle();
  if (obstacle.placement == ObstaclePlacement::kNone) {
    PushPose(obs, Pose{});
    PushPose(obs, Pose{});
  } else {
    PushPose(obs, obstacle.anchor);
    PushPose(obs, Relative(ee, obstacle.anchor));
  }

  PushPose(obs, state.goal_pose);
  PushPose(obs, Relative(ee, state.goal_pose));
  const Eigen::Vector3d to_goal =
      state.goal_pose.position - state.object_pose.position;
  obs.insert(obs.end(), {to_goal.x(), to_goal.y(), to_goal.z()});
  const StagedRewardReport report = sim.Reward(state);
  const auto& stages = StagesFor(sim.task().objective());
  int stage_index = 0;
  for (size_t i = 0; i < stages.size(); ++i) {
    if (stages[i] == report.active_stage) stage_index = static_cast<int>(i);
  }
  obs.push_back(static_cast<double>(stage_index) /
                static_cast<double>(stages.size() - 1));

  if (descriptor) {
    const auto hot = EncodeMultiHot(*descriptor);
    obs.insert(obs.end(), hot.begin(), hot.end());
  }
  return obs;
}

DecomposedObservation Decompose(std::span<const double> obs) {
  if (obs.size() != kStateObservationSize && obs.size() != kFullObservationSize) {
    throw std::invalid_argument("observation must have 78 or 94 entries, got " +
                                std::to_string(obs.size()));
  }
  return {Slice(obs, kObstacleSegment), Slice(obs, kObjectSegment),
          Slice(obs, kGoalSegment), Slice(obs, kRobotSegment)};
}

nlohmann::json ObservationLayoutJson() {
  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : {kRobotSegment, kObjectSegment, kObstacleSegment,
                           kGoalSegment, kTaskSegment}) {
    segments.push_back(
        {{"name", std::string(s.name)}, {"offset", s.offset}, {"length", s.length}});
  }
  return {{"size_with_descriptor", kFullObservationSize},
          {"size_without_descriptor", kStateObservationSize},
          {"action_size", kActionSize},
          {"segments", segments}};
}

}  // namespace modarena
