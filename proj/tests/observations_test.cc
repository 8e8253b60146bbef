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

#include <gtest/gtest.h>

#include <cmath>

namespace modarena {
namespace {

TEST(ObservationsTest, SegmentsTileTheVector) {
  int offset = 0;
  for (const Segment& s : {kRobotSegment, kObjectSegment, kObstacleSegment,
                           kGoalSegment, kTaskSegment}) {
    EXPECT_EQ(s.offset, offset) << s.name;
    offset += s.length;
  }
  EXPECT_EQ(offset, kFullObservationSize);
  EXPECT_EQ(kTaskSegment.offset, kStateObservationSize);
  const auto j = ObservationLayoutJson();
  EXPECT_EQ(j.at("size_with_descriptor"), 94);
  EXPECT_EQ(j.at("size_without_descriptor"), 78);
  EXPECT_EQ(j.at("action_size"), 8);
}

TEST(ObservationsTest, LengthsAndDescriptorTail) {
  const Simulator sim(TaskDescriptor::FromString("Gen3_Plate_GoalWall_Shelf"));
  const ArenaState s = sim.Reset(2);
  const auto full = Observe(sim, s, true);
  const auto state = Observe(sim, s, false);
  ASSERT_EQ(full.size(), 94u);
  ASSERT_EQ(state.size(), 78u);
  EXPECT_TRUE(std::equal(state.begin(), state.end(), full.begin()));
  const auto hot = EncodeMultiHot(sim.task());
  EXPECT_TRUE(std::equal(hot.begin(), hot.end(), full.begin() + 78));
  for (double x : full) EXPECT_TRUE(std::isfinite(x));

  // A substituted descriptor changes only the tail.
  const TaskDescriptor other = sim.task().With({Axis::kObject, 0});
  const auto swapped = Observe(sim, s, other);
  EXPECT_TRUE(std::equal(state.begin(), state.end(), swapped.begin()));
  const auto other_hot = EncodeMultiHot(other);
  EXPECT_TRUE(std::equal(other_hot.begin(), other_hot.end(), swapped.begin() + 78));
}

TEST(ObservationsTest, RobotSegmentContents) {
  const Simulator sim(TaskDescriptor::FromString("IIWA_Box_None_PickPlace"));
  const ArenaState s = sim.Reset(0);
  const auto obs = Observe(sim, s, false);
  for (int i = 0; i < kNumJoints; ++i) {
    EXPECT_DOUBLE_EQ(obs[i], std::sin(s.joints[i]));
    EXPECT_DOUBLE_EQ(obs[7 + i], std::cos(s.joints[i]));
    EXPECT_EQ(obs[14 + i], 0.0);
  }
  const Pose ee = sim.EndEffector(s);
  EXPECT_DOUBLE_EQ(obs[21], ee.position.x());
  EXPECT_DOUBLE_EQ(obs[22], ee.position.y());
  EXPECT_DOUBLE_EQ(obs[23], ee.position.z());
  // Object world position, then the goal-minus-object vector.
  EXPECT_DOUBLE_EQ(obs[32], s.object_pose.position.x());
  EXPECT_DOUBLE_EQ(obs[60 + 14],
                   s.goal_pose.position.x() - s.object_pose.position.x());
}

TEST(ObservationsTest, NoObstacleSegmentIsConstant) {
  const Simulator a(TaskDescriptor::FromString("IIWA_Box_None_PickPlace"));
  const Simulator b(TaskDescriptor::FromString("Panda_Dumbbell_None_Trashcan"));
  const auto oa = Observe(a, a.Reset(1), false);
  const auto ob = Observe(b, b.Reset(7), false);
  EXPECT_TRUE(std::equal(oa.begin() + 46, oa.begin() + 60, ob.begin() + 46));
}

TEST(ObservationsTest, DecomposeSlicesSegments) {
  std::vector<double> obs(94);
  for (int i = 0; i < 94; ++i) obs[i] = i;
  const auto d = Decompose(obs);
  EXPECT_EQ(d.robot.size(), 32u);
  EXPECT_EQ(d.object.front(), 32);
  EXPECT_EQ(d.obstacle.front(), 46);
  EXPECT_EQ(d.goal.front(), 60);
  EXPECT_EQ(d.goal.back(), 77);
  EXPECT_THROW(Decompose(std::vector<double>(93)), std::invalid_argument);
}

}  // namespace
}  // namespace modarena
