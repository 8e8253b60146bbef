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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modarena/simulator.h"
#include "oracles.h"

namespace modarena {
namespace {

RewardInputs Far() {
  RewardInputs x;
  x.target_dist = 5.0;
  x.z_dist_target_height = 5.0;
  x.goal_xy_dist = 5.0;
  x.z_dist_bin = 5.0;
  x.y_dist_shelf = 5.0;
  x.y_axis_orientation = 3.0;
  return x;
}

TEST(RewardsTest, PickPlaceExamples) {
  RewardInputs x;
  EXPECT_DOUBLE_EQ(RewardPickPlace(x).reward, 0.2);
  x = Far();
  x.grasping = true;
  EXPECT_NEAR(RewardPickPlace(x).reward, 0.3, 1e-9);
  x = Far();
  x.target_dist = 0.1;
  EXPECT_NEAR(RewardPickPlace(x).reward, 0.2 * (1.0 - std::tanh(1.0)), 1e-15);  // ~0.047681
  EXPECT_EQ(RewardPickPlace(x).active_stage, Stage::kReach);
}

TEST(RewardsTest, PickPlaceSuccessNeedsGripperNearby) {
  RewardInputs x = Far();
  x.object_in_bin = true;
  EXPECT_FALSE(RewardPickPlace(x).success);
  x.target_dist = 0.01;
  EXPECT_TRUE(RewardPickPlace(x).success);
  EXPECT_EQ(RewardPickPlace(x).reward, 1.0);
}

TEST(RewardsTest, PushExamples) {
  RewardInputs x = Far();
  x.goal_xy_dist = 0.03;
  EXPECT_TRUE(RewardPush(x).success);
  EXPECT_EQ(RewardPush(x).reward, 1.0);
  x.goal_xy_dist = 0.0300001;
  EXPECT_FALSE(RewardPush(x).success);

  x = Far();
  x.grasping = true;
  x.goal_xy_dist = 0.0;
  const auto r = RewardPush(x);
  EXPECT_DOUBLE_EQ(r.value(Stage::kApproach), 0.7);
  EXPECT_EQ(r.reward, 1.0);

  x = Far();
  x.target_dist = 0.05;
  EXPECT_DOUBLE_EQ(RewardPush(x).reward, 0.2 * (1.0 - std::tanh(0.5)));
}

TEST(RewardsTest, TrashcanExamples) {
  RewardInputs x = Far();
  x.object_above_trash_can = true;
  EXPECT_DOUBLE_EQ(RewardTrashcan(x).reward, 0.95);
  EXPECT_EQ(RewardTrashcan(x).active_stage, Stage::kDrop);
  x = Far();
  x.object_in_trash_can = true;
  x.gripper_in_trash_can = true;
  EXPECT_FALSE(RewardTrashcan(x).success);
  x.gripper_in_trash_can = false;
  EXPECT_EQ(RewardTrashcan(x).reward, 1.0);
}

TEST(RewardsTest, ShelfExamples) {
  RewardInputs x = Far();
  x.object_in_shelf = true;
  EXPECT_EQ(RewardShelf(x).reward, 1.0);
  x = Far();
  x.object_in_front_of_shelf = true;
  x.y_axis_orientation = 0.0;
  EXPECT_DOUBLE_EQ(RewardShelf(x).value(Stage::kAlign), 0.8);
  x.y_dist_shelf = 0.1;
  EXPECT_NEAR(RewardShelf(x).value(Stage::kApproach), 0.853788, 1e-6);
}

TEST(RewardsTest, StageListsFollowTheGateOrder) {
  auto names = [](Objective o) {
    std::vector<std::string> out;
    for (Stage s : StagesFor(o)) out.emplace_back(StageName(s));
    return out;
  };
  using V = std::vector<std::string>;
  EXPECT_EQ(names(Objective::kPickPlace),
            (V{"reach", "grasp", "lift", "approach", "lower", "success"}));
  EXPECT_EQ(names(Objective::kPush), (V{"reach", "grasp", "approach", "success"}));
  EXPECT_EQ(names(Objective::kTrashcan),
            (V{"reach", "grasp", "lift", "approach", "drop", "success"}));
  EXPECT_EQ(names(Objective::kShelf),
            (V{"reach", "grasp", "lift", "align", "approach", "success"}));
}

TEST(RewardsTest, MatchesOracleOnFuzzedInputs) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 2000; ++i) {
    const RewardInputs x = oracle::RandomInputs(rng);
    for (int o = 0; o < 4; ++o) {
      const Objective obj = static_cast<Objective>(o);
      const auto got = ComputeReward(obj, x);
      const auto want = oracle::ForObjective(obj, x);
      ASSERT_NEAR(got.reward, want.reward, 1e-12);
      ASSERT_EQ(got.success, want.success);
      for (const auto& [stage, value] : got.stage_values) {
        ASSERT_NEAR(value, want.stages.at(std::string(StageName(stage))), 1e-12);
      }
      ASSERT_GE(got.reward, 0.0);
      ASSERT_LE(got.reward, 1.0);
      ASSERT_EQ(got.reward == 1.0, got.success);
      ASSERT_EQ(got.value(got.active_stage), got.reward);
    }
  }
}

TEST(RewardsTest, SparseModeIsTheSuccessIndicator) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const RewardInputs x = oracle::RandomInputs(rng);
    for (int o = 0; o < 4; ++o) {
      const auto dense = ComputeReward(static_cast<Objective>(o), x, RewardMode::kDense);
      const auto sparse = ComputeReward(static_cast<Objective>(o), x, RewardMode::kSparse);
      EXPECT_EQ(sparse.success, dense.success);
      EXPECT_EQ(sparse.reward, dense.success ? 1.0 : 0.0);
    }
  }
}

TEST(RewardInputsTest, ObjectAtGoalHasZeroXyDistance) {
  const Simulator sim(TaskDescriptor::FromString("IIWA_Box_None_Push"));
  ArenaState s = sim.Reset(4);
  s.object_pose.position.head<2>() = s.goal_pose.position.head<2>();
  const RewardInputs in = ComputeRewardInputs(sim, s);
  EXPECT_EQ(in.goal_xy_dist, 0.0);
  EXPECT_TRUE(sim.Reward(s).success);
}

TEST(RewardInputsTest, DistancesAreNonNegativeAndReachIsToGraspPoint) {
  for (int id = 0; id < 256; id += 5) {
    const Simulator sim(TaskDescriptor::FromId(id));
    const ArenaState s = sim.Reset(id);
    const RewardInputs in = ComputeRewardInputs(sim, s);
    EXPECT_NEAR(in.target_dist,
                (sim.EndEffector(s).position - sim.GraspPoint(s)).norm(), 1e-12);
    for (double d : {in.z_dist_target_height, in.goal_xy_dist, in.z_dist_bin,
                     in.y_dist_shelf, in.y_axis_orientation}) {
      EXPECT_GE(d, 0.0);
    }
    EXPECT_FALSE(in.grasping);
    EXPECT_FALSE(in.object_in_bin);
    EXPECT_FALSE(in.object_in_shelf);
    EXPECT_FALSE(in.object_in_trash_can);
  }
}

}  // namespace
}  // namespace modarena
