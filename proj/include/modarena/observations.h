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

#ifndef MODARENA_OBSERVATIONS_H_
#define MODARENA_OBSERVATIONS_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modarena/simulator.h"
#include "modarena/task_space.h"

namespace modarena {

struct Segment {
  std::string_view name;
  int offset;
  int length;
};

// Observation layout. The first 78 entries are always present; the task
// multi-hot is appended only for descriptor-conditioned agents.
//   robot     (0, 32): sin q (7), cos q (7), joint vel (7), ee pose (7),
//                      finger pos (2), finger vel (2)
//   object   (32, 14): world pose (7), pose in the ee frame (7)
//   obstacle (46, 14): world pose (7), pose in the ee frame (7)
//   goal     (60, 18): world pose (7), pose in the ee frame (7),
//                      goal - object position (3), stage progress (1)
//   task     (78, 16): multi-hot descriptor
// Poses are position (3) followed by a unit quaternion (w, x, y, z).
inline constexpr Segment kRobotSegment{"robot", 0, 32};
inline constexpr Segment kObjectSegment{"object", 32, 14};
inline constexpr Segment kObstacleSegment{"obstacle", 46, 14};
inline constexpr Segment kGoalSegment{"goal", 60, 18};
inline constexpr Segment kTaskSegment{"task", 78, 16};

inline constexpr int kStateObservationSize = 78;
inline constexpr int kFullObservationSize = 94;

// `descriptor` selects the multi-hot appended to the observation. Pass
// std::nullopt for the 78-entry form. It normally equals sim.task(); the
// descriptor-swap analysis passes a different one.
std::vector<double> Observe(const Simulator& sim, const ArenaState& state,
                            std::optional<TaskDescriptor> descriptor);

inline std::vector<double> Observe(const Simulator& sim, const ArenaState& state,
                                   bool include_descriptor) {
  return Observe(sim, state,
                 include_descriptor ? std::optional(sim.task()) : std::nullopt);
}

struct DecomposedObservation {
  std::vector<double> obstacle;
  std::vector<double> object;
  std::vector<double> goal;
  std::vector<double> robot;
};

// Throws std::invalid_argument unless obs has 78 or 94 entries.
DecomposedObservation Decompose(std::span<const double> obs);

// Segment names, offsets and lengths for binding clients.
nlohmann::json ObservationLayoutJson();

}  // namespace modarena

#endif  // MODARENA_OBSERVATIONS_H_
