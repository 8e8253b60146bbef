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

#ifndef MODARENA_CHECKPOINT_H_
#define MODARENA_CHECKPOINT_H_

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "modarena/policy.h"
#include "modarena/trainer.h"

namespace modarena {

inline constexpr int kCheckpointVersion = 1;

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an expected artifact does not exist.
class MissingArtifact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json ActorCriticToJson(const ActorCritic& ac);
ActorCritic ActorCriticFromJson(const nlohmann::json& j);

// Full training state: network specs, flat parameters, fixed log-stds,
// optimizer moments, update count and learning curve.
nlohmann::json TrainStateToJson(const TrainState& state);
TrainState TrainStateFromJson(const nlohmann::json& j, const PpoConfig& ppo);

// Writes atomically (temporary file + rename).
void SaveCheckpoint(const std::filesystem::path& path, const TrainState& state);
TrainState LoadCheckpoint(const std::filesystem::path& path, const PpoConfig& ppo);
TrainedModel LoadModel(const std::filesystem::path& path);

// JSON file helpers raising IoError / MissingArtifact.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json CurveRecordToJson(const CurveRecord& r);
CurveRecord CurveRecordFromJson(const nlohmann::json& j);

}  // namespace modarena

#endif  // MODARENA_CHECKPOINT_H_
