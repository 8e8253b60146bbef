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

#include "modarena/checkpoint.h"

#include <fstream>
#include <sstream>

namespace modarena {
namespace {

std::vector<double> ToVector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

void LoadParams(Network& net, const nlohmann::json& j) {
  const auto p = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(p.size()) != net.num_params()) {
    throw std::invalid_argument("checkpoint parameter count " +
                                std::to_string(p.size()) + " does not match spec (" +
                                std::to_string(net.num_params()) + ")");
  }
  net.params() = Eigen::Map<const Eigen::VectorXd>(p.data(), net.num_params());
}

}  // namespace

nlohmann::json ActorCriticToJson(const ActorCritic& ac) {
  return {{"pi_spec", ac.pi().SpecJson()},
          {"pi_params", ToVector(ac.pi().params())},
          {"v_spec", ac.v().SpecJson()},
          {"v_params", ToVector(ac.v().params())},
          {"log_std", ac.log_std()}};
}

ActorCritic ActorCriticFromJson(const nlohmann::json& j) {
  auto pi = NetworkFromSpecJson(j.at("pi_spec"));
  auto v = NetworkFromSpecJson(j.at("v_spec"));
  LoadParams(*pi, j.at("pi_params"));
  LoadParams(*v, j.at("v_params"));
  return ActorCritic(std::move(pi), std::move(v), j.at("log_std").get<LogStd>());
}

nlohmann::json CurveRecordToJson(const CurveRecord& r) {
  return {{"agent", r.agent},
          {"task", r.task},
          {"steps", r.steps},
          {"mean_return", r.mean_return},
          {"success_rate", r.success_rate},
          {"seed", r.seed}};
}

CurveRecord CurveRecordFromJson(const nlohmann::json& j) {
  return {j.at("agent").get<std::string>(),       j.at("task").get<std::string>(),
          j.at("steps").get<std::int64_t>(),      j.at("mean_return").get<double>(),
          j.at("success_rate").get<double>(),     j.at("seed").get<std::uint64_t>()};
}

nlohmann::json TrainStateToJson(const TrainState& state) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : state.model.train_tasks()) tasks.push_back(t.ToString());
  nlohmann::json members = nlohmann::json::array();
  for (size_t i = 0; i < state.model.members().size(); ++i) {
    nlohmann::json m = ActorCriticToJson(state.model.members()[i]);
    if (i < state.learners.size()) {
      m["pi_optimizer"] = state.learners[i].pi_optimizer().ToJson();
      m["v_optimizer"] = state.learners[i].v_optimizer().ToJson();
    }
    members.push_back(std::move(m));
  }
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& r : state.curve) curve.push_back(CurveRecordToJson(r));
  return {{"version", kCheckpointVersion},
          {"agent", AgentKindName(state.model.kind())},
          {"train_tasks", tasks},
          {"updates_done", state.updates_done},
          {"members", members},
          {"curve", curve}};
}

TrainState TrainStateFromJson(const nlohmann::json& j, const PpoConfig& ppo) {
  if (j.at("version").get<int>() != kCheckpointVersion) {
    throw std::invalid_argument("unsupported checkpoint version");
  }
  const AgentKind kind = ParseAgentKind(j.at("agent").get<std::string>());
  std::vector<TaskDescriptor> tasks;
  for (const auto& t : j.at("train_tasks")) {
    tasks.push_back(TaskDescriptor::FromString(t.get<std::string>()));
  }
  std::vector<ActorCritic> members;
  std::vector<PpoLearner> learners;
  for (const auto& m : j.at("members")) {
    members.push_back(ActorCriticFromJson(m));
    if (m.contains("pi_optimizer")) {
      learners.emplace_back(Adam::FromJson(m.at("pi_optimizer")),
                            Adam::FromJson(m.at("v_optimizer")), ppo);
    } else {
      learners.emplace_back(members.back(), ppo);
    }
  }
  std::vector<CurveRecord> curve;
  for (const auto& r : j.at("curve")) curve.push_back(CurveRecordFromJson(r));
  return TrainState{TrainedModel(kind, std::move(tasks), std::move(members)),
                    std::move(learners), j.at("updates_done").get<std::int64_t>(),
                    std::move(curve)};
}

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifact("missing file: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& j) {
  WriteTextFile(path, j.dump(2) + "\n");
}

void SaveCheckpoint(const std::filesystem::path& path, const TrainState& state) {
  WriteTextFile(path, TrainStateToJson(state).dump());
}

TrainState LoadCheckpoint(const std::filesystem::path& path, const PpoConfig& ppo) {
  return TrainStateFromJson(ReadJsonFile(path), ppo);
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  return std::move(LoadCheckpoint(path, PpoConfig{}).model);
}

}  // namespace modarena
