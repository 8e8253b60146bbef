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

#include "modarena/policy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "modarena/observations.h"

namespace modarena {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

void Fnv(std::uint64_t& h, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
}

OutputActivation ParseActivation(const std::string& name) {
  if (name == "tanh") return OutputActivation::kTanh;
  if (name == "linear") return OutputActivation::kLinear;
  throw std::invalid_argument("unknown output activation: " + name);
}

}  // namespace

std::string_view AgentKindName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kSingleTask:
      return "single_task";
    case AgentKind::kMultiTask:
      return "multi_task";
    case AgentKind::kCompositional:
      return "compositional";
  }
  return "?";
}

AgentKind ParseAgentKind(std::string_view name) {
  std::string n;
  for (char c : name) {
    if (c == '-') c = '_';
    n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (n == "single_task" || n == "single") return AgentKind::kSingleTask;
  if (n == "multi_task" || n == "multi") return AgentKind::kMultiTask;
  if (n == "compositional") return AgentKind::kCompositional;
  throw std::invalid_argument(
      "unknown agent '" + std::string(name) +
      "'; expected single_task, multi_task or compositional");
}

double GaussianLogProb(std::span<const double> mean,
                       std::span<const double> action, const LogStd& log_std) {
  if (mean.size() != log_std.size() || action.size() != log_std.size()) {
    throw std::invalid_argument("Gaussian log-prob size mismatch");
  }
  double lp = 0.0;
  for (size_t i = 0; i < log_std.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i] - kHalfLog2Pi;
  }
  return lp;
}

Eigen::VectorXd GaussianLogProb(const Eigen::MatrixXd& mean,
                                const Eigen::MatrixXd& action,
                                const LogStd& log_std) {
  const Eigen::Map<const Eigen::RowVectorXd> ls(log_std.data(), log_std.size());
  const Eigen::ArrayXXd z =
      (action - mean).array().rowwise() * (-ls.array()).exp();
  return (-0.5 * z.square().rowwise().sum()).matrix().array() - ls.sum() -
         kHalfLog2Pi * static_cast<double>(log_std.size());
}

Eigen::MatrixXd GaussianLogProbGrad(const Eigen::MatrixXd& mean,
                                    const Eigen::MatrixXd& action,
                                    const LogStd& log_std) {
  const Eigen::Map<const Eigen::RowVectorXd> ls(log_std.data(), log_std.size());
  return ((action - mean).array().rowwise() * (-2.0 * ls.array()).exp()).matrix();
}

SampledAction SampleGaussian(std::span<const double> mean, const LogStd& log_std,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SampledAction out;
  out.action.resize(mean.size());
  for (size_t i = 0; i < mean.size(); ++i) {
    out.action[i] = mean[i] + std::exp(log_std.at(i)) * normal(rng);
  }
  out.log_prob = GaussianLogProb(mean, out.action, log_std);
  return out;
}

ActorCritic::ActorCritic(std::unique_ptr<Network> pi, std::unique_ptr<Network> v,
                         LogStd log_std)
    : pi_(std::move(pi)), v_(std::move(v)), log_std_(log_std) {
  if (pi_->output_dim() != kActionSize || v_->output_dim() != 1 ||
      pi_->input_dim() != v_->input_dim()) {
    throw std::invalid_argument("actor-critic network shapes are inconsistent");
  }
}

ActorCritic::ActorCritic(const ActorCritic& other)
    : pi_(other.pi_->Clone()), v_(other.v_->Clone()), log_std_(other.log_std_) {}

ActorCritic& ActorCritic::operator=(const ActorCritic& other) {
  if (this != &other) {
    pi_ = other.pi_->Clone();
    v_ = other.v_->Clone();
    log_std_ = other.log_std_;
  }
  return *this;
}

Eigen::MatrixXd ActorCritic::Mean(const Eigen::MatrixXd& obs) const {
  return pi_->Forward(obs, nullptr);
}

Eigen::VectorXd ActorCritic::Value(const Eigen::MatrixXd& obs) const {
  return v_->Forward(obs, nullptr).col(0);
}

std::vector<double> ActorCritic::Mean(std::span<const double> obs) const {
  const Eigen::MatrixXd row = Eigen::Map<const Eigen::RowVectorXd>(
      obs.data(), static_cast<Eigen::Index>(obs.size()));
  const Eigen::MatrixXd m = Mean(row);
  return {m.data(), m.data() + m.size()};
}

double ActorCritic::Value(std::span<const double> obs) const {
  const Eigen::MatrixXd row = Eigen::Map<const Eigen::RowVectorXd>(
      obs.data(), static_cast<Eigen::Index>(obs.size()));
  return Value(row)(0);
}

void ActorCritic::Initialize(std::mt19937_64& rng) {
  pi_->InitializeUniform(rng);
  v_->InitializeUniform(rng);
}

ActorCritic MakeActorCritic(AgentKind kind, int hidden_units, int hidden_layers) {
  if (hidden_units <= 0 || hidden_layers <= 0) {
    throw std::invalid_argument("hidden units and layers must be positive");
  }
  if (kind == AgentKind::kCompositional) {
    return ActorCritic(
        std::make_unique<CompositionalNetwork>(kActionSize, OutputActivation::kTanh),
        std::make_unique<CompositionalNetwork>(1, OutputActivation::kLinear));
  }
  const int in = kind == AgentKind::kSingleTask ? kStateObservationSize
                                                : kFullObservationSize;
  std::vector<int> sizes = {in};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(hidden_units);
  std::vector<int> v_sizes = sizes;
  sizes.push_back(kActionSize);
  v_sizes.push_back(1);
  return ActorCritic(
      std::make_unique<Mlp>(MlpSpec{sizes, OutputActivation::kTanh}),
      std::make_unique<Mlp>(MlpSpec{v_sizes, OutputActivation::kLinear}));
}

std::unique_ptr<Network> NetworkFromSpecJson(const nlohmann::json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type != "mlp" && type != "compositional") {
    throw std::invalid_argument("unknown network type: " + type);
  }
  const OutputActivation act =
      ParseActivation(spec.at("output_activation").get<std::string>());
  if (type == "mlp") {
    return std::make_unique<Mlp>(
        MlpSpec{spec.at("layer_sizes").get<std::vector<int>>(), act});
  }
  if (type == "compositional") {
    return std::make_unique<CompositionalNetwork>(spec.at("output_dim").get<int>(),
                                                  act);
  }
  throw std::invalid_argument("unknown network type: " + type);
}

TrainedModel::TrainedModel(AgentKind kind, std::vector<TaskDescriptor> train_tasks,
                           std::vector<ActorCritic> members)
    : kind_(kind), train_tasks_(std::move(train_tasks)), members_(std::move(members)) {
  const size_t expected = kind_ == AgentKind::kSingleTask ? train_tasks_.size() : 1;
  if (members_.size() != expected) {
    throw std::invalid_argument("trained model has " +
                                std::to_string(members_.size()) +
                                " policies, expected " + std::to_string(expected));
  }
  const int obs = UsesDescriptor() ? kFullObservationSize : kStateObservationSize;
  for (const ActorCritic& m : members_) {
    if (m.obs_dim() != obs) {
      throw std::invalid_argument("policy input width does not match agent kind");
    }
  }
}

int TrainedModel::MemberIndex(const TaskDescriptor& task) const {
  if (kind_ != AgentKind::kSingleTask) return 0;
  const auto it = std::find(train_tasks_.begin(), train_tasks_.end(), task);
  if (it == train_tasks_.end()) return -1;
  return static_cast<int>(it - train_tasks_.begin());
}

bool TrainedModel::HasPolicyFor(const TaskDescriptor& task) const {
  return MemberIndex(task) >= 0;
}

const ActorCritic& TrainedModel::PolicyFor(const TaskDescriptor& task) const {
  const int i = MemberIndex(task);
  if (i < 0) {
    throw std::invalid_argument("single-task model has no policy for " +
                                task.ToString());
  }
  return members_[i];
}

ActorCritic& TrainedModel::PolicyFor(const TaskDescriptor& task) {
  return const_cast<ActorCritic&>(std::as_const(*this).PolicyFor(task));
}

std::uint64_t TrainedModel::ParameterHash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const ActorCritic& m : members_) {
    for (double x : m.pi().params()) Fnv(h, x);
    for (double x : m.v().params()) Fnv(h, x);
    for (double x : m.log_std()) Fnv(h, x);
  }
  return h;
}

}  // namespace modarena
