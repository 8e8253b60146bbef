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

#ifndef MODARENA_POLICY_H_
#define MODARENA_POLICY_H_

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "modarena/network.h"
#include "modarena/simulator.h"
#include "modarena/task_space.h"

namespace modarena {

enum class AgentKind { kSingleTask, kMultiTask, kCompositional };

std::string_view AgentKindName(AgentKind kind);  // "single_task", ...
AgentKind ParseAgentKind(std::string_view name);

// Fixed exploration noise: unit std for joints, exp(-0.5) for the gripper.
// Never trained.
using LogStd = std::array<double, kActionSize>;
inline constexpr LogStd kDefaultLogStd = {0, 0, 0, 0, 0, 0, 0, -0.5};

// Diagonal Gaussian log-density of `action` under N(mean, exp(2 log_std)).
double GaussianLogProb(std::span<const double> mean,
                       std::span<const double> action, const LogStd& log_std);
// Row-wise log-densities.
Eigen::VectorXd GaussianLogProb(const Eigen::MatrixXd& mean,
                                const Eigen::MatrixXd& action,
                                const LogStd& log_std);
// d log p / d mean, row-wise.
Eigen::MatrixXd GaussianLogProbGrad(const Eigen::MatrixXd& mean,
                                    const Eigen::MatrixXd& action,
                                    const LogStd& log_std);

struct SampledAction {
  std::vector<double> action;
  double log_prob = 0.0;
};
SampledAction SampleGaussian(std::span<const double> mean, const LogStd& log_std,
                             std::mt19937_64& rng);

// Gaussian policy with a tanh mean head and a separate value network.
class ActorCritic {
 public:
  ActorCritic(std::unique_ptr<Network> pi, std::unique_ptr<Network> v,
              LogStd log_std = kDefaultLogStd);
  ActorCritic(const ActorCritic& other);
  ActorCritic& operator=(const ActorCritic& other);
  ActorCritic(ActorCritic&&) = default;
  ActorCritic& operator=(ActorCritic&&) = default;

  Network& pi() { return *pi_; }
  const Network& pi() const { return *pi_; }
  Network& v() { return *v_; }
  const Network& v() const { return *v_; }
  const LogStd& log_std() const { return log_std_; }
  int obs_dim() const { return pi_->input_dim(); }

  // Row-wise action means in (-1, 1) and values.
  Eigen::MatrixXd Mean(const Eigen::MatrixXd& obs) const;
  Eigen::VectorXd Value(const Eigen::MatrixXd& obs) const;
  std::vector<double> Mean(std::span<const double> obs) const;
  double Value(std::span<const double> obs) const;

  void Initialize(std::mt19937_64& rng);

 private:
  std::unique_ptr<Network> pi_;
  std::unique_ptr<Network> v_;
  LogStd log_std_;
};

// Single-task: 78 -> hidden^layers -> 8 on the descriptor-free observation.
// Multi-task: 94 -> hidden^layers -> 8. Compositional: routed module graph.
// Value networks mirror the policy with a linear scalar head.
ActorCritic MakeActorCritic(AgentKind kind, int hidden_units, int hidden_layers);
std::unique_ptr<Network> NetworkFromSpecJson(const nlohmann::json& spec);

// A trained agent: one ActorCritic per training task for single-task
// agents, one shared ActorCritic otherwise.
class TrainedModel {
 public:
  TrainedModel(AgentKind kind, std::vector<TaskDescriptor> train_tasks,
               std::vector<ActorCritic> members);

  AgentKind kind() const { return kind_; }
  bool UsesDescriptor() const { return kind_ != AgentKind::kSingleTask; }
  const std::vector<TaskDescriptor>& train_tasks() const { return train_tasks_; }
  std::vector<ActorCritic>& members() { return members_; }
  const std::vector<ActorCritic>& members() const { return members_; }

  // Throws std::invalid_argument when a single-task model has no policy
  // for `task`.
  const ActorCritic& PolicyFor(const TaskDescriptor& task) const;
  ActorCritic& PolicyFor(const TaskDescriptor& task);
  bool HasPolicyFor(const TaskDescriptor& task) const;

  // FNV-1a over all parameters and log-stds.
  std::uint64_t ParameterHash() const;

 private:
  int MemberIndex(const TaskDescriptor& task) const;

  AgentKind kind_;
  std::vector<TaskDescriptor> train_tasks_;
  std::vector<ActorCritic> members_;
};

}  // namespace modarena

#endif  // MODARENA_POLICY_H_
