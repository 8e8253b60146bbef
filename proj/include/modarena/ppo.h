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

#ifndef MODARENA_PPO_H_
#define MODARENA_PPO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "modarena/policy.h"

namespace modarena {

struct PpoConfig {
  double gamma = 0.99;
  double clip_ratio = 0.2;
  double pi_lr = 1e-4;
  double v_lr = 1e-4;
  int pi_iters = 128;
  int v_iters = 128;
  double target_kl = 0.02;
  std::int64_t steps_per_task_per_update = 16000;
  std::int64_t total_steps_per_task = 10'000'000;
  double gae_lambda = 0.97;
  int single_task_hidden = 64;
  int multi_task_hidden = 256;
  int hidden_layers = 2;

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
  int HiddenUnits(AgentKind kind) const;
  nlohmann::json ToJson() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static PpoConfig FromJson(const nlohmann::json& j);
};

// Raised when a loss or gradient becomes non-finite.
class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One contiguous episode fragment collected with a fixed policy.
struct Rollout {
  std::vector<std::vector<double>> observations;
  std::vector<std::vector<double>> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  // Value estimate of the state after the last step; 0 for true terminals.
  double last_value = 0.0;

  size_t size() const { return rewards.size(); }
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // discounted rewards-to-go with bootstrap
};

// delta_t = r_t + gamma V_{t+1} - V_t; A_t = sum_k (gamma lambda)^k delta_{t+k}.
// Throws std::invalid_argument on an empty rollout.
GaeResult ComputeGae(const Rollout& rollout, double gamma, double lambda);

// Zero mean, unit variance (unchanged when the variance vanishes).
void NormalizeAdvantages(Eigen::VectorXd& adv);

struct PpoBatch {
  Eigen::MatrixXd obs;
  Eigen::MatrixXd actions;
  Eigen::VectorXd log_probs;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  Eigen::Index size() const { return obs.rows(); }
};

// Concatenates rollouts; advantages are normalized over the whole batch.
PpoBatch MakeBatch(const std::vector<Rollout>& rollouts, double gamma,
                   double lambda);

struct ClippedSurrogate {
  double loss = 0.0;
  double approx_kl = 0.0;
  double clip_frac = 0.0;
  Eigen::VectorXd d_log_prob;  // d loss / d log pi(a|s), per row
};

// loss = -mean(min(r A, clip(r, 1-eps, 1+eps) A)), r = exp(logp - logp_old).
ClippedSurrogate ClippedSurrogateLoss(const Eigen::VectorXd& log_prob,
                                      const Eigen::VectorXd& log_prob_old,
                                      const Eigen::VectorXd& advantages,
                                      double clip_ratio);

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index size, double lr);

  void Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  nlohmann::json ToJson() const;
  static Adam FromJson(const nlohmann::json& j);

  double lr() const { return lr_; }
  std::int64_t steps() const { return t_; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::int64_t t_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

struct UpdateStats {
  double pi_loss = 0.0;  // before the first policy step
  double v_loss = 0.0;   // before the first value step
  double kl = 0.0;       // at the last evaluated policy iterate
  double clip_frac = 0.0;
  int stop_iter = 0;     // policy steps taken
};

// Full-batch PPO update with KL early stopping. log_std is never touched.
class PpoLearner {
 public:
  PpoLearner(const ActorCritic& policy, const PpoConfig& config);
  PpoLearner(Adam pi_opt, Adam v_opt, const PpoConfig& config)
      : config_(config), pi_opt_(std::move(pi_opt)), v_opt_(std::move(v_opt)) {}

  // Throws TrainingDivergence on non-finite losses; parameters are then left
  // at their last finite values.
  UpdateStats Update(ActorCritic& policy, const PpoBatch& batch);

  const Adam& pi_optimizer() const { return pi_opt_; }
  const Adam& v_optimizer() const { return v_opt_; }

 private:
  PpoConfig config_;
  Adam pi_opt_;
  Adam v_opt_;
};

// Policy loss and its gradient with respect to the policy parameters.
double PolicyLossAndGrad(const ActorCritic& policy, const PpoBatch& batch,
                         double clip_ratio, Eigen::VectorXd* grad,
                         ClippedSurrogate* surrogate = nullptr);
// Mean squared value error and its gradient.
double ValueLossAndGrad(const ActorCritic& policy, const PpoBatch& batch,
                        Eigen::VectorXd* grad);

}  // namespace modarena

#endif  // MODARENA_PPO_H_
