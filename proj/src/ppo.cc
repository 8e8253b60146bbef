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

#include "modarena/ppo.h"

#include <cmath>
#include <set>
#include <sstream>

namespace modarena {
namespace {

void Require(bool ok, const char* field) {
  if (!ok) throw std::invalid_argument(std::string("invalid PPO setting: ") + field);
}

std::vector<double> ToVector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd FromVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void PpoConfig::Validate() const {
  Require(gamma > 0 && gamma <= 1, "gamma");
  Require(clip_ratio > 0 && clip_ratio < 1, "clip_ratio");
  Require(pi_lr > 0, "pi_lr");
  Require(v_lr > 0, "v_lr");
  Require(pi_iters > 0, "pi_iters");
  Require(v_iters > 0, "v_iters");
  Require(target_kl > 0, "target_kl");
  Require(steps_per_task_per_update > 0, "steps_per_task_per_update");
  Require(total_steps_per_task > 0, "total_steps_per_task");
  Require(gae_lambda >= 0 && gae_lambda <= 1, "gae_lambda");
  Require(single_task_hidden > 0, "single_task_hidden");
  Require(multi_task_hidden > 0, "multi_task_hidden");
  Require(hidden_layers > 0, "hidden_layers");
}

int PpoConfig::HiddenUnits(AgentKind kind) const {
  return kind == AgentKind::kSingleTask ? single_task_hidden : multi_task_hidden;
}

nlohmann::json PpoConfig::ToJson() const {
  return {{"gamma", gamma},
          {"clip_ratio", clip_ratio},
          {"pi_lr", pi_lr},
          {"v_lr", v_lr},
          {"pi_iters", pi_iters},
          {"v_iters", v_iters},
          {"target_kl", target_kl},
          {"steps_per_task_per_update", steps_per_task_per_update},
          {"total_steps_per_task", total_steps_per_task},
          {"gae_lambda", gae_lambda},
          {"single_task_hidden", single_task_hidden},
          {"multi_task_hidden", multi_task_hidden},
          {"hidden_layers", hidden_layers}};
}

PpoConfig PpoConfig::FromJson(const nlohmann::json& j) {
  PpoConfig c;
  const nlohmann::json defaults = c.ToJson();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) {
      throw std::invalid_argument("unknown PPO setting: " + key);
    }
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("gamma", c.gamma);
  get("clip_ratio", c.clip_ratio);
  get("pi_lr", c.pi_lr);
  get("v_lr", c.v_lr);
  get("pi_iters", c.pi_iters);
  get("v_iters", c.v_iters);
  get("target_kl", c.target_kl);
  get("steps_per_task_per_update", c.steps_per_task_per_update);
  get("total_steps_per_task", c.total_steps_per_task);
  get("gae_lambda", c.gae_lambda);
  get("single_task_hidden", c.single_task_hidden);
  get("multi_task_hidden", c.multi_task_hidden);
  get("hidden_layers", c.hidden_layers);
  c.Validate();
  return c;
}

GaeResult ComputeGae(const Rollout& rollout, double gamma, double lambda) {
  const size_t n = rollout.size();
  if (n == 0) throw std::invalid_argument("cannot compute advantages of an empty rollout");
  if (rollout.values.size() != n) {
    throw std::invalid_argument("rollout values and rewards differ in length");
  }
  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double gae = 0.0;
  double ret = rollout.last_value;
  for (size_t k = n; k-- > 0;) {
    const double next_v = k + 1 < n ? rollout.values[k + 1] : rollout.last_value;
    const double delta = rollout.rewards[k] + gamma * next_v - rollout.values[k];
    gae = delta + gamma * lambda * gae;
    ret = rollout.rewards[k] + gamma * ret;
    out.advantages[k] = gae;
    out.returns[k] = ret;
  }
  return out;
}

void NormalizeAdvantages(Eigen::VectorXd& adv) {
  if (adv.size() == 0) return;
  const double mean = adv.mean();
  const double var = (adv.array() - mean).square().mean();
  adv.array() -= mean;
  if (var > 0) adv /= std::sqrt(var);
}

PpoBatch MakeBatch(const std::vector<Rollout>& rollouts, double gamma,
                   double lambda) {
  Eigen::Index rows = 0;
  int obs_dim = -1;
  for (const Rollout& r : rollouts) {
    rows += static_cast<Eigen::Index>(r.size());
    if (r.size() > 0) obs_dim = static_cast<int>(r.observations.front().size());
  }
  if (rows == 0) throw std::invalid_argument("cannot build an empty PPO batch");
  PpoBatch b;
  b.obs.resize(rows, obs_dim);
  b.actions.resize(rows, kActionSize);
  b.log_probs.resize(rows);
  b.advantages.resize(rows);
  b.returns.resize(rows);
  Eigen::Index row = 0;
  for (const Rollout& r : rollouts) {
    if (r.size() == 0) continue;
    const GaeResult g = ComputeGae(r, gamma, lambda);
    for (size_t t = 0; t < r.size(); ++t, ++row) {
      for (int c = 0; c < obs_dim; ++c) b.obs(row, c) = r.observations[t][c];
      for (int c = 0; c < kActionSize; ++c) b.actions(row, c) = r.actions[t][c];
      b.log_probs(row) = r.log_probs[t];
      b.advantages(row) = g.advantages[t];
      b.returns(row) = g.returns[t];
    }
  }
  NormalizeAdvantages(b.advantages);
  return b;
}

ClippedSurrogate ClippedSurrogateLoss(const Eigen::VectorXd& log_prob,
                                      const Eigen::VectorXd& log_prob_old,
                                      const Eigen::VectorXd& advantages,
                                      double clip_ratio) {
  const Eigen::Index n = log_prob.size();
  ClippedSurrogate s;
  s.d_log_prob.resize(n);
  double loss = 0.0;
  double kl = 0.0;
  int clipped = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::exp(log_prob(i) - log_prob_old(i));
    const double a = advantages(i);
    const double rc = std::clamp(r, 1.0 - clip_ratio, 1.0 + clip_ratio);
    // The gradient flows only when the unclipped term is the minimum.
    const bool unclipped = r * a <= rc * a;
    loss += std::min(r * a, rc * a);
    s.d_log_prob(i) = unclipped ? -r * a / static_cast<double>(n) : 0.0;
    kl += log_prob_old(i) - log_prob(i);
    if (r > 1.0 + clip_ratio || r < 1.0 - clip_ratio) ++clipped;
  }
  s.loss = -loss / static_cast<double>(n);
  s.approx_kl = kl / static_cast<double>(n);
  s.clip_frac = static_cast<double>(clipped) / static_cast<double>(n);
  return s;
}

Adam::Adam(Eigen::Index size, double lr)
    : lr_(lr), m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {}

void Adam::Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

nlohmann::json Adam::ToJson() const {
  return {{"lr", lr_}, {"t", t_}, {"m", ToVector(m_)}, {"v", ToVector(v_)}};
}

Adam Adam::FromJson(const nlohmann::json& j) {
  Adam a;
  a.lr_ = j.at("lr").get<double>();
  a.t_ = j.at("t").get<std::int64_t>();
  a.m_ = FromVector(j.at("m").get<std::vector<double>>());
  a.v_ = FromVector(j.at("v").get<std::vector<double>>());
  if (a.m_.size() != a.v_.size()) {
    throw std::invalid_argument("optimizer moment sizes differ");
  }
  return a;
}

double PolicyLossAndGrad(const ActorCritic& policy, const PpoBatch& batch,
                         double clip_ratio, Eigen::VectorXd* grad,
                         ClippedSurrogate* surrogate) {
  NetCache cache;
  const Eigen::MatrixXd mean = policy.pi().Forward(batch.obs, grad ? &cache : nullptr);
  const Eigen::VectorXd logp = GaussianLogProb(mean, batch.actions, policy.log_std());
  ClippedSurrogate s =
      ClippedSurrogateLoss(logp, batch.log_probs, batch.advantages, clip_ratio);
  if (grad) {
    const Eigen::MatrixXd d_mean =
        GaussianLogProbGrad(mean, batch.actions, policy.log_std()).array().colwise() *
        s.d_log_prob.array();
    grad->setZero(policy.pi().num_params());
    policy.pi().Backward(cache, d_mean, *grad);
  }
  const double loss = s.loss;
  if (surrogate) *surrogate = std::move(s);
  return loss;
}

double ValueLossAndGrad(const ActorCritic& policy, const PpoBatch& batch,
                        Eigen::VectorXd* grad) {
  NetCache cache;
  const Eigen::MatrixXd v = policy.v().Forward(batch.obs, grad ? &cache : nullptr);
  const Eigen::VectorXd err = v.col(0) - batch.returns;
  const double n = static_cast<double>(batch.size());
  if (grad) {
    grad->setZero(policy.v().num_params());
    policy.v().Backward(cache, (2.0 / n) * err, *grad);
  }
  return err.squaredNorm() / n;
}

PpoLearner::PpoLearner(const ActorCritic& policy, const PpoConfig& config)
    : config_(config),
      pi_opt_(policy.pi().num_params(), config.pi_lr),
      v_opt_(policy.v().num_params(), config.v_lr) {}

UpdateStats PpoLearner::Update(ActorCritic& policy, const PpoBatch& batch) {
  auto check = [](double loss, const Eigen::VectorXd& grad, const char* what,
                  int iter) {
    if (!std::isfinite(loss) || !grad.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite " << what << " loss (" << loss << ") at iteration "
          << iter;
      throw TrainingDivergence(msg.str());
    }
  };

  UpdateStats stats;
  Eigen::VectorXd grad;
  for (int i = 0; i < config_.pi_iters; ++i) {
    ClippedSurrogate s;
    const double loss =
        PolicyLossAndGrad(policy, batch, config_.clip_ratio, &grad, &s);
    check(loss, grad, "policy", i);
    if (i == 0) stats.pi_loss = loss;
    stats.kl = s.approx_kl;
    stats.clip_frac = s.clip_frac;
    if (s.approx_kl > config_.target_kl) break;
    pi_opt_.Step(policy.pi().params(), grad);
    stats.stop_iter = i + 1;
  }
  for (int i = 0; i < config_.v_iters; ++i) {
    const double loss = ValueLossAndGrad(policy, batch, &grad);
    check(loss, grad, "value", i);
    if (i == 0) stats.v_loss = loss;
    v_opt_.Step(policy.v().params(), grad);
  }
  return stats;
}

}  // namespace modarena
