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

#include "modarena/network.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gradcheck.h"
#include "modarena/policy.h"

namespace modarena {
namespace {

constexpr double kTol = 1e-4;

TEST(NetworkTest, MlpParameterCountAndShape) {
  Mlp net({{78, 64, 64, 8}, OutputActivation::kTanh});
  EXPECT_EQ(net.num_params(), 78 * 64 + 64 + 64 * 64 + 64 + 64 * 8 + 8);
  EXPECT_EQ(net.input_dim(), 78);
  EXPECT_EQ(net.output_dim(), 8);
  EXPECT_THROW(Mlp({{78}, OutputActivation::kTanh}), std::invalid_argument);
  EXPECT_THROW(net.Forward(Eigen::MatrixXd::Zero(2, 77), nullptr),
               std::invalid_argument);
}

TEST(NetworkTest, MlpForwardMatchesHandComputation) {
  Mlp net({{2, 2, 1}, OutputActivation::kLinear});
  // Layer 1: W (2x2 column-major) then b; layer 2: W (1x2) then b.
  net.params() << 0.5, -1.0, 2.0, 0.25, 0.1, -0.2, 1.5, -0.5, 0.3;
  Eigen::MatrixXd x(1, 2);
  x << 0.4, -0.6;
  const double h0 = std::tanh(0.5 * 0.4 + 2.0 * -0.6 + 0.1);
  const double h1 = std::tanh(-1.0 * 0.4 + 0.25 * -0.6 - 0.2);
  EXPECT_NEAR(net.Forward(x, nullptr)(0, 0), 1.5 * h0 - 0.5 * h1 + 0.3, 1e-15);
}

TEST(NetworkTest, UniformInitRespectsFanIn) {
  Mlp net({{78, 64, 8}, OutputActivation::kTanh});
  std::mt19937_64 rng(0);
  net.InitializeUniform(rng);
  const double bound0 = 1.0 / std::sqrt(78.0);
  for (Eigen::Index i = 0; i < 78 * 64 + 64; ++i) {
    ASSERT_LE(std::abs(net.params()[i]), bound0);
  }
  const double bound1 = 1.0 / std::sqrt(64.0);
  for (Eigen::Index i = 78 * 64 + 64; i < net.num_params(); ++i) {
    ASSERT_LE(std::abs(net.params()[i]), bound1);
  }
  EXPECT_GT(net.params().cwiseAbs().maxCoeff(), 0.5 * bound1);
}

TEST(NetworkTest, MlpGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(1);
  for (auto act : {OutputActivation::kTanh, OutputActivation::kLinear}) {
    Mlp net({{78, 64, 64, 8}, act});
    net.InitializeUniform(rng);
    const auto obs = gradcheck::RandomObservations(12, 78, false, rng);
    EXPECT_LT(gradcheck::NetworkCheck(net, obs, 600, rng), kTol);
  }
}

TEST(NetworkTest, CompositionalGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  CompositionalNetwork net(8, OutputActivation::kTanh);
  net.InitializeUniform(rng);
  const auto obs = gradcheck::RandomObservations(40, 94, true, rng);
  EXPECT_LT(gradcheck::NetworkCheck(net, obs, 1500, rng), kTol);
}

TEST(NetworkTest, CompositionalBatchEqualsRowByRow) {
  std::mt19937_64 rng(3);
  CompositionalNetwork net(8, OutputActivation::kTanh);
  net.InitializeUniform(rng);
  const auto obs = gradcheck::RandomObservations(30, 94, true, rng);
  const Eigen::MatrixXd all = net.Forward(obs, nullptr);
  for (int r = 0; r < obs.rows(); ++r) {
    const Eigen::MatrixXd one = net.Forward(obs.row(r), nullptr);
    EXPECT_LT((one - all.row(r)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NetworkTest, CompositionalParameterParity) {
  const CompositionalNetwork comp(8, OutputActivation::kTanh);
  const ActorCritic multi = MakeActorCritic(AgentKind::kMultiTask, 256, 2);
  const double ratio = static_cast<double>(comp.num_params()) /
                       static_cast<double>(multi.pi().num_params());
  EXPECT_GT(ratio, 0.8);
  EXPECT_LT(ratio, 1.2);
}

TEST(NetworkTest, RoutingSwapsExactlyOneModulePerAxisChange) {
  for (const auto& t : EnumerateTasks()) {
    const auto base = CompositionalNetwork::RoutedModules(t);
    for (Axis axis : kAllAxes) {
      for (int e = 0; e < kElementsPerAxis; ++e) {
        if (e == t.index(axis)) continue;
        const auto other = CompositionalNetwork::RoutedModules(t.With({axis, e}));
        int changed = 0;
        for (int l = 0; l < 4; ++l) changed += base[l] != other[l];
        ASSERT_EQ(changed, 1);
      }
    }
  }
}

// Modules whose parameters receive gradient for a single task.
std::set<int> TouchedModules(const CompositionalNetwork& net, const TaskDescriptor& t,
                             std::mt19937_64& rng) {
  auto obs = gradcheck::RandomObservations(3, 94, false, rng);
  const auto hot = EncodeMultiHot(t);
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 16; ++k) obs(r, 78 + k) = hot[k];
  }
  NetCache cache;
  net.Forward(obs, &cache);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.num_params());
  net.Backward(cache, Eigen::MatrixXd::Ones(3, 8), grad);
  std::set<int> touched;
  for (int m = 0; m < 16; ++m) {
    if (grad.segment(net.module_offset(m), net.module_spec(m).NumParams())
            .cwiseAbs()
            .maxCoeff() > 0) {
      touched.insert(m);
    }
  }
  return touched;
}

TEST(NetworkTest, SingleAxisChangeMovesGradientToOneOtherModule) {
  std::mt19937_64 rng(4);
  CompositionalNetwork net(8, OutputActivation::kTanh);
  net.InitializeUniform(rng);
  const TaskDescriptor t(1, 2, 3, 0);
  const auto a = TouchedModules(net, t, rng);
  EXPECT_EQ(a.size(), 4u);
  for (Axis axis : kAllAxes) {
    const TaskDescriptor u = t.With({axis, (t.index(axis) + 1) % 4});
    const auto b = TouchedModules(net, u, rng);
    std::vector<int> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(diff));
    ASSERT_EQ(diff.size(), 2u);
    EXPECT_EQ(diff[0] / 4, diff[1] / 4);
  }
}

TEST(NetworkTest, ZeroingUnroutedModulesLeavesOutputsUnchanged) {
  std::mt19937_64 rng(5);
  CompositionalNetwork net(8, OutputActivation::kTanh);
  net.InitializeUniform(rng);
  for (int trial = 0; trial < 20; ++trial) {
    const TaskDescriptor t = TaskDescriptor::FromId((trial * 53) % 256);
    auto obs = gradcheck::RandomObservations(4, 94, false, rng);
    const auto hot = EncodeMultiHot(t);
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 16; ++k) obs(r, 78 + k) = hot[k];
    }
    const Eigen::MatrixXd before = net.Forward(obs, nullptr);
    CompositionalNetwork zeroed = net;
    const auto routed = CompositionalNetwork::RoutedModules(t);
    for (int m = 0; m < 16; ++m) {
      if (std::find(routed.begin(), routed.end(), m) != routed.end()) continue;
      zeroed.params().segment(zeroed.module_offset(m), zeroed.module_spec(m).NumParams())
          .setZero();
    }
    EXPECT_EQ(zeroed.Forward(obs, nullptr), before);
  }
}

TEST(NetworkTest, CompositionalRejectsMissingDescriptor) {
  CompositionalNetwork net(8, OutputActivation::kTanh);
  EXPECT_THROW(net.Forward(Eigen::MatrixXd::Zero(1, 94), nullptr), std::invalid_argument);
}

TEST(NetworkTest, SpecJsonRoundTrip) {
  std::mt19937_64 rng(6);
  for (AgentKind kind :
       {AgentKind::kSingleTask, AgentKind::kMultiTask, AgentKind::kCompositional}) {
    ActorCritic ac = MakeActorCritic(kind, 32, 2);
    ac.Initialize(rng);
    auto copy = NetworkFromSpecJson(ac.pi().SpecJson());
    copy->params() = ac.pi().params();
    const auto obs = gradcheck::RandomObservations(5, ac.obs_dim(),
                                                   kind != AgentKind::kSingleTask, rng);
    EXPECT_EQ(copy->Forward(obs, nullptr), ac.pi().Forward(obs, nullptr));
  }
  EXPECT_THROW(NetworkFromSpecJson({{"type", "rnn"}}), std::invalid_argument);
}

}  // namespace
}  // namespace modarena
