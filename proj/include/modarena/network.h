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

#ifndef MODARENA_NETWORK_H_
#define MODARENA_NETWORK_H_

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "modarena/task_space.h"

namespace modarena {

enum class OutputActivation { kTanh, kLinear };

// A stack of affine layers with tanh activations. The last layer uses
// `output_activation`. When inject_layer >= 0, the input of that layer is
// the concatenation [previous layer output, injected vector].
struct ModuleSpec {
  int input_dim = 0;
  std::vector<int> widths;
  int inject_layer = -1;
  int inject_dim = 0;
  OutputActivation output_activation = OutputActivation::kTanh;

  int output_dim() const { return widths.back(); }
  int LayerInputDim(int layer) const;
  Eigen::Index NumParams() const;
};

struct ModuleCache {
  std::vector<Eigen::MatrixXd> inputs;   // per-layer input (after concat)
  std::vector<Eigen::MatrixXd> outputs;  // per-layer activation
};

// Batched forward pass over rows of `x`. `params` points at this module's
// parameters: per layer, W (out x in, column-major) followed by b (out).
Eigen::MatrixXd ModuleForward(const ModuleSpec& spec, const double* params,
                              const Eigen::MatrixXd& x,
                              const Eigen::MatrixXd* inject,
                              ModuleCache* cache);

// Accumulates parameter gradients into `grad` (same layout as params) and
// returns the gradient with respect to the injected input (empty when the
// module has no injection).
Eigen::MatrixXd ModuleBackward(const ModuleSpec& spec, const double* params,
                               const ModuleCache& cache,
                               const Eigen::MatrixXd& d_out, double* grad);

struct GroupCache {
  std::vector<Eigen::Index> rows;
  std::array<int, 4> modules{};
  std::vector<ModuleCache> caches;
};

struct NetCache {
  std::vector<GroupCache> groups;
};

// Differentiable function of a batch of observations (one per row) with a
// flat parameter vector.
class Network {
 public:
  virtual ~Network() = default;

  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;

  // `cache` may be null when no backward pass follows.
  virtual Eigen::MatrixXd Forward(const Eigen::MatrixXd& obs,
                                  NetCache* cache) const = 0;
  // Adds d(loss)/d(params) to `grad` given d(loss)/d(output).
  virtual void Backward(const NetCache& cache, const Eigen::MatrixXd& d_out,
                        Eigen::VectorXd& grad) const = 0;

  virtual std::unique_ptr<Network> Clone() const = 0;
  virtual nlohmann::json SpecJson() const = 0;

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  Eigen::Index num_params() const { return params_.size(); }

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void InitializeUniform(std::mt19937_64& rng);

 protected:
  virtual std::vector<ModuleSpec> AllModules() const = 0;
  Eigen::VectorXd params_;
};

struct MlpSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  OutputActivation output_activation = OutputActivation::kTanh;
};

class Mlp : public Network {
 public:
  explicit Mlp(MlpSpec spec);

  int input_dim() const override { return spec_.layer_sizes.front(); }
  int output_dim() const override { return spec_.layer_sizes.back(); }
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& obs,
                          NetCache* cache) const override;
  void Backward(const NetCache& cache, const Eigen::MatrixXd& d_out,
                Eigen::VectorXd& grad) const override;
  std::unique_ptr<Network> Clone() const override;
  nlohmann::json SpecJson() const override;

  const MlpSpec& spec() const { return spec_; }

 protected:
  std::vector<ModuleSpec> AllModules() const override { return {module_}; }

 private:
  MlpSpec spec_;
  ModuleSpec module_;
};

// Module graph with one module per axis element. Each row is routed by the
// multi-hot descriptor in its last 16 entries through
// obstacle -> object -> objective -> robot; every module reads its own
// observation segment, and each level's output is concatenated into the
// final layer of the next level's module.
class CompositionalNetwork : public Network {
 public:
  // Module hierarchy levels, in routing order.
  static constexpr std::array<Axis, 4> kLevels = {
      Axis::kObstacle, Axis::kObject, Axis::kObjective, Axis::kRobot};

  CompositionalNetwork(int output_dim, OutputActivation output_activation);

  int input_dim() const override;
  int output_dim() const override { return output_dim_; }
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& obs,
                          NetCache* cache) const override;
  void Backward(const NetCache& cache, const Eigen::MatrixXd& d_out,
                Eigen::VectorXd& grad) const override;
  std::unique_ptr<Network> Clone() const override;
  nlohmann::json SpecJson() const override;

  // Module index in [0, 16): level * 4 + element index.
  static int ModuleIndex(Axis axis, int element);
  // The four modules on the forward path of `task`, in routing order.
  static std::array<int, 4> RoutedModules(const TaskDescriptor& task);
  const ModuleSpec& module_spec(int module) const;
  Eigen::Index module_offset(int module) const { return offsets_[module]; }

 protected:
  std::vector<ModuleSpec> AllModules() const override;

 private:
  int output_dim_;
  std::array<ModuleSpec, 4> level_specs_;
  std::array<Eigen::Index, 16> offsets_{};
};

}  // namespace modarena

#endif  // MODARENA_NETWORK_H_
