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

#include <cmath>
#include <map>
#include <stdexcept>

#include "modarena/observations.h"

namespace modarena {
namespace {

bool IsLinear(const ModuleSpec& spec, size_t layer) {
  return layer + 1 == spec.widths.size() &&
         spec.output_activation == OutputActivation::kLinear;
}

std::string_view ActivationName(OutputActivation a) {
  return a == OutputActivation::kTanh ? "tanh" : "linear";
}

void CheckInput(const Eigen::MatrixXd& obs, int dim) {
  if (obs.cols() != dim) {
    throw std::invalid_argument("network expects inputs of width " +
                                std::to_string(dim) + ", got " +
                                std::to_string(obs.cols()));
  }
}

Eigen::MatrixXd Columns(const Eigen::MatrixXd& m,
                        const std::vector<Eigen::Index>& rows,
                        const Segment& s) {
  return m(rows, Eigen::seqN(s.offset, s.length));
}

}  // namespace

int ModuleSpec::LayerInputDim(int layer) const {
  const int base = layer == 0 ? input_dim : widths[layer - 1];
  return layer == inject_layer ? base + inject_dim : base;
}

Eigen::Index ModuleSpec::NumParams() const {
  Eigen::Index n = 0;
  for (size_t l = 0; l < widths.size(); ++l) {
    n += static_cast<Eigen::Index>(widths[l]) * (LayerInputDim(l) + 1);
  }
  return n;
}

Eigen::MatrixXd ModuleForward(const ModuleSpec& spec, const double* params,
                              const Eigen::MatrixXd& x,
                              const Eigen::MatrixXd* inject,
                              ModuleCache* cache) {
  if (cache) {
    cache->inputs.clear();
    cache->outputs.clear();
  }
  Eigen::MatrixXd h = x;
  const double* p = params;
  for (size_t l = 0; l < spec.widths.size(); ++l) {
    if (static_cast<int>(l) == spec.inject_layer) {
      if (!inject || inject->rows() != h.rows() ||
          inject->cols() != spec.inject_dim) {
        throw std::invalid_argument("module injection has the wrong shape");
      }
      Eigen::MatrixXd joined(h.rows(), h.cols() + inject->cols());
      joined << h, *inject;
      h = std::move(joined);
    }
    const int in = spec.LayerInputDim(l);
    const int out = spec.widths[l];
    Eigen::Map<const Eigen::MatrixXd> w(p, out, in);
    Eigen::Map<const Eigen::VectorXd> b(p + out * in, out);
    p += out * (in + 1);
    Eigen::MatrixXd z = h * w.transpose();
    z.rowwise() += b.transpose();
    if (!IsLinear(spec, l)) z = z.array().tanh().matrix();
    if (cache) cache->inputs.push_back(std::move(h));
    h = std::move(z);
    if (cache) cache->outputs.push_back(h);
  }
  return h;
}

Eigen::MatrixXd ModuleBackward(const ModuleSpec& spec, const double* params,
                               const ModuleCache& cache,
                               const Eigen::MatrixXd& d_out, double* grad) {
  // Offsets of each layer's parameters.
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (size_t l = 0; l < spec.widths.size(); ++l) {
    offsets.push_back(off);
    off += static_cast<Eigen::Index>(spec.widths[l]) * (spec.LayerInputDim(l) + 1);
  }

  Eigen::MatrixXd d_inject;
  Eigen::MatrixXd d_h = d_out;
  for (int l = static_cast<int>(spec.widths.size()) - 1; l >= 0; --l) {
    const int in = spec.LayerInputDim(l);
    const int out = spec.widths[l];
    Eigen::MatrixXd d_z = d_h;
    if (!IsLinear(spec, l)) {
      d_z.array() *= 1.0 - cache.outputs[l].array().square();
    }
    Eigen::Map<Eigen::MatrixXd> gw(grad + offsets[l], out, in);
    Eigen::Map<Eigen::VectorXd> gb(grad + offsets[l] + out * in, out);
    gw.noalias() += d_z.transpose() * cache.inputs[l];
    gb += d_z.colwise().sum().transpose();
    if (l == 0 && spec.inject_layer != 0) break;
    Eigen::Map<const Eigen::MatrixXd> w(params + offsets[l], out, in);
    Eigen::MatrixXd d_in = d_z * w;
    if (l == spec.inject_layer) {
      const int base = in - spec.inject_dim;
      d_inject = d_in.rightCols(spec.inject_dim);
      d_h = d_in.leftCols(base);
    } else {
      d_h = std::move(d_in);
    }
    if (l == 0) break;
  }
  return d_inject;
}

void Network::InitializeUniform(std::mt19937_64& rng) {
  Eigen::Index off = 0;
  for (const ModuleSpec& spec : AllModules()) {
    for (size_t l = 0; l < spec.widths.size(); ++l) {
      const int in = spec.LayerInputDim(l);
      const int out = spec.widths[l];
      const double bound = 1.0 / std::sqrt(static_cast<double>(in));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(out) * (in + 1); ++i) {
        params_[off + i] = dist(rng);
      }
      off += static_cast<Eigen::Index>(out) * (in + 1);
    }
  }
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  if (spec_.layer_sizes.size() < 3) {
    throw std::invalid_argument("an MLP needs at least one hidden layer");
  }
  for (int s : spec_.layer_sizes) {
    if (s <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
  module_.input_dim = spec_.layer_sizes.front();
  module_.widths.assign(spec_.layer_sizes.begin() + 1, spec_.layer_sizes.end());
  module_.output_activation = spec_.output_activation;
  params_ = Eigen::VectorXd::Zero(module_.NumParams());
}

Eigen::MatrixXd Mlp::Forward(const Eigen::MatrixXd& obs, NetCache* cache) const {
  CheckInput(obs, input_dim());
  if (!cache) return ModuleForward(module_, params_.data(), obs, nullptr, nullptr);
  cache->groups.assign(1, GroupCache{});
  cache->groups[0].caches.resize(1);
  return ModuleForward(module_, params_.data(), obs, nullptr,
                       &cache->groups[0].caches[0]);
}

void Mlp::Backward(const NetCache& cache, const Eigen::MatrixXd& d_out,
                   Eigen::VectorXd& grad) const {
  if (grad.size() != params_.size()) grad = Eigen::VectorXd::Zero(params_.size());
  ModuleBackward(module_, params_.data(), cache.groups.at(0).caches.at(0), d_out,
                 grad.data());
}

std::unique_ptr<Network> Mlp::Clone() const { return std::make_unique<Mlp>(*this); }

nlohmann::json Mlp::SpecJson() const {
  return {{"type", "mlp"},
          {"layer_sizes", spec_.layer_sizes},
          {"output_activation", ActivationName(spec_.output_activation)}};
}

CompositionalNetwork::CompositionalNetwork(int output_dim,
                                           OutputActivation output_activation)
    : output_dim_(output_dim) {
  level_specs_[0] = {kObstacleSegment.length, {32}, -1, 0, OutputActivation::kTanh};
  level_specs_[1] = {kObjectSegment.length, {32, 32}, 1, 32, OutputActivation::kTanh};
  level_specs_[2] = {kGoalSegment.length, {64, 64, 64}, 2, 32,
                     OutputActivation::kTanh};
  level_specs_[3] = {kRobotSegment.length, {64, 64, 64, output_dim}, 3, 64,
                     output_activation};
  Eigen::Index off = 0;
  for (int m = 0; m < 16; ++m) {
    offsets_[m] = off;
    off += level_specs_[m / 4].NumParams();
  }
  params_ = Eigen::VectorXd::Zero(off);
}

int CompositionalNetwork::input_dim() const { return kFullObservationSize; }

int CompositionalNetwork::ModuleIndex(Axis axis, int element) {
  for (int level = 0; level < 4; ++level) {
    if (kLevels[level] == axis) return level * 4 + element;
  }
  return -1;
}

std::array<int, 4> CompositionalNetwork::RoutedModules(const TaskDescriptor& task) {
  std::array<int, 4> out{};
  for (int level = 0; level < 4; ++level) {
    out[level] = level * 4 + task.index(kLevels[level]);
  }
  return out;
}

const ModuleSpec& CompositionalNetwork::module_spec(int module) const {
  return level_specs_.at(module / 4);
}

std::vector<ModuleSpec> CompositionalNetwork::AllModules() const {
  std::vector<ModuleSpec> out;
  for (int m = 0; m < 16; ++m) out.push_back(level_specs_[m / 4]);
  return out;
}

Eigen::MatrixXd CompositionalNetwork::Forward(const Eigen::MatrixXd& obs,
                                              NetCache* cache) const {
  CheckInput(obs, input_dim());
  std::map<int, GroupCache> groups;
  for (Eigen::Index r = 0; r < obs.rows(); ++r) {
    const Eigen::VectorXd hot = obs.row(r).segment(kTaskSegment.offset,
                                                   kTaskSegment.length);
    const TaskDescriptor task =
        DecodeMultiHot(std::span<const double>(hot.data(), hot.size()));
    GroupCache& g = groups[task.id()];
    g.modules = RoutedModules(task);
    g.rows.push_back(r);
  }

  static constexpr std::array<const Segment*, 4> kInputs = {
      &kObstacleSegment, &kObjectSegment, &kGoalSegment, &kRobotSegment};
  Eigen::MatrixXd out(obs.rows(), output_dim_);
  if (cache) cache->groups.clear();
  for (auto& [id, g] : groups) {
    g.caches.resize(4);
    Eigen::MatrixXd h;
    for (int level = 0; level < 4; ++level) {
      const int m = g.modules[level];
      const Eigen::MatrixXd x = Columns(obs, g.rows, *kInputs[level]);
      h = ModuleForward(level_specs_[level], params_.data() + offsets_[m], x,
                        level == 0 ? nullptr : &h,
                        cache ? &g.caches[level] : nullptr);
    }
    out(g.rows, Eigen::all) = h;
    if (cache) cache->groups.push_back(std::move(g));
  }
  return out;
}

void CompositionalNetwork::Backward(const NetCache& cache,
                                    const Eigen::MatrixXd& d_out,
                                    Eigen::VectorXd& grad) const {
  if (grad.size() != params_.size()) grad = Eigen::VectorXd::Zero(params_.size());
  for (const GroupCache& g : cache.groups) {
    Eigen::MatrixXd d = d_out(g.rows, Eigen::all);
    for (int level = 3; level >= 0; --level) {
      const int m = g.modules[level];
      d = ModuleBackward(level_specs_[level], params_.data() + offsets_[m],
                         g.caches[level], d, grad.data() + offsets_[m]);
    }
  }
}

std::unique_ptr<Network> CompositionalNetwork::Clone() const {
  return std::make_unique<CompositionalNetwork>(*this);
}

nlohmann::json CompositionalNetwork::SpecJson() const {
  return {{"type", "compositional"},
          {"output_dim", output_dim_},
          {"output_activation",
           ActivationName(level_specs_[3].output_activation)}};
}

}  // namespace modarena
