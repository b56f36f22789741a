// Copyright 2026 The Lowpass Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lowpass/graph.hpp"
#include "lowpass/memory.hpp"

namespace lowpass::memory {

enum class HeadKind { kClassifier, kActorCritic };
enum class Activation { kRelu, kTanh };

struct ObservationShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t features = 0;

  std::size_t size() const { return rows * cols * features; }
  bool operator==(const ObservationShape&) const = default;
};

// Full description of a classifier or actor-critic network.
//
// Classifier inputs are one-hot symbols of width `input_width`. Actor-critic
// inputs are binary observation arrays processed by a 3x3 same-padded
// convolution (conv_channels) and a dense relu embedding (embedding_width).
struct NetworkSpec {
  MemoryKind memory = MemoryKind::kChain;
  HeadKind head = HeadKind::kClassifier;

  std::size_t input_width = 8;
  ObservationShape observation;
  std::size_t conv_channels = 16;
  // RL embedding width; also the learned embedding width of parallel
  // classifiers (which always equals pool_width there).
  std::size_t embedding_width = 128;

  // Pool memories.
  std::size_t pool_width = 16;
  std::size_t pools = 8;
  std::size_t viewport = 8;
  double base = 2.0;
  std::size_t gradient_pass_depth = 1;
  InterPoolTransform transform = InterPoolTransform::kIdentity;

  // LSTM memory.
  std::size_t lstm_width = 32;

  // Summariser width (pool memories) or hidden layer width (LSTM).
  std::size_t hidden = 32;
  Activation readout_activation = Activation::kRelu;
  std::size_t classes = 4;

  void validate() const;

  static NetworkSpec concrete_classifier(std::size_t pools, std::size_t pool_width,
                                         std::size_t viewport, std::size_t hidden,
                                         double base, std::size_t classes);
  static NetworkSpec parallel_classifier(std::size_t pools, std::size_t pool_width,
                                         std::size_t viewport, std::size_t hidden,
                                         double base, std::size_t classes);
  static NetworkSpec lstm_classifier(std::size_t width, std::size_t hidden,
                                     std::size_t classes);
  // RL networks: V = 32, M = 256, b = 2. Parallel uses a 198-wide embedding.
  static NetworkSpec actor_critic(MemoryKind memory, ObservationShape observation,
                                  std::size_t pools = 8);
};

inline constexpr std::size_t kActionCount = 5;

// Padded identity: rows x cols with ones on the leading diagonal.
Tensor padded_identity(std::size_t rows, std::size_t cols);

struct Affine {
  ad::ParamId weight = 0;
  std::optional<ad::ParamId> bias;
  std::size_t in = 0;
  std::size_t out = 0;

  ad::Var apply(Bound& bound, ad::Var x) const;
};

class Network {
 public:
  Network(NetworkSpec spec, std::uint64_t seed);

  // Recurrent state values: pools p^(1..k) for pool memories, or
  // {cell, hidden} for LSTM. Each tensor is batch x width.
  struct State {
    std::vector<Tensor> tensors;
  };

  struct StepOutput {
    ad::Var logits;  // classes or kActionCount wide
    ad::Var value;   // batch x 1, actor-critic only
    std::vector<ad::Var> state;
    ad::Var embedding;                 // p^(0), pool memories only
    std::vector<ad::Var> readout_inputs;  // what each viewport saw
  };

  State initial_state(std::size_t batch) const;
  // Binds recurrent state as constants, which truncates gradients there.
  std::vector<ad::Var> bind_state(ad::Graph& graph, const State& state) const;
  static State read_state(const std::vector<ad::Var>& vars);

  // `input`: batch x input_width one-hot rows, or batch x observation.size().
  StepOutput step(Bound& bound, const std::vector<ad::Var>& state,
                  ad::Var input) const;

  const NetworkSpec& spec() const { return spec_; }
  const PoolChainConfig& pool_config() const { return pool_config_; }
  ad::ParameterSet& parameters() { return params_; }
  const ad::ParameterSet& parameters() const { return params_; }

 private:
  ad::Var embed(Bound& bound, ad::Var input) const;
  ad::Var readout(Bound& bound, const std::vector<ad::Var>& sources) const;
  std::shared_ptr<const std::vector<std::int64_t>> im2col(std::size_t batch) const;

  NetworkSpec spec_;
  PoolChainConfig pool_config_;
  ad::ParameterSet params_;

  std::optional<ad::ParamId> injection_;
  std::optional<Affine> input_embedding_;
  std::optional<Affine> conv_;
  std::optional<Affine> dense_;
  std::optional<LstmLayer> lstm_;
  std::vector<Affine> viewports_;
  std::optional<Affine> summariser_;
  std::optional<Affine> hidden_layer_;
  Affine output_;
  std::optional<Affine> value_head_;

  mutable std::map<std::size_t, std::shared_ptr<const std::vector<std::int64_t>>>
      im2col_cache_;
};

}  // namespace lowpass::memory
