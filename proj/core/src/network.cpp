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

#include "lowpass/network.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "lowpass/error.hpp"
#include "lowpass/rng.hpp"

namespace lowpass::memory {

void NetworkSpec::validate() const {
  if (hidden < 1) throw ConfigError("hidden/summariser width must be positive");
  if (head == HeadKind::kClassifier) {
    if (input_width < 1) throw ConfigError("classifier input width must be positive");
    if (classes < 2) throw ConfigError("classifier needs at least two classes");
  } else {
    if (observation.size() == 0) {
      throw ConfigError("actor-critic network needs an observation shape");
    }
    if (conv_channels < 1 || embedding_width < 1) {
      throw ConfigError("conv channels and embedding width must be positive");
    }
  }
  if (memory == MemoryKind::kLstm) {
    if (lstm_width < 1) throw ConfigError("LSTM width must be positive");
    return;
  }
  if (!(base > 1.0)) throw ConfigError("base must exceed 1");
  if (pools < 1) throw ConfigError("pool count must be at least 1");
  if (pool_width < 1 || viewport < 1) {
    throw ConfigError("pool and viewport widths must be positive");
  }
  if (gradient_pass_depth > pools) {
    throw ConfigError("gradient_pass_depth exceeds the number of pools");
  }
  if (memory == MemoryKind::kParallel && head == HeadKind::kActorCritic &&
      embedding_width != pool_width) {
    throw ConfigError("parallel actor-critic needs embedding_width == pool_width");
  }
}

NetworkSpec NetworkSpec::concrete_classifier(std::size_t pools,
                                             std::size_t pool_width,
                                             std::size_t viewport,
                                             std::size_t hidden, double base,
                                             std::size_t classes) {
  NetworkSpec spec;
  spec.memory = MemoryKind::kChain;
  spec.pools = pools;
  spec.pool_width = pool_width;
  spec.viewport = viewport;
  spec.hidden = hidden;
  spec.base = base;
  spec.classes = classes;
  return spec;
}

NetworkSpec NetworkSpec::parallel_classifier(std::size_t pools,
                                             std::size_t pool_width,
                                             std::size_t viewport,
                                             std::size_t hidden, double base,
                                             std::size_t classes) {
  NetworkSpec spec = concrete_classifier(pools, pool_width, viewport, hidden, base,
                                         classes);
  spec.memory = MemoryKind::kParallel;
  spec.embedding_width = pool_width;
  return spec;
}

NetworkSpec NetworkSpec::lstm_classifier(std::size_t width, std::size_t hidden,
                                         std::size_t classes) {
  NetworkSpec spec;
  spec.memory = MemoryKind::kLstm;
  spec.lstm_width = width;
  spec.hidden = hidden;
  spec.classes = classes;
  return spec;
}

NetworkSpec NetworkSpec::actor_critic(MemoryKind memory,
                                      ObservationShape observation,
                                      std::size_t pools) {
  NetworkSpec spec;
  spec.memory = memory;
  spec.head = HeadKind::kActorCritic;
  spec.observation = observation;
  spec.base = 2.0;
  spec.pools = pools;
  spec.viewport = 32;
  spec.hidden = 256;
  spec.embedding_width = memory == MemoryKind::kParallel ? 198 : 128;
  spec.pool_width = spec.embedding_width;
  spec.lstm_width = 128;
  return spec;
}

Tensor padded_identity(std::size_t rows, std::size_t cols) {
  Tensor t = Tensor::zeros(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) t(i, i) = 1.0;
  return t;
}

ad::Var Affine::apply(Bound& bound, ad::Var x) const {
  ad::Var y = ad::matmul(x, bound(weight));
  return bias ? ad::add_bias(y, bound(*bias)) : y;
}

namespace {

class Initializer {
 public:
  Initializer(ad::ParameterSet& params, std::uint64_t seed)
      : params_(params), rng_(derive_seed(seed, SeedStream::kInit)) {}

  // Fan-in scaled uniform weights, zero bias.
  Affine affine(const std::string& name, std::size_t in, std::size_t out,
                bool with_bias = true) {
    Affine layer;
    layer.in = in;
    layer.out = out;
    layer.weight = params_.add(name + ".w", uniform(in, out, in));
    if (with_bias) layer.bias = params_.add(name + ".b", Tensor::zeros(1, out));
    return layer;
  }

  Tensor uniform(std::size_t rows, std::size_t cols, std::size_t fan_in) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Tensor t = Tensor::zeros(rows, cols);
    for (double& v : t.values()) v = rng_.uniform(-limit, limit);
    return t;
  }

  ad::ParamId raw(const std::string& name, Tensor init) {
    return params_.add(name, std::move(init));
  }

 private:
  ad::ParameterSet& params_;
  Rng rng_;
};

ad::Var activate(ad::Var x, Activation kind) {
  return kind == Activation::kTanh ? ad::tanh(x) : ad::relu(x);
}

Tensor scaled(Tensor t, double factor) {
  for (double& v : t.values()) v *= factor;
  return t;
}

}  // namespace

Network::Network(NetworkSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  spec_.validate();
  Initializer init(params_, seed);
  const bool pooled = spec_.memory != MemoryKind::kLstm;
  const bool classifier = spec_.head == HeadKind::kClassifier;

  if (pooled) {
    pool_config_ = spec_.transform == InterPoolTransform::kOrthonormalTanh
                       ? PoolChainConfig::augmented(spec_.base, spec_.pools,
                                                    spec_.pool_width, seed)
                       : PoolChainConfig::regular(spec_.base, spec_.pools,
                                                  spec_.pool_width);
    pool_config_.gradient_pass_depth = spec_.gradient_pass_depth;
  }

  // Input processing.
  std::size_t memory_input = spec_.input_width;
  if (!classifier) {
    const auto& obs = spec_.observation;
    conv_ = init.affine("conv", 9 * obs.features, spec_.conv_channels);
    dense_ = init.affine("dense", obs.rows * obs.cols * spec_.conv_channels,
                         spec_.embedding_width);
    memory_input = spec_.embedding_width;
  } else if (spec_.memory == MemoryKind::kParallel) {
    input_embedding_ = init.affine("embed", spec_.input_width, spec_.pool_width);
    memory_input = spec_.pool_width;
  }

  const double inv_base = 1.0 / spec_.base;
  if (pooled) {
    // Learnable bias-free injection initialised to b^-1 I'.
    injection_ = init.raw("inject.w",
                          scaled(padded_identity(memory_input, spec_.pool_width),
                                 inv_base));
    for (std::size_t n = 0; n <= spec_.pools; ++n) {
      viewports_.push_back(init.affine("viewport" + std::to_string(n),
                                       spec_.pool_width, spec_.viewport));
    }
    summariser_ = init.affine("summariser", (spec_.pools + 1) * spec_.viewport,
                              spec_.hidden);
  } else {
    LstmLayer layer;
    layer.input_width = memory_input;
    layer.width = spec_.lstm_width;
    const std::size_t fan_in = memory_input + spec_.lstm_width;
    layer.kernel = init.raw("lstm.kernel",
                            init.uniform(fan_in, 4 * spec_.lstm_width, fan_in));
    Tensor bias = Tensor::zeros(1, 4 * spec_.lstm_width);
    for (std::size_t j = 0; j < spec_.lstm_width; ++j) {
      bias[spec_.lstm_width + j] = 1.0;  // forget gate
    }
    layer.bias = init.raw("lstm.bias", std::move(bias));
    lstm_ = layer;
    hidden_layer_ = init.affine("hidden", spec_.lstm_width, spec_.hidden);
  }

  if (classifier) {
    output_ = init.affine("logits", spec_.hidden, spec_.classes);
  } else {
    output_ = init.affine("policy", spec_.hidden, kActionCount);
    value_head_ = init.affine("value", spec_.hidden, 1);
  }
}

Network::State Network::initial_state(std::size_t batch) const {
  State state;
  if (spec_.memory == MemoryKind::kLstm) {
    state.tensors.assign(2, Tensor::zeros(batch, spec_.lstm_width));
  } else {
    state.tensors.assign(spec_.pools, Tensor::zeros(batch, spec_.pool_width));
  }
  return state;
}

std::vector<ad::Var> Network::bind_state(ad::Graph& graph, const State& state) const {
  std::vector<ad::Var> vars;
  vars.reserve(state.tensors.size());
  for (const auto& t : state.tensors) vars.push_back(graph.constant(t));
  return vars;
}

Network::State Network::read_state(const std::vector<ad::Var>& vars) {
  State state;
  state.tensors.reserve(vars.size());
  for (const auto& v : vars) state.tensors.push_back(v.value());
  return state;
}

std::shared_ptr<const std::vector<std::int64_t>> Network::im2col(
    std::size_t batch) const {
  if (auto it = im2col_cache_.find(batch); it != im2col_cache_.end()) {
    return it->second;
  }
  const auto& obs = spec_.observation;
  const auto rows = static_cast<std::int64_t>(obs.rows);
  const auto cols = static_cast<std::int64_t>(obs.cols);
  const auto features = static_cast<std::int64_t>(obs.features);
  auto index = std::make_shared<std::vector<std::int64_t>>();
  index->reserve(batch * obs.rows * obs.cols * 9 * obs.features);
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(batch); ++b) {
    const std::int64_t offset = b * rows * cols * features;
    for (std::int64_t r = 0; r < rows; ++r) {
      for (std::int64_t c = 0; c < cols; ++c) {
        for (std::int64_t dr = -1; dr <= 1; ++dr) {
          for (std::int64_t dc = -1; dc <= 1; ++dc) {
            const std::int64_t rr = r + dr;
            const std::int64_t cc = c + dc;
            const bool inside = rr >= 0 && rr < rows && cc >= 0 && cc < cols;
            for (std::int64_t f = 0; f < features; ++f) {
              index->push_back(inside ? offset + (rr * cols + cc) * features + f
                                      : -1);
            }
          }
        }
      }
    }
  }
  im2col_cache_[batch] = index;
  return index;
}

ad::Var Network::embed(Bound& bound, ad::Var input) const {
  const std::size_t batch = input.rows();
  ad::Var x = input;
  if (spec_.head == HeadKind::kActorCritic) {
    const auto& obs = spec_.observation;
    if (input.cols() != obs.size()) {
      throw ShapeError("observation width " + std::to_string(input.cols()) +
                       " does not match " + std::to_string(obs.size()));
    }
    ad::Var patches = ad::gather(input, im2col(batch),
                                 {batch * obs.rows * obs.cols, 9 * obs.features});
    ad::Var conv = ad::relu(conv_->apply(bound, patches));
    ad::Var flat =
        ad::reshape(conv, {batch, obs.rows * obs.cols * spec_.conv_channels});
    x = ad::relu(dense_->apply(bound, flat));
  } else {
    if (input.cols() != spec_.input_width) {
      throw ShapeError("input width " + std::to_string(input.cols()) +
                       " does not match " + std::to_string(spec_.input_width));
    }
    if (input_embedding_) x = input_embedding_->apply(bound, x);
  }
  if (injection_) {
    // p^(0) = b * (x W) so that the first pool receives x W exactly.
    x = ad::scale(ad::matmul(x, bound(*injection_)), spec_.base);
  }
  return x;
}

ad::Var Network::readout(Bound& bound, const std::vector<ad::Var>& sources) const {
  std::vector<ad::Var> views;
  views.reserve(sources.size());
  for (std::size_t n = 0; n < sources.size(); ++n) {
    views.push_back(activate(viewports_[n].apply(bound, sources[n]),
                             spec_.readout_activation));
  }
  return activate(summariser_->apply(bound, ad::concat(views)),
                  spec_.readout_activation);
}

Network::StepOutput Network::step(Bound& bound, const std::vector<ad::Var>& state,
                                  ad::Var input) const {
  StepOutput out;
  ad::Graph& graph = bound.graph();
  ad::Var x = embed(bound, input);
  ad::Var features;
  if (spec_.memory == MemoryKind::kLstm) {
    if (state.size() != 2) throw ShapeError("LSTM state needs {cell, hidden}");
    LstmVars next = lstm_step(bound, *lstm_, {state[0], state[1]}, x);
    out.state = {next.cell, next.hidden};
    features = activate(hidden_layer_->apply(bound, next.hidden),
                        spec_.readout_activation);
  } else {
    PoolVars pools = pool_step(graph, state, x, pool_config_, spec_.memory);
    out.embedding = pools.embedding;
    out.readout_inputs.push_back(pools.embedding);
    for (std::size_t n = 0; n < pools.pools.size(); ++n) {
      ad::Var src = pools.pools[n];
      if (n >= spec_.gradient_pass_depth && graph.requires_grad(src)) {
        src = ad::stop_gradient(src);
      }
      out.readout_inputs.push_back(src);
    }
    out.state = std::move(pools.pools);
    features = readout(bound, out.readout_inputs);
  }
  out.logits = output_.apply(bound, features);
  if (value_head_) out.value = value_head_->apply(bound, features);
  return out;
}

}  // namespace lowpass::memory
