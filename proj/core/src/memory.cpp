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

#include "lowpass/memory.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "lowpass/error.hpp"
#include "lowpass/rng.hpp"

namespace lowpass::memory {

const char* memory_kind_name(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::kChain: return "chain";
    case MemoryKind::kParallel: return "parallel";
    case MemoryKind::kLstm: return "lstm";
  }
  return "unknown";
}

MemoryKind parse_memory_kind(const std::string& name) {
  if (name == "chain" || name == "concrete") return MemoryKind::kChain;
  if (name == "parallel") return MemoryKind::kParallel;
  if (name == "lstm") return MemoryKind::kLstm;
  throw ConfigError("unknown memory kind: " + name);
}

std::vector<double> smoothing_coefficients(double base, std::size_t count) {
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw ConfigError("base must exceed 1 (got " + std::to_string(base) + ")");
  }
  if (count < 1) throw ConfigError("pool count must be at least 1");
  std::vector<double> coeffs(count);
  double a = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    a /= base;
    coeffs[n] = a;
  }
  return coeffs;
}

PoolChainConfig PoolChainConfig::regular(double base, std::size_t pools,
                                         std::size_t width) {
  PoolChainConfig config;
  config.pools = pools;
  config.width = width;
  config.base = base;
  config.coefficients = smoothing_coefficients(base, pools);
  config.validate();
  return config;
}

PoolChainConfig PoolChainConfig::augmented(double base, std::size_t pools,
                                           std::size_t width, std::uint64_t seed) {
  PoolChainConfig config = regular(base, pools, width);
  config.transform = InterPoolTransform::kOrthonormalTanh;
  for (std::size_t n = 0; n + 1 < pools; ++n) {
    config.projections.push_back(random_orthonormal(
        width, derive_seed(seed, SeedStream::kProjection, n)));
  }
  config.validate();
  return config;
}

void PoolChainConfig::validate() const {
  if (pools < 1) throw ConfigError("pool count must be at least 1");
  if (width < 1) throw ConfigError("pool width must be at least 1");
  if (!(base > 1.0)) throw ConfigError("base must exceed 1");
  if (coefficients.size() != pools) {
    throw ConfigError("expected one smoothing coefficient per pool");
  }
  for (double a : coefficients) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ConfigError("smoothing coefficients must lie in (0, 1)");
    }
  }
  if (transform == InterPoolTransform::kOrthonormalTanh) {
    if (projections.size() + 1 != pools) {
      throw ConfigError("orthonormal transform needs one projection per link");
    }
    for (const auto& q : projections) {
      if (q.rows() != width || q.cols() != width) {
        throw ConfigError("inter-pool projection must be width x width");
      }
    }
  }
}

PoolChainState zero_pool_state(const PoolChainConfig& config, std::size_t batch) {
  PoolChainState state;
  state.embedding = Tensor::zeros(batch, config.width);
  state.pools.assign(config.pools, Tensor::zeros(batch, config.width));
  return state;
}

namespace {

void check_widths(const PoolChainState& state, const Tensor& embedding,
                  const PoolChainConfig& config) {
  if (embedding.cols() != config.width) {
    throw ShapeError("embedding width " + std::to_string(embedding.cols()) +
                     " does not match pool width " + std::to_string(config.width));
  }
  if (state.pools.size() != config.pools) {
    throw ShapeError("state holds " + std::to_string(state.pools.size()) +
                     " pools, config expects " + std::to_string(config.pools));
  }
  for (const auto& p : state.pools) {
    if (p.rows() != embedding.rows() || p.cols() != config.width) {
      throw ShapeError("pool shape " + shape_string(p.shape()) +
                       " does not match embedding " +
                       shape_string(embedding.shape()));
    }
  }
}

Tensor transform_link(const Tensor& upstream, const Tensor& projection) {
  const std::size_t rows = upstream.rows();
  const std::size_t width = upstream.cols();
  Tensor out = Tensor::zeros(rows, width);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < width; ++i) {
      const double u = upstream(r, i);
      for (std::size_t j = 0; j < width; ++j) out(r, j) += u * projection(i, j);
    }
  }
  for (double& v : out.values()) v = std::tanh(v);
  return out;
}

}  // namespace

void pool_chain_step(PoolChainState& state, const Tensor& embedding,
                     const PoolChainConfig& config) {
  check_widths(state, embedding, config);
  state.embedding = embedding;
  const Tensor* upstream = &state.embedding;
  Tensor transformed;
  for (std::size_t n = 0; n < config.pools; ++n) {
    const double a = config.coefficients[n];
    if (n > 0 && config.transform == InterPoolTransform::kOrthonormalTanh) {
      transformed = transform_link(*upstream, config.projections[n - 1]);
      upstream = &transformed;
    }
    auto pool = state.pools[n].values();
    auto in = upstream->values();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i] = a * in[i] + (1.0 - a) * pool[i];
    }
    upstream = &state.pools[n];
  }
}

void parallel_bank_step(PoolChainState& state, const Tensor& embedding,
                        const PoolChainConfig& config) {
  check_widths(state, embedding, config);
  state.embedding = embedding;
  auto in = embedding.values();
  for (std::size_t n = 0; n < config.pools; ++n) {
    const double a = config.coefficients[n];
    auto pool = state.pools[n].values();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i] = a * in[i] + (1.0 - a) * pool[i];
    }
  }
}

Tensor random_orthonormal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd gaussian(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < gaussian.rows(); ++r) {
    for (Eigen::Index c = 0; c < gaussian.cols(); ++c) gaussian(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign-fix so Q is uniquely determined by the draw.
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    if (r(c, c) < 0) q.col(c) *= -1.0;
  }
  Tensor out({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

PoolVars pool_step(ad::Graph& graph, const std::vector<ad::Var>& previous,
                   ad::Var embedding, const PoolChainConfig& config,
                   MemoryKind kind) {
  if (kind == MemoryKind::kLstm) {
    throw ConfigError("pool_step called with an LSTM memory kind");
  }
  if (previous.size() != config.pools) {
    throw ShapeError("pool_step: expected " + std::to_string(config.pools) +
                     " previous pools");
  }
  if (embedding.cols() != config.width) {
    throw ShapeError("pool_step: embedding width mismatch");
  }
  PoolVars out;
  out.embedding = embedding;
  out.pools.reserve(config.pools);
  ad::Var upstream = embedding;
  for (std::size_t n = 0; n < config.pools; ++n) {
    ad::Var source = kind == MemoryKind::kChain ? upstream : embedding;
    if (n >= config.gradient_pass_depth && graph.requires_grad(source)) {
      source = ad::stop_gradient(source);
    }
    if (kind == MemoryKind::kChain && n > 0 &&
        config.transform == InterPoolTransform::kOrthonormalTanh) {
      source = ad::tanh(
          ad::matmul(source, graph.constant(config.projections[n - 1])));
    }
    ad::Var pool = ad::lerp(source, previous[n], config.coefficients[n]);
    out.pools.push_back(pool);
    upstream = pool;
  }
  return out;
}

ad::Var Bound::operator()(ad::ParamId id) {
  if (id >= vars_.size()) vars_.resize(params_->size());
  if (!vars_[id].valid()) vars_[id] = graph_->param(*params_, id);
  return vars_[id];
}

LstmGates lstm_gates(Bound& bound, const LstmLayer& layer, ad::Var x,
                     ad::Var hidden) {
  if (x.cols() != layer.input_width || hidden.cols() != layer.width) {
    throw ShapeError("lstm: input or hidden width mismatch");
  }
  const ad::Var joined[] = {x, hidden};
  ad::Var pre = ad::add_bias(
      ad::matmul(ad::concat(joined), bound(layer.kernel)), bound(layer.bias));
  const std::size_t w = layer.width;
  return LstmGates{
      ad::sigmoid(ad::slice(pre, 0, w)),
      ad::sigmoid(ad::slice(pre, w, 2 * w)),
      ad::sigmoid(ad::slice(pre, 2 * w, 3 * w)),
      ad::tanh(ad::slice(pre, 3 * w, 4 * w)),
  };
}

ad::Var lstm_cell_update(ad::Var cell, ad::Var candidate, ad::Var g_input,
                         ad::Var g_forget) {
  return ad::add(ad::mul(g_input, candidate), ad::mul(g_forget, cell));
}

LstmVars lstm_step(Bound& bound, const LstmLayer& layer, const LstmVars& previous,
                   ad::Var x) {
  const LstmGates gates = lstm_gates(bound, layer, x, previous.hidden);
  ad::Var cell =
      lstm_cell_update(previous.cell, gates.candidate, gates.input, gates.forget);
  ad::Var hidden = ad::mul(gates.output, ad::tanh(cell));
  return {cell, hidden};
}

}  // namespace lowpass::memory
