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
#include <string>
#include <vector>

#include "lowpass/graph.hpp"
#include "lowpass/tensor.hpp"

namespace lowpass::memory {

enum class MemoryKind { kChain, kParallel, kLstm };

const char* memory_kind_name(MemoryKind kind);
MemoryKind parse_memory_kind(const std::string& name);

// [b^-1, b^-2, ..., b^-count]. Throws ConfigError unless b > 1, count >= 1.
std::vector<double> smoothing_coefficients(double base, std::size_t count);

enum class InterPoolTransform {
  kIdentity,
  // Fixed random orthonormal D x D projection followed by tanh on every
  // pool-to-pool link (not on the embedding-to-first-pool link).
  kOrthonormalTanh,
};

struct PoolChainConfig {
  std::size_t pools = 1;
  std::size_t width = 1;
  double base = 2.0;
  std::vector<double> coefficients;  // a_1 .. a_k
  InterPoolTransform transform = InterPoolTransform::kIdentity;
  // Number of fastest pools through which gradients may flow.
  std::size_t gradient_pass_depth = 1;
  // projections[n] maps pool n (0-based) into pool n + 1; filled by
  // augmented().
  std::vector<Tensor> projections;

  // a_n = base^-n with identity links.
  static PoolChainConfig regular(double base, std::size_t pools, std::size_t width);
  // Same schedule with seeded orthonormal projections and tanh links.
  static PoolChainConfig augmented(double base, std::size_t pools,
                                   std::size_t width, std::uint64_t seed);
  void validate() const;
};

// The recurrent state of a pool memory: p^(0) (embedding) and p^(1..k),
// each `batch x width`.
struct PoolChainState {
  Tensor embedding;
  std::vector<Tensor> pools;
};

PoolChainState zero_pool_state(const PoolChainConfig& config, std::size_t batch);

// p^(n)_t = a_n f(p^(n-1)_t) + (1 - a_n) p^(n)_{t-1}, n = 1..k in order, where
// f is the inter-pool transform (identity for n = 1).
void pool_chain_step(PoolChainState& state, const Tensor& embedding,
                     const PoolChainConfig& config);
// p^(n)_t = a_n h_t + (1 - a_n) p^(n)_{t-1} for every n independently.
void parallel_bank_step(PoolChainState& state, const Tensor& embedding,
                        const PoolChainConfig& config);

// Random n x n matrix with orthonormal columns.
Tensor random_orthonormal(std::size_t n, std::uint64_t seed);

// ---- differentiable forms --------------------------------------------------

struct PoolVars {
  ad::Var embedding;
  std::vector<ad::Var> pools;
};

// Differentiable chain or parallel step. Pools beyond
// config.gradient_pass_depth receive their upstream input through a
// stop-gradient, so no gradient reaches them or flows out of them.
PoolVars pool_step(ad::Graph& graph, const std::vector<ad::Var>& previous,
                   ad::Var embedding, const PoolChainConfig& config,
                   MemoryKind kind);

// ---- LSTM -----------------------------------------------------------------

// Lazily creates one parameter leaf per ParamId for a given graph.
class Bound {
 public:
  Bound(ad::Graph& graph, ad::ParameterSet& params)
      : graph_(&graph), params_(&params), vars_(params.size()) {}

  ad::Var operator()(ad::ParamId id);
  ad::Graph& graph() { return *graph_; }

 private:
  ad::Graph* graph_;
  ad::ParameterSet* params_;
  std::vector<ad::Var> vars_;
};

struct LstmLayer {
  ad::ParamId kernel = 0;  // (input + width) x 4 width, gate columns i|f|o|g
  ad::ParamId bias = 0;    // 1 x 4 width
  std::size_t input_width = 0;
  std::size_t width = 0;
};

struct LstmVars {
  ad::Var cell;
  ad::Var hidden;
};

struct LstmGates {
  ad::Var input;
  ad::Var forget;
  ad::Var output;
  ad::Var candidate;
};

LstmGates lstm_gates(Bound& bound, const LstmLayer& layer, ad::Var x,
                     ad::Var hidden);
// m_t = g_input * candidate + g_forget * m_{t-1}
ad::Var lstm_cell_update(ad::Var cell, ad::Var candidate, ad::Var g_input,
                         ad::Var g_forget);
LstmVars lstm_step(Bound& bound, const LstmLayer& layer, const LstmVars& previous,
                   ad::Var x);

}  // namespace lowpass::memory
