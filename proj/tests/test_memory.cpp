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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lowpass/error.hpp"
#include "lowpass/gradcheck.hpp"
#include "lowpass/memory.hpp"
#include "test_util.hpp"

namespace lowpass::memory {
namespace {

using lowpass::testing::random_tensor;

TEST(SmoothingCoefficients, Examples) {
  EXPECT_EQ(smoothing_coefficients(2.0, 3), (std::vector<double>{0.5, 0.25, 0.125}));
  const auto third = smoothing_coefficients(3.0, 2);
  EXPECT_NEAR(third[0], 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(third[1], 1.0 / 9.0, 1e-16);
  EXPECT_NEAR(smoothing_coefficients(1.5, 1)[0], 2.0 / 3.0, 1e-16);
}

TEST(SmoothingCoefficients, RejectsBadBaseOrCount) {
  EXPECT_THROW(smoothing_coefficients(1.0, 3), ConfigError);
  EXPECT_THROW(smoothing_coefficients(0.5, 3), ConfigError);
  EXPECT_THROW(smoothing_coefficients(2.0, 0), ConfigError);
}

TEST(SmoothingCoefficients, StrictlyDecreasingAndPositive) {
  for (double b : {1.1, 1.5, 2.0, 3.0, 7.0}) {
    const auto a = smoothing_coefficients(b, 12);
    for (std::size_t n = 0; n < a.size(); ++n) {
      EXPECT_GT(a[n], 0.0);
      EXPECT_LT(a[n], 1.0);
      if (n > 0) {
        EXPECT_LT(a[n], a[n - 1]);
      }
    }
  }
}

std::vector<double> scalar_pools(const PoolChainState& s) {
  std::vector<double> out;
  for (const auto& p : s.pools) out.push_back(p[0]);
  return out;
}

TEST(PoolChainStep, ZeroIsAFixedPoint) {
  const auto cfg = PoolChainConfig::regular(2.0, 3, 4);
  auto state = zero_pool_state(cfg, 2);
  pool_chain_step(state, Tensor::zeros(2, 4), cfg);
  for (const auto& p : state.pools) {
    for (double v : p.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(PoolChainStep, ImpulseHandValues) {
  const auto cfg = PoolChainConfig::regular(2.0, 2, 1);
  auto state = zero_pool_state(cfg, 1);
  pool_chain_step(state, Tensor::matrix(1, 1, {1.0}), cfg);
  EXPECT_EQ(scalar_pools(state), (std::vector<double>{0.5, 0.125}));
  pool_chain_step(state, Tensor::matrix(1, 1, {0.0}), cfg);
  EXPECT_EQ(scalar_pools(state), (std::vector<double>{0.25, 0.15625}));
}

TEST(PoolChainStep, ConstantInputConverges) {
  const auto cfg = PoolChainConfig::regular(2.0, 4, 1);
  auto state = zero_pool_state(cfg, 1);
  // The slowest pool forgets at 15/16 per step, so 10 * b^k steps leaves
  // about 8e-5 behind; twice that gets below 1e-6.
  for (std::size_t t = 0; t < 10 * 16; ++t) {
    pool_chain_step(state, Tensor::matrix(1, 1, {1.0}), cfg);
  }
  for (double v : scalar_pools(state)) EXPECT_LT(std::abs(v - 1.0), 1e-4);
  for (std::size_t t = 0; t < 10 * 16; ++t) {
    pool_chain_step(state, Tensor::matrix(1, 1, {1.0}), cfg);
  }
  for (double v : scalar_pools(state)) EXPECT_LT(std::abs(v - 1.0), 1e-6);
}

TEST(PoolChainStep, WidthMismatchThrows) {
  const auto cfg = PoolChainConfig::regular(2.0, 2, 3);
  auto state = zero_pool_state(cfg, 1);
  EXPECT_THROW(pool_chain_step(state, Tensor::zeros(1, 4), cfg), ShapeError);
  EXPECT_THROW(parallel_bank_step(state, Tensor::zeros(1, 4), cfg), ShapeError);
}

TEST(ParallelBankStep, ImpulseHandValues) {
  const auto cfg = PoolChainConfig::regular(2.0, 2, 1);
  auto state = zero_pool_state(cfg, 1);
  parallel_bank_step(state, Tensor::matrix(1, 1, {1.0}), cfg);
  EXPECT_EQ(scalar_pools(state), (std::vector<double>{0.5, 0.25}));
  parallel_bank_step(state, Tensor::matrix(1, 1, {0.0}), cfg);
  EXPECT_EQ(scalar_pools(state), (std::vector<double>{0.25, 0.1875}));
}

TEST(ParallelBankStep, ZeroAndConstantInputs) {
  const auto cfg = PoolChainConfig::regular(2.0, 3, 2);
  auto state = zero_pool_state(cfg, 1);
  parallel_bank_step(state, Tensor::zeros(1, 2), cfg);
  for (double v : scalar_pools(state)) EXPECT_EQ(v, 0.0);
  for (int t = 0; t < 400; ++t) {
    parallel_bank_step(state, Tensor::matrix(1, 2, {-2.0, -2.0}), cfg);
  }
  for (const auto& p : state.pools) {
    for (double v : p.values()) EXPECT_NEAR(v, -2.0, 1e-9);
  }
}

// Runs a chain over a sequence of batch x width inputs, returns final pools.
std::vector<Tensor> run_chain(const PoolChainConfig& cfg, const std::vector<Tensor>& xs) {
  auto state = zero_pool_state(cfg, xs.front().rows());
  for (const auto& x : xs) pool_chain_step(state, x, cfg);
  return state.pools;
}

TEST(PoolChainProperty, Superposition) {
  Rng rng(21);
  const auto cfg = PoolChainConfig::regular(2.0, 5, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = rng.uniform(-2, 2);
    const double beta = rng.uniform(-2, 2);
    std::vector<Tensor> x, y, mix;
    for (int t = 0; t < 30; ++t) {
      x.push_back(random_tensor(rng, 1, 3));
      y.push_back(random_tensor(rng, 1, 3));
      Tensor m = Tensor::zeros(1, 3);
      for (std::size_t i = 0; i < 3; ++i) m[i] = alpha * x.back()[i] + beta * y.back()[i];
      mix.push_back(m);
    }
    const auto px = run_chain(cfg, x);
    const auto py = run_chain(cfg, y);
    const auto pm = run_chain(cfg, mix);
    for (std::size_t n = 0; n < cfg.pools; ++n) {
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(pm[n][i], alpha * px[n][i] + beta * py[n][i], 1e-10);
      }
    }
  }
}

TEST(PoolChainProperty, MatrixEquivariance) {
  Rng rng(22);
  const auto cfg_in = PoolChainConfig::regular(3.0, 4, 3);
  const auto cfg_out = PoolChainConfig::regular(3.0, 4, 2);
  const Tensor a = random_tensor(rng, 3, 2);
  std::vector<Tensor> x, ax;
  for (int t = 0; t < 40; ++t) {
    x.push_back(random_tensor(rng, 1, 3));
    Tensor m = Tensor::zeros(1, 2);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t i = 0; i < 3; ++i) m[j] += x.back()[i] * a(i, j);
    }
    ax.push_back(m);
  }
  const auto px = run_chain(cfg_in, x);
  const auto pax = run_chain(cfg_out, ax);
  for (std::size_t n = 0; n < 4; ++n) {
    for (std::size_t j = 0; j < 2; ++j) {
      double expect = 0.0;
      for (std::size_t i = 0; i < 3; ++i) expect += px[n][i] * a(i, j);
      EXPECT_NEAR(pax[n][j], expect, 1e-10);
    }
  }
}

TEST(PoolChainConfig, OrthonormalProjections) {
  const auto cfg = PoolChainConfig::augmented(2.0, 5, 7, 99);
  ASSERT_EQ(cfg.projections.size(), 4u);
  for (const auto& q : cfg.projections) {
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) {
        double dot = 0.0;
        for (std::size_t r = 0; r < 7; ++r) dot += q(r, i) * q(r, j);
        EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-10);
      }
    }
  }
  // Same seed, same matrices.
  EXPECT_EQ(PoolChainConfig::augmented(2.0, 5, 7, 99).projections, cfg.projections);
}

TEST(PoolChainConfig, AugmentedChainIsNotLinear) {
  Rng rng(4);
  const auto cfg = PoolChainConfig::augmented(2.0, 3, 4, 5);
  std::vector<Tensor> x, x3;
  for (int t = 0; t < 10; ++t) {
    x.push_back(random_tensor(rng, 1, 4));
    Tensor s = x.back();
    for (double& v : s.values()) v *= 3.0;
    x3.push_back(s);
  }
  const auto p = run_chain(cfg, x);
  const auto p3 = run_chain(cfg, x3);
  EXPECT_GT(std::abs(p3[2][0] - 3.0 * p[2][0]), 1e-3);
}

// ---- differentiable pool step ----------------------------------------------

TEST(PoolStep, MatchesPlainRecurrence) {
  Rng rng(7);
  for (MemoryKind kind : {MemoryKind::kChain, MemoryKind::kParallel}) {
    auto cfg = PoolChainConfig::regular(1.5, 4, 3);
    auto state = zero_pool_state(cfg, 2);
    ad::Graph g;
    std::vector<ad::Var> prev;
    for (std::size_t n = 0; n < 4; ++n) prev.push_back(g.constant(Tensor::zeros(2, 3)));
    for (int t = 0; t < 6; ++t) {
      const Tensor x = random_tensor(rng, 2, 3);
      if (kind == MemoryKind::kChain) {
        pool_chain_step(state, x, cfg);
      } else {
        parallel_bank_step(state, x, cfg);
      }
      prev = pool_step(g, prev, g.constant(x), cfg, kind).pools;
    }
    for (std::size_t n = 0; n < 4; ++n) EXPECT_EQ(prev[n].value(), state.pools[n]);
  }
}

TEST(PoolStep, GradientAttenuationAcrossThreePools) {
  auto cfg = PoolChainConfig::regular(2.0, 3, 1);
  cfg.gradient_pass_depth = 3;
  ad::Graph g;
  ad::Var h = g.input(Tensor::matrix(1, 1, {0.7}), true);
  std::vector<ad::Var> prev(3, g.constant(Tensor::zeros(1, 1)));
  for (auto& p : prev) p = g.constant(Tensor::matrix(1, 1, {0.3}));
  const auto out = pool_step(g, prev, h, cfg, MemoryKind::kChain);
  g.backward(ad::sum_all(out.pools[2]));
  EXPECT_NEAR(g.grad(h).item(), 0.015625, 1e-12);
}

TEST(PoolStep, DepthBlocksSlowPools) {
  auto cfg = PoolChainConfig::regular(2.0, 4, 2);
  ASSERT_EQ(cfg.gradient_pass_depth, 1u);
  ad::Graph g;
  ad::Var h = g.input(Tensor::matrix(1, 2, {0.7, -0.2}), true);
  std::vector<ad::Var> prev;
  for (int n = 0; n < 4; ++n) prev.push_back(g.input(Tensor::matrix(1, 2, {0.1, 0.2}), true));
  const auto out = pool_step(g, prev, h, cfg, MemoryKind::kChain);
  // Loss reads pool 3 only; it must not reach the embedding.
  g.backward(ad::sum_all(out.pools[2]));
  for (const Tensor gr = g.grad(h); double v : gr.values()) EXPECT_EQ(v, 0.0);
  // Its own previous value still receives the carry gradient.
  EXPECT_NEAR(g.grad(prev[2])[0], 0.875, 1e-15);
}

TEST(PoolStep, GradCheckIsExact) {
  Rng rng(8);
  auto cfg = PoolChainConfig::regular(2.0, 3, 2);
  cfg.gradient_pass_depth = 3;
  std::vector<Tensor> inputs = {random_tensor(rng, 2, 2), random_tensor(rng, 2, 2),
                                random_tensor(rng, 2, 2), random_tensor(rng, 2, 2)};
  const Tensor w = random_tensor(rng, 2, 6);
  const auto report = ad::gradient_check(
      [&](ad::Graph& g, std::span<const ad::Var> v) {
        std::vector<ad::Var> prev(v.begin() + 1, v.end());
        const auto out = pool_step(g, prev, v[0], cfg, MemoryKind::kChain);
        const ad::Var joined = ad::concat(out.pools);
        return ad::sum_all(ad::mul(joined, g.constant(w)));
      },
      inputs, 1e-6);
  EXPECT_LT(report.max_relative_error, 1e-9);
}

TEST(PoolStep, RejectsLstmKind) {
  const auto cfg = PoolChainConfig::regular(2.0, 1, 1);
  ad::Graph g;
  std::vector<ad::Var> prev = {g.constant(Tensor::zeros(1, 1))};
  EXPECT_THROW(pool_step(g, prev, g.constant(Tensor::zeros(1, 1)), cfg, MemoryKind::kLstm),
               ConfigError);
}

// ---- LSTM -------------------------------------------------------------------

struct LstmFixture {
  ad::ParameterSet params;
  LstmLayer layer;

  LstmFixture(std::size_t in, std::size_t width, Rng* rng) {
    layer.input_width = in;
    layer.width = width;
    Tensor k = Tensor::zeros(in + width, 4 * width);
    Tensor b = Tensor::zeros(1, 4 * width);
    if (rng) {
      k = random_tensor(*rng, in + width, 4 * width, -0.5, 0.5);
      b = random_tensor(*rng, 1, 4 * width, -0.5, 0.5);
    }
    layer.kernel = params.add("k", k);
    layer.bias = params.add("b", b);
  }
};

TEST(Lstm, ZeroWeightsKeepZeroState) {
  LstmFixture f(3, 4, nullptr);
  ad::Graph g;
  Bound bound(g, f.params);
  LstmVars s{g.constant(Tensor::zeros(1, 4)), g.constant(Tensor::zeros(1, 4))};
  Rng rng(1);
  for (int t = 0; t < 5; ++t) s = lstm_step(bound, f.layer, s, g.constant(random_tensor(rng, 1, 3)));
  for (double v : s.cell.value().values()) EXPECT_EQ(v, 0.0);
  for (double v : s.hidden.value().values()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, ClosedGatesCarryTheCell) {
  Rng rng(2);
  ad::Graph g;
  const Tensor m = random_tensor(rng, 2, 3);
  ad::Var cell = lstm_cell_update(g.constant(m), g.constant(random_tensor(rng, 2, 3)),
                                  g.constant(Tensor::zeros(2, 3)),
                                  g.constant(Tensor(Shape{2, 3}, 1.0)));
  EXPECT_EQ(cell.value(), m);
}

TEST(Lstm, TiedGatesMatchSinglePoolFilter) {
  Rng rng(3);
  ad::Graph g;
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor m = random_tensor(rng, 1, 5);
    const Tensor cand = random_tensor(rng, 1, 5);
    const Tensor gi = random_tensor(rng, 1, 5, 0.0, 1.0);
    Tensor gf = gi;
    for (double& v : gf.values()) v = 1.0 - v;
    const Tensor cell =
        lstm_cell_update(g.constant(m), g.constant(cand), g.constant(gi), g.constant(gf))
            .value();
    for (std::size_t i = 0; i < 5; ++i) {
      // Single-pool update with a = g_input.
      auto cfg = PoolChainConfig::regular(2.0, 1, 1);
      cfg.coefficients[0] = gi[i];
      PoolChainState s;
      s.pools = {Tensor::matrix(1, 1, {m[i]})};
      pool_chain_step(s, Tensor::matrix(1, 1, {cand[i]}), cfg);
      EXPECT_NEAR(cell[i], s.pools[0][0], 1e-12);
    }
  }
}

TEST(Lstm, SingleStepGradCheck) {
  Rng rng(4);
  LstmFixture f(3, 4, &rng);
  std::vector<Tensor> inputs = {random_tensor(rng, 2, 3), random_tensor(rng, 2, 4),
                                random_tensor(rng, 2, 4)};
  const Tensor w = random_tensor(rng, 2, 8);
  const auto report = ad::gradient_check(
      [&](ad::Graph& g, std::span<const ad::Var> v) {
        Bound bound(g, f.params);
        const auto s = lstm_step(bound, f.layer, LstmVars{v[1], v[2]}, v[0]);
        const ad::Var parts[] = {s.cell, s.hidden};
        return ad::sum_all(ad::mul(ad::concat(parts), g.constant(w)));
      },
      inputs, 1e-6);
  EXPECT_LT(report.max_relative_error, 1e-5);
}

TEST(Lstm, WidthMismatchThrows) {
  LstmFixture f(3, 4, nullptr);
  ad::Graph g;
  Bound bound(g, f.params);
  LstmVars s{g.constant(Tensor::zeros(1, 4)), g.constant(Tensor::zeros(1, 4))};
  EXPECT_THROW(lstm_step(bound, f.layer, s, g.constant(Tensor::zeros(1, 2))), ShapeError);
}

TEST(MemoryKind, NamesRoundTrip) {
  for (auto k : {MemoryKind::kChain, MemoryKind::kParallel, MemoryKind::kLstm}) {
    EXPECT_EQ(parse_memory_kind(memory_kind_name(k)), k);
  }
  EXPECT_THROW(parse_memory_kind("gru"), ConfigError);
}

}  // namespace
}  // namespace lowpass::memory
