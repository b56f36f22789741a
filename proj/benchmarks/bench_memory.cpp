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

#include <benchmark/benchmark.h>

#include <vector>

#include "lowpass/filter_analysis.hpp"
#include "lowpass/memory.hpp"
#include "lowpass/rng.hpp"

namespace lowpass {
namespace {

Tensor noise(Rng& rng, std::size_t rows, std::size_t cols) {
  Tensor t = Tensor::zeros(rows, cols);
  for (double& v : t.values()) v = rng.uniform(-1, 1);
  return t;
}

// Args: pools, width. Batch of 16.
void BM_PoolChainStep(benchmark::State& st) {
  const auto cfg = memory::PoolChainConfig::regular(2.0, st.range(0), st.range(1));
  auto state = memory::zero_pool_state(cfg, 16);
  Rng rng(1);
  const Tensor x = noise(rng, 16, cfg.width);
  for (auto _ : st) {
    memory::pool_chain_step(state, x, cfg);
    benchmark::DoNotOptimize(state.pools.back().data());
  }
  st.SetItemsProcessed(st.iterations() * 16);
}
BENCHMARK(BM_PoolChainStep)->Args({8, 16})->Args({12, 32})->Args({8, 128});

void BM_AugmentedChainStep(benchmark::State& st) {
  const auto cfg = memory::PoolChainConfig::augmented(2.0, 8, st.range(0), 3);
  auto state = memory::zero_pool_state(cfg, 16);
  Rng rng(1);
  const Tensor x = noise(rng, 16, cfg.width);
  for (auto _ : st) {
    memory::pool_chain_step(state, x, cfg);
    benchmark::DoNotOptimize(state.pools.back().data());
  }
}
BENCHMARK(BM_AugmentedChainStep)->Arg(16)->Arg(64);

// Args: pools, sequence length.
void BM_BatchApply(benchmark::State& st) {
  const auto op = analysis::diffusion_matrices(2.0, st.range(0));
  Rng rng(2);
  std::vector<double> seq(st.range(1));
  for (double& v : seq) v = rng.uniform(-1, 1);
  for (auto _ : st) {
    benchmark::DoNotOptimize(analysis::batch_apply(op, seq, seq.size()).pools.data());
  }
}
BENCHMARK(BM_BatchApply)->Args({8, 64})->Args({12, 512});

void BM_FindPeakLags(benchmark::State& st) {
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        analysis::find_peak_lags(memory::MemoryKind::kChain, 2.0, 12, st.range(0)));
  }
}
BENCHMARK(BM_FindPeakLags)->Arg(1 << 14)->Arg(1 << 18);

}  // namespace
}  // namespace lowpass
