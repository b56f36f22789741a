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

#include "lowpass/graph.hpp"
#include "lowpass/gridworlds.hpp"
#include "lowpass/network.hpp"
#include "lowpass/rng.hpp"
#include "lowpass/training.hpp"

namespace lowpass {
namespace {

// Forward and backward over one chunk of L = 8 steps, batch 16.
void chunk(benchmark::State& st, const memory::NetworkSpec& spec) {
  memory::Network net(spec, 1);
  Rng rng(2);
  std::vector<Tensor> xs;
  for (int t = 0; t < 8; ++t) {
    Tensor x = Tensor::zeros(16, spec.input_width);
    for (std::size_t b = 0; b < 16; ++b) x(b, rng.index(spec.input_width)) = 1.0;
    xs.push_back(x);
  }
  const std::vector<std::int64_t> labels(16, 1);
  for (auto _ : st) {
    ad::Graph g;
    memory::Bound bound(g, net.parameters());
    auto state = net.bind_state(g, net.initial_state(16));
    memory::Network::StepOutput out;
    for (const auto& x : xs) {
      out = net.step(bound, state, g.constant(x));
      state = out.state;
    }
    g.backward(ad::softmax_cross_entropy(out.logits, labels, std::vector<double>(16, 1.0 / 16)));
    net.parameters().zero_grad();
  }
  st.SetItemsProcessed(st.iterations() * 16 * 8);
}

void BM_ChainChunk(benchmark::State& st) {
  chunk(st, memory::NetworkSpec::concrete_classifier(8, 16, 8, 32, 2.0, 4));
}
BENCHMARK(BM_ChainChunk);

void BM_LstmChunk(benchmark::State& st) {
  chunk(st, memory::NetworkSpec::lstm_classifier(32, 32, 4));
}
BENCHMARK(BM_LstmChunk);

void BM_EnvStep(benchmark::State& st) {
  const auto task = static_cast<grid::Task>(st.range(0));
  const auto cfg = grid::EnvConfig::for_task(task);
  Rng rng(3);
  auto s = grid::env_new(cfg, 0);
  std::uint64_t episode = 0;
  for (auto _ : st) {
    if (s.done) s = grid::env_new(cfg, ++episode);
    benchmark::DoNotOptimize(grid::env_step(s, grid::action_from_index(rng.index(5))).reward);
  }
  st.SetLabel(grid::task_name(task));
}
BENCHMARK(BM_EnvStep)->DenseRange(0, 2);

void BM_ActorCritic(benchmark::State& st) {
  train::RlConfig cfg;
  cfg.env = grid::EnvConfig::for_task(grid::Task::kTMaze);
  cfg.env_steps = 3000;
  for (auto _ : st) benchmark::DoNotOptimize(train::train_actor_critic(cfg).updates);
  st.SetItemsProcessed(st.iterations() * 3000);
}
BENCHMARK(BM_ActorCritic)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lowpass
