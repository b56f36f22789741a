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
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lowpass/error.hpp"
#include "lowpass/training.hpp"

namespace lowpass::train {
namespace {

TEST(Smoother, OneUpdateFromZero) {
  const std::vector<double> one = {1.0};
  EXPECT_NEAR(smoothed_metric(one), 0.02, 1e-15);
}

TEST(Smoother, GeometricSeries) {
  for (int t : {1, 5, 50, 300}) {
    const std::vector<double> ones(static_cast<std::size_t>(t), 1.0);
    EXPECT_NEAR(smoothed_metric(ones), 1.0 - std::pow(0.98, t), 1e-12);
  }
}

TEST(Smoother, AlternatingStreamSettlesAtHalf) {
  std::vector<double> xs;
  for (int i = 0; i < 2000; ++i) xs.push_back(i % 2);
  EXPECT_NEAR(smoothed_metric(xs), 0.5, 0.01);
}

TEST(MetricsLog, MonotoneCountersAndCsv) {
  MetricsLog log;
  log.add({1, 10, 0.5, 0.25, 0.005});
  log.add({2, 20, 0.4, 0.5, 0.0149});
  EXPECT_THROW(log.add({1, 30, 0, 0, 0}), std::logic_error);
  EXPECT_THROW(log.add({3, 5, 0, 0, 0}), std::logic_error);
  std::ostringstream os;
  log.write_csv(os);
  EXPECT_EQ(os.str(),
            "# lowpass-csv v1 metrics\n"
            "update,steps_seen,loss,metric,smoothed_metric\n"
            "1,10,0.5,0.25,0.005\n"
            "2,20,0.4,0.5,0.0149\n");
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.network = memory::NetworkSpec::concrete_classifier(4, 8, 4, 16, 2.0, 4);
  cfg.batch = 4;
  cfg.truncation = 8;
  cfg.budget = 20000;
  cfg.log_every = 10;
  cfg.seed = 3;
  return cfg;
}

TEST(TrainConfig, BudgetArithmetic) {
  TrainConfig cfg;
  cfg.budget = 4'000'000;
  cfg.batch = 16;
  cfg.truncation = 8;
  EXPECT_EQ(cfg.chunk_count(), 31250u);
}

TEST(TrainConfig, Validation) {
  auto cfg = small_config();
  cfg.network.classes = 8;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.truncation = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.network.base = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(TrainClassifier, SymbolAccounting) {
  const auto cfg = small_config();
  const auto r = train_classifier(cfg);
  EXPECT_EQ(r.chunks, cfg.chunk_count());
  EXPECT_EQ(r.symbols_seen, cfg.batch * cfg.truncation * r.chunks);
  EXPECT_LE(r.optimizer_steps, r.chunks);
  EXPECT_GT(r.classifications, 0u);
  ASSERT_FALSE(r.log.empty());
  EXPECT_EQ(r.log.back().steps_seen, r.symbols_seen);
  for (const auto& row : r.log.rows()) {
    EXPECT_TRUE(std::isfinite(row.loss));
    EXPECT_GE(row.metric, 0.0);
    EXPECT_LE(row.metric, 1.0);
  }
}

TEST(TrainClassifier, BitIdenticalReruns) {
  const auto cfg = small_config();
  const auto a = train_classifier(cfg);
  const auto b = train_classifier(cfg);
  EXPECT_EQ(a.log, b.log);
  ASSERT_EQ(a.parameters.size(), b.parameters.size());
  for (std::size_t i = 0; i < a.parameters.size(); ++i) {
    EXPECT_EQ(a.parameters[i].value, b.parameters[i].value);
  }
  auto other = cfg;
  other.seed = 4;
  EXPECT_NE(train_classifier(other).log, a.log);
}

TEST(TrainClassifier, UnlabelledChunksSkipTheUpdate) {
  auto cfg = small_config();
  cfg.batch = 1;
  cfg.truncation = 1;
  cfg.budget = 50;  // shorter than any sequence
  cfg.log_every = 1;
  const auto r = train_classifier(cfg);
  EXPECT_EQ(r.chunks, 50u);
  EXPECT_EQ(r.optimizer_steps, 0u);
  const memory::Network fresh(cfg.network, cfg.seed);
  for (std::size_t i = 0; i < fresh.parameters().size(); ++i) {
    EXPECT_EQ(r.parameters[i].value, fresh.parameters()[i].value);
  }
}

TEST(TrainClassifier, SingleStepChunksStillTrain) {
  auto cfg = small_config();
  cfg.batch = 1;
  cfg.truncation = 1;
  cfg.budget = 400;
  const auto r = train_classifier(cfg);
  EXPECT_GT(r.optimizer_steps, 0u);
}

TEST(TrainClassifier, LstmAndParallelRun) {
  for (auto kind : {memory::MemoryKind::kLstm, memory::MemoryKind::kParallel}) {
    auto cfg = small_config();
    cfg.network = kind == memory::MemoryKind::kLstm
                      ? memory::NetworkSpec::lstm_classifier(8, 8, 4)
                      : memory::NetworkSpec::parallel_classifier(3, 8, 4, 8, 2.0, 4);
    cfg.budget = 4000;
    EXPECT_GT(train_classifier(cfg).chunks, 0u);
  }
}

TEST(TrainClassifier, DivergenceIsNumericError) {
  auto cfg = small_config();
  cfg.adam.learning_rate = 1e250;
  cfg.budget = 200000;
  EXPECT_THROW(train_classifier(cfg), NumericError);
}

TEST(TrainClassifier, ProgressCanStopTheRun) {
  auto cfg = small_config();
  cfg.log_every = 1;
  std::size_t calls = 0;
  const auto r = train_classifier(cfg, [&](const MetricsRow&) { return ++calls < 3; });
  EXPECT_EQ(calls, 3u);
  EXPECT_EQ(r.chunks, 3u);
}

// Gradient of a later step's output with respect to an earlier input is zero
// once the state between them passes a constant boundary, and nonzero
// without one.
TEST(Truncation, BoundaryBlocksEarlierSteps) {
  const auto spec = memory::NetworkSpec::concrete_classifier(3, 8, 4, 8, 2.0, 4);
  memory::Network net(spec, 1);
  for (bool truncate : {true, false}) {
    ad::Graph g;
    memory::Bound bound(g, net.parameters());
    auto state = net.bind_state(g, net.initial_state(1));
    Tensor x = Tensor::zeros(1, 8);
    x[6] = 1.0;
    ad::Var early = g.input(x, true);
    auto out = net.step(bound, state, early);
    state = out.state;
    if (truncate) {
      for (auto& s : state) s = ad::stop_gradient(s);
    }
    Tensor y = Tensor::zeros(1, 8);
    y[2] = 1.0;
    out = net.step(bound, state, g.constant(y));
    g.backward(ad::softmax_cross_entropy(out.logits, {1}, {1.0}));
    double mag = 0.0;
    for (const Tensor gr = g.grad(early); double v : gr.values()) mag += std::abs(v);
    if (truncate) {
      EXPECT_EQ(mag, 0.0);
    } else {
      EXPECT_GT(mag, 0.0);
    }
  }
}

// ---- actor-critic -------------------------------------------------------------

TEST(SegmentLengths, Arithmetic) {
  EXPECT_EQ(segment_lengths(300, 300), (std::vector<std::size_t>{300}));
  const auto threes = segment_lengths(300, 3);
  EXPECT_EQ(threes.size(), 100u);
  for (auto s : threes) EXPECT_EQ(s, 3u);
  const auto sevens = segment_lengths(300, 7);
  EXPECT_EQ(sevens.size(), 43u);
  EXPECT_EQ(sevens.back(), 6u);
  EXPECT_EQ(segment_lengths(300, 1000), (std::vector<std::size_t>{300}));
  EXPECT_THROW(segment_lengths(300, 0), ConfigError);
}

RlConfig small_rl() {
  RlConfig cfg;
  cfg.env = grid::EnvConfig::for_task(grid::Task::kTMaze);
  cfg.env.tmaze.limbo = 20;
  cfg.rollout = 50;
  cfg.block_interval = 20;
  cfg.env_steps = 600;
  cfg.seed = 2;
  return cfg;
}

TEST(ActorCritic, RunsAndAccounts) {
  const auto cfg = small_rl();
  const auto r = train_actor_critic(cfg);
  EXPECT_EQ(r.env_steps, 600u);
  EXPECT_EQ(r.updates, 12u);
  ASSERT_FALSE(r.log.empty());
  for (const auto& row : r.log.rows()) EXPECT_TRUE(std::isfinite(row.loss));
}

TEST(ActorCritic, BitIdenticalReruns) {
  const auto cfg = small_rl();
  const auto a = train_actor_critic(cfg);
  const auto b = train_actor_critic(cfg);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.episode_returns, b.episode_returns);
}

TEST(ActorCritic, EveryMemoryKindRuns) {
  for (auto kind : {memory::MemoryKind::kParallel, memory::MemoryKind::kLstm}) {
    auto cfg = small_rl();
    cfg.memory = kind;
    cfg.env_steps = 100;
    EXPECT_EQ(train_actor_critic(cfg).env_steps, 100u);
  }
}

TEST(ActorCritic, CuedCatchEpisodesComplete) {
  RlConfig cfg;
  cfg.env = grid::EnvConfig::for_task(grid::Task::kCuedCatch);
  cfg.env_steps = 1500;
  const auto r = train_actor_critic(cfg);
  EXPECT_EQ(r.episode_returns.size(), 2u);
  for (double ret : r.episode_returns) {
    EXPECT_GE(ret, 0.0);
    EXPECT_LE(ret, 60.0);
  }
}

TEST(ActorCritic, Validation) {
  auto cfg = small_rl();
  cfg.block_interval = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = small_rl();
  cfg.gamma = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(RlResult, RecentMeanReturn) {
  RlResult r;
  r.episode_returns = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(r.recent_mean_return(2), 3.5);
  EXPECT_DOUBLE_EQ(r.recent_mean_return(100), 2.5);
}

// ---- hyperparameter sampling -------------------------------------------------

TEST(HyperParams, RatesLogUniformInRange) {
  const HyperParamSpace space;
  Rng rng(1);
  const int draws = 10000;
  const int bins = 10;
  std::vector<int> hist(bins, 0);
  const double lo = std::log(5e-7), hi = std::log(1e-3);
  for (int i = 0; i < draws; ++i) {
    const auto cfg = sample_hyperparams(space, memory::MemoryKind::kChain, rng, TrainConfig{});
    const double a = cfg.adam.learning_rate;
    ASSERT_GE(a, 5e-7);
    ASSERT_LE(a, 1e-3);
    ASSERT_GE(cfg.adam.epsilon, 5e-7);
    ASSERT_LE(cfg.adam.epsilon, 1e-3);
    const int bin = std::min(bins - 1, static_cast<int>((std::log(a) - lo) / (hi - lo) * bins));
    ++hist[static_cast<std::size_t>(bin)];
  }
  const double p = 1.0 / bins;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (int h : hist) EXPECT_NEAR(h, draws * p, 3 * sigma);
}

TEST(HyperParams, ValuesComeFromTheSets) {
  const HyperParamSpace space;
  Rng rng(2);
  const auto in = [](const auto& set, auto v) {
    return std::find(set.begin(), set.end(), v) != set.end();
  };
  for (int i = 0; i < 500; ++i) {
    const auto c = sample_hyperparams(space, memory::MemoryKind::kChain, rng, TrainConfig{});
    EXPECT_TRUE(in(space.batch, c.batch));
    EXPECT_TRUE(in(space.hidden, c.network.hidden));
    EXPECT_TRUE(in(space.pool_width, c.network.pool_width));
    EXPECT_TRUE(in(space.pools, c.network.pools));
    EXPECT_TRUE(in(space.viewport, c.network.viewport));
    EXPECT_TRUE(in(space.base, c.network.base));
    const auto l = sample_hyperparams(space, memory::MemoryKind::kLstm, rng, TrainConfig{});
    EXPECT_TRUE(in(space.lstm_width, l.network.lstm_width));
    EXPECT_EQ(l.network.memory, memory::MemoryKind::kLstm);
  }
}

TEST(HyperParams, SchemaPartition) {
  const HyperParamSpace space;
  Rng rng(3);
  std::set<std::size_t> pool_lstm_widths, lstm_pools, lstm_viewports;
  std::set<double> lstm_bases;
  for (int i = 0; i < 300; ++i) {
    pool_lstm_widths.insert(
        sample_hyperparams(space, memory::MemoryKind::kChain, rng, TrainConfig{})
            .network.lstm_width);
    const auto l = sample_hyperparams(space, memory::MemoryKind::kLstm, rng, TrainConfig{});
    lstm_pools.insert(l.network.pools);
    lstm_viewports.insert(l.network.viewport);
    lstm_bases.insert(l.network.base);
  }
  EXPECT_EQ(pool_lstm_widths.size(), 1u);
  EXPECT_EQ(lstm_pools.size(), 1u);
  EXPECT_EQ(lstm_viewports.size(), 1u);
  EXPECT_EQ(lstm_bases.size(), 1u);
}

TEST(HyperParams, SameSeedSameDraw) {
  const HyperParamSpace space;
  Rng a(11), b(11);
  const auto x = sample_hyperparams(space, memory::MemoryKind::kParallel, a, TrainConfig{});
  const auto y = sample_hyperparams(space, memory::MemoryKind::kParallel, b, TrainConfig{});
  EXPECT_EQ(x.adam.learning_rate, y.adam.learning_rate);
  EXPECT_EQ(x.batch, y.batch);
  EXPECT_EQ(x.network.pools, y.network.pools);
  EXPECT_EQ(x.network.embedding_width, x.network.pool_width);
}

TEST(HyperParams, KeepsTruncationTaskAndBudget) {
  TrainConfig base;
  base.truncation = 32;
  base.budget = 1234;
  base.task = tasks::TaskSpec::three_marker();
  Rng rng(4);
  const auto c = sample_hyperparams(HyperParamSpace{}, memory::MemoryKind::kChain, rng, base);
  EXPECT_EQ(c.truncation, 32u);
  EXPECT_EQ(c.budget, 1234u);
  EXPECT_EQ(c.network.classes, 8u);
}

}  // namespace
}  // namespace lowpass::train
