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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lowpass/adam.hpp"
#include "lowpass/gridworlds.hpp"
#include "lowpass/network.hpp"
#include "lowpass/rng.hpp"
#include "lowpass/seq_tasks.hpp"

namespace lowpass::train {

// ---- metrics ----------------------------------------------------------------

inline constexpr double kSmoothing = 0.98;

// s <- factor * s + (1 - factor) * x, starting from 0.
class Smoother {
 public:
  explicit Smoother(double factor = kSmoothing) : factor_(factor) {}
  double update(double x) { return value_ = factor_ * value_ + (1.0 - factor_) * x; }
  double value() const { return value_; }

 private:
  double factor_;
  double value_ = 0.0;
};

double smoothed_metric(std::span<const double> outcomes, double factor = kSmoothing);

struct MetricsRow {
  std::uint64_t update = 0;
  std::uint64_t steps_seen = 0;  // symbols or environment steps
  double loss = 0.0;
  double metric = 0.0;  // window accuracy or mean episode return
  double smoothed_metric = 0.0;
  bool operator==(const MetricsRow&) const = default;
};

class MetricsLog {
 public:
  void add(const MetricsRow& row);
  const std::vector<MetricsRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const MetricsRow& back() const { return rows_.back(); }
  // Columns: update, steps_seen, loss, metric, smoothed_metric.
  void write_csv(std::ostream& os) const;
  bool operator==(const MetricsLog&) const = default;

 private:
  std::vector<MetricsRow> rows_;
};

// ---- supervised -------------------------------------------------------------

struct TrainConfig {
  memory::NetworkSpec network;
  tasks::TaskSpec task = tasks::TaskSpec::two_marker();
  std::size_t batch = 16;
  std::size_t truncation = 8;       // chunk length L
  std::uint64_t budget = 4'000'000;  // symbols
  ad::AdamConfig adam{1e-3, 1e-6};
  std::uint64_t seed = 0;
  std::size_t log_every = 100;  // chunks per MetricsLog row

  // Number of chunks the budget buys: floor(budget / (B * L)).
  std::uint64_t chunk_count() const;
  void validate() const;
};

struct TrainResult {
  MetricsLog log;
  double final_smoothed_accuracy = 0.0;
  std::uint64_t chunks = 0;
  std::uint64_t optimizer_steps = 0;  // chunks with at least one label
  std::uint64_t symbols_seen = 0;
  std::uint64_t classifications = 0;
  double wall_seconds = 0.0;
  ad::ParameterSet parameters;  // trained weights
};

// Chunk-level progress hook; return false to stop early.
using ProgressFn = std::function<bool(const MetricsRow&)>;

// Truncated BPTT: each chunk is a fresh graph whose incoming recurrent state
// is a constant. Loss is the mean cross-entropy over the chunk's labelled
// entries; chunks without labels skip the optimizer. Throws NumericError on a
// non-finite loss.
TrainResult train_classifier(const TrainConfig& config,
                             const ProgressFn& progress = nullptr);

// ---- reinforcement learning ---------------------------------------------------

struct RlConfig {
  grid::EnvConfig env;
  memory::MemoryKind memory = memory::MemoryKind::kChain;
  std::size_t pools = 8;
  std::size_t rollout = 300;
  std::size_t block_interval = 300;
  double gamma = 0.99;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  ad::AdamConfig adam{1e-3, 1e-6};
  std::uint64_t env_steps = 200'000;
  std::uint64_t seed = 0;
  std::size_t log_every = 1;  // rollouts per MetricsLog row

  memory::NetworkSpec network_spec() const;
  void validate() const;
};

// Lengths of the gradient-isolated segments of one rollout.
std::vector<std::size_t> segment_lengths(std::size_t rollout, std::size_t interval);

struct RlResult {
  MetricsLog log;
  std::vector<double> episode_returns;
  std::uint64_t env_steps = 0;
  std::uint64_t updates = 0;
  double wall_seconds = 0.0;
  ad::ParameterSet parameters;

  // Mean of the last `count` completed episodes (all of them if fewer).
  double recent_mean_return(std::size_t count) const;
};

// Single-process n-step advantage actor-critic over fixed-length rollouts.
// Recurrent state is carried between rollouts, reset at episode ends, and
// passed through a stop-gradient every block_interval steps.
RlResult train_actor_critic(const RlConfig& config,
                            const ProgressFn& progress = nullptr);

// ---- hyperparameter sampling ---------------------------------------------------

struct HyperParamSpace {
  std::vector<std::size_t> batch{4, 8, 16, 32, 64, 128};
  double rate_lo = 5e-7;
  double rate_hi = 1e-3;
  double epsilon_lo = 5e-7;
  double epsilon_hi = 1e-3;
  std::vector<std::size_t> hidden{16, 32, 64};
  std::vector<std::size_t> lstm_width{8, 16, 32, 64, 96};
  std::vector<std::size_t> pool_width{8, 16, 24, 32, 48};
  std::vector<std::size_t> pools{4, 6, 8, 10, 12};
  std::vector<std::size_t> viewport{4, 6, 10, 16};
  std::vector<double> base{1.5, 2.0, 3.0};
};

// Draws the shared parameters and then the ones belonging to `memory`.
// Truncation, task and budget are copied from `base`.
TrainConfig sample_hyperparams(const HyperParamSpace& space, memory::MemoryKind memory,
                               Rng& rng, const TrainConfig& base);

}  // namespace lowpass::train
