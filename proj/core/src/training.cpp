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

#include "lowpass/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "lowpass/error.hpp"
#include "lowpass/io.hpp"

namespace lowpass::train {

using memory::Bound;
using memory::Network;

double smoothed_metric(std::span<const double> outcomes, double factor) {
  Smoother s(factor);
  for (double x : outcomes) s.update(x);
  return s.value();
}

void MetricsLog::add(const MetricsRow& row) {
  if (!rows_.empty() && (row.update < rows_.back().update ||
                         row.steps_seen < rows_.back().steps_seen)) {
    throw std::logic_error("MetricsLog counters must be monotone");
  }
  rows_.push_back(row);
}

void MetricsLog::write_csv(std::ostream& os) const {
  io::write_csv_preamble(os, "metrics",
                         {"update", "steps_seen", "loss", "metric", "smoothed_metric"});
  for (const auto& r : rows_) {
    os << r.update << ',' << r.steps_seen << ',' << io::format_double(r.loss) << ','
       << io::format_double(r.metric) << ',' << io::format_double(r.smoothed_metric)
       << '\n';
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t argmax_row(const Tensor& logits, std::size_t row) {
  const std::size_t cols = logits.cols();
  const double* p = logits.data() + row * cols;
  return static_cast<std::size_t>(std::max_element(p, p + cols) - p);
}

void check_finite(double loss, const char* what) {
  if (!std::isfinite(loss)) {
    throw NumericError(std::string(what) + ": non-finite loss");
  }
}

}  // namespace

// ---- supervised -------------------------------------------------------------

std::uint64_t TrainConfig::chunk_count() const {
  return budget / (static_cast<std::uint64_t>(batch) * truncation);
}

void TrainConfig::validate() const {
  if (batch < 1) throw ConfigError("batch size must be at least 1");
  if (truncation < 1) throw ConfigError("truncation length must be at least 1");
  if (log_every < 1) throw ConfigError("log_every must be at least 1");
  if (network.head != memory::HeadKind::kClassifier) {
    throw ConfigError("train_classifier needs a classifier network");
  }
  if (network.input_width != tasks::kAlphabetSize) {
    throw ConfigError("classifier input width must equal the alphabet size");
  }
  if (network.classes != task.class_count()) {
    throw ConfigError("classifier outputs must equal the task's class count");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0)) {
    throw ConfigError("learning rate and epsilon must be positive");
  }
  network.validate();
  task.validate();
}

TrainResult train_classifier(const TrainConfig& config, const ProgressFn& progress) {
  config.validate();
  const auto start = Clock::now();
  Network net(config.network, config.seed);
  auto& params = net.parameters();
  ad::AdamState adam = ad::make_adam_state(params);
  tasks::SequenceStream stream(config.task, config.batch, config.truncation,
                               config.seed);
  const std::size_t batch = config.batch;
  const std::size_t length = config.truncation;

  TrainResult result;
  Smoother smoother;
  Network::State state = net.initial_state(batch);
  double window_loss = 0.0;
  std::size_t window_loss_terms = 0;
  std::size_t window_correct = 0;
  std::size_t window_count = 0;
  double last_metric = 0.0;
  const std::uint64_t chunks = config.chunk_count();

  std::vector<std::int64_t> labels(batch);
  std::vector<double> weights(batch);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const tasks::StreamChunk chunk = stream.next();
    const std::size_t labelled = chunk.labelled();
    ad::Graph graph;
    Bound bound(graph, params);
    std::vector<ad::Var> vars = net.bind_state(graph, state);
    ad::Var loss;
    for (std::size_t t = 0; t < length; ++t) {
      Tensor x = Tensor::zeros(batch, tasks::kAlphabetSize);
      bool any = false;
      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t i = chunk.at(b, t);
        x(b, chunk.symbols[i]) = 1.0;
        const bool masked = chunk.loss_mask[i] != 0;
        any = any || masked;
        labels[b] = masked ? chunk.labels[i] : 0;
        weights[b] = masked ? 1.0 / static_cast<double>(labelled) : 0.0;
      }
      Network::StepOutput out = net.step(bound, vars, graph.constant(std::move(x)));
      vars = std::move(out.state);
      if (!any) continue;
      ad::Var term = ad::softmax_cross_entropy(out.logits, labels, weights);
      loss = loss.valid() ? ad::add(loss, term) : term;
      const Tensor& logits = out.logits.value();
      for (std::size_t b = 0; b < batch; ++b) {
        if (weights[b] == 0.0) continue;
        const bool correct =
            argmax_row(logits, b) == static_cast<std::size_t>(labels[b]);
        window_correct += correct ? 1 : 0;
        ++window_count;
        smoother.update(correct ? 1.0 : 0.0);
        ++result.classifications;
      }
    }
    state = Network::read_state(vars);
    if (labelled > 0) {
      const double value = loss.value().item();
      check_finite(value, "train_classifier");
      params.zero_grad();
      graph.backward(loss);
      ad::adam_step(params, adam, config.adam);
      ++result.optimizer_steps;
      window_loss += value;
      ++window_loss_terms;
    }
    ++result.chunks;
    result.symbols_seen += static_cast<std::uint64_t>(batch) * length;

    if ((c + 1) % config.log_every == 0 || c + 1 == chunks) {
      MetricsRow row;
      row.update = c + 1;
      row.steps_seen = result.symbols_seen;
      row.loss = window_loss_terms ? window_loss / static_cast<double>(window_loss_terms)
                                   : 0.0;
      if (window_count > 0) {
        last_metric = static_cast<double>(window_correct) /
                      static_cast<double>(window_count);
      }
      row.metric = last_metric;
      row.smoothed_metric = smoother.value();
      result.log.add(row);
      window_loss = 0.0;
      window_loss_terms = window_correct = window_count = 0;
      if (progress && !progress(row)) break;
    }
  }
  result.final_smoothed_accuracy = smoother.value();
  result.wall_seconds = seconds_since(start);
  result.parameters = net.parameters();
  return result;
}

// ---- reinforcement learning ---------------------------------------------------

memory::NetworkSpec RlConfig::network_spec() const {
  const auto shape = env.observation_shape();
  return memory::NetworkSpec::actor_critic(memory, {shape[0], shape[1], shape[2]},
                                           pools);
}

void RlConfig::validate() const {
  env.validate();
  if (rollout < 1) throw ConfigError("rollout length must be at least 1");
  if (block_interval < 1) throw ConfigError("block interval must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (entropy_coef < 0.0 || value_coef < 0.0) {
    throw ConfigError("loss coefficients must be non-negative");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0)) {
    throw ConfigError("learning rate and epsilon must be positive");
  }
  if (log_every < 1) throw ConfigError("log_every must be at least 1");
  network_spec().validate();
}

std::vector<std::size_t> segment_lengths(std::size_t rollout, std::size_t interval) {
  if (interval < 1) throw ConfigError("block interval must be at least 1");
  std::vector<std::size_t> out;
  for (std::size_t done = 0; done < rollout; done += interval) {
    out.push_back(std::min(interval, rollout - done));
  }
  return out;
}

double RlResult::recent_mean_return(std::size_t count) const {
  if (episode_returns.empty()) return 0.0;
  const std::size_t n = std::min(count, episode_returns.size());
  double sum = 0.0;
  for (std::size_t i = episode_returns.size() - n; i < episode_returns.size(); ++i) {
    sum += episode_returns[i];
  }
  return sum / static_cast<double>(n);
}

namespace {

Tensor observation_tensor(const grid::Observation& obs) {
  Tensor t = Tensor::zeros(1, obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) t[i] = obs.data[i];
  return t;
}

std::size_t sample_action(const Tensor& logits, Rng& rng) {
  const std::size_t n = logits.size();
  const double peak = *std::max_element(logits.data(), logits.data() + n);
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += p[i] = std::exp(logits[i] - peak);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < n; ++i) {
    if (u < p[i]) return i;
    u -= p[i];
  }
  return n - 1;
}

}  // namespace

RlResult train_actor_critic(const RlConfig& config, const ProgressFn& progress) {
  config.validate();
  const auto start = Clock::now();
  Network net(config.network_spec(), config.seed);
  auto& params = net.parameters();
  ad::AdamState adam = ad::make_adam_state(params);
  Rng policy(derive_seed(config.seed, SeedStream::kPolicy));

  std::uint64_t episode = 0;
  grid::EnvState env =
      grid::env_new(config.env, derive_seed(config.seed, SeedStream::kEpisode, episode));
  grid::Observation obs = grid::render(env);
  Network::State state = net.initial_state(1);
  const Network::State fresh = net.initial_state(1);

  RlResult result;
  Smoother smoother;
  double window_loss = 0.0;
  std::size_t window_updates = 0;
  double window_return = 0.0;
  std::size_t window_episodes = 0;
  double last_metric = 0.0;

  while (result.env_steps < config.env_steps) {
    const std::size_t steps = static_cast<std::size_t>(
        std::min<std::uint64_t>(config.rollout, config.env_steps - result.env_steps));
    ad::Graph graph;
    Bound bound(graph, params);
    std::vector<ad::Var> vars = net.bind_state(graph, state);
    std::vector<ad::Var> logits;
    std::vector<ad::Var> values;
    std::vector<std::int64_t> actions;
    std::vector<double> rewards;
    std::vector<bool> dones;
    logits.reserve(steps);
    values.reserve(steps);

    for (std::size_t t = 0; t < steps; ++t) {
      if (t > 0 && t % config.block_interval == 0) {
        for (auto& v : vars) v = ad::stop_gradient(v);
      }
      Network::StepOutput out =
          net.step(bound, vars, graph.constant(observation_tensor(obs)));
      const std::size_t action = sample_action(out.logits.value(), policy);
      const grid::StepResult step = grid::env_step(env, grid::action_from_index(action));
      ++result.env_steps;
      logits.push_back(out.logits);
      values.push_back(out.value);
      actions.push_back(static_cast<std::int64_t>(action));
      rewards.push_back(step.reward);
      dones.push_back(step.done);
      if (step.done) {
        result.episode_returns.push_back(env.episode_return);
        smoother.update(env.episode_return);
        window_return += env.episode_return;
        ++window_episodes;
        ++episode;
        env = grid::env_new(config.env,
                            derive_seed(config.seed, SeedStream::kEpisode, episode));
        obs = grid::render(env);
        vars = net.bind_state(graph, fresh);
      } else {
        obs = step.observation;
        vars = std::move(out.state);
      }
    }
    state = Network::read_state(vars);

    // Bootstrap from a throwaway forward pass on the next observation.
    double next_value = 0.0;
    if (!dones.back()) {
      ad::Graph probe;
      Bound probe_bound(probe, params);
      Network::StepOutput out = net.step(probe_bound, net.bind_state(probe, state),
                                         probe.constant(observation_tensor(obs)));
      next_value = out.value.value().item();
    }

    std::vector<double> returns(steps);
    double running = next_value;
    for (std::size_t t = steps; t-- > 0;) {
      running = rewards[t] + (dones[t] ? 0.0 : config.gamma * running);
      returns[t] = running;
    }
    const double inv = 1.0 / static_cast<double>(steps);
    std::vector<double> advantage_weights(steps);
    Tensor targets = Tensor::zeros(1, steps);
    for (std::size_t t = 0; t < steps; ++t) {
      advantage_weights[t] = (returns[t] - values[t].value().item()) * inv;
      targets[t] = returns[t];
    }

    ad::Var all_logits =
        ad::reshape(ad::concat(logits), {steps, grid::kActionCount});
    ad::Var all_values = ad::concat(values);
    ad::Var policy_loss =
        ad::softmax_cross_entropy(all_logits, actions, advantage_weights);
    ad::Var entropy = ad::softmax_entropy(
        all_logits, std::vector<double>(steps, -config.entropy_coef * inv));
    ad::Var error = ad::sub(all_values, graph.constant(targets));
    ad::Var value_loss = ad::scale(ad::sum_all(ad::mul(error, error)),
                                   config.value_coef * inv);
    ad::Var loss = ad::add(ad::add(policy_loss, value_loss), entropy);
    const double loss_value = loss.value().item();
    check_finite(loss_value, "train_actor_critic");
    params.zero_grad();
    graph.backward(loss);
    ad::adam_step(params, adam, config.adam);
    ++result.updates;
    window_loss += loss_value;
    ++window_updates;

    const bool last = result.env_steps >= config.env_steps;
    if (result.updates % config.log_every == 0 || last) {
      MetricsRow row;
      row.update = result.updates;
      row.steps_seen = result.env_steps;
      row.loss = window_loss / static_cast<double>(window_updates);
      if (window_episodes > 0) {
        last_metric = window_return / static_cast<double>(window_episodes);
      }
      row.metric = last_metric;
      row.smoothed_metric = smoother.value();
      result.log.add(row);
      window_loss = window_return = 0.0;
      window_updates = window_episodes = 0;
      if (progress && !progress(row)) break;
    }
  }
  result.wall_seconds = seconds_since(start);
  result.parameters = net.parameters();
  return result;
}

// ---- hyperparameter sampling ---------------------------------------------------

namespace {

template <typename T>
T pick(const std::vector<T>& values, Rng& rng) {
  if (values.empty()) throw ConfigError("empty hyperparameter value set");
  return values[rng.index(values.size())];
}

double log_uniform(double lo, double hi, Rng& rng) {
  if (!(lo > 0.0) || hi < lo) throw ConfigError("bad log-uniform range");
  // Clamp guards against the last ulp escaping the range after exp(log(.)).
  return std::clamp(std::exp(rng.uniform(std::log(lo), std::log(hi))), lo, hi);
}

}  // namespace

TrainConfig sample_hyperparams(const HyperParamSpace& space, memory::MemoryKind kind,
                               Rng& rng, const TrainConfig& base) {
  TrainConfig cfg = base;
  cfg.batch = pick(space.batch, rng);
  cfg.adam.learning_rate = log_uniform(space.rate_lo, space.rate_hi, rng);
  cfg.adam.epsilon = log_uniform(space.epsilon_lo, space.epsilon_hi, rng);
  const std::size_t hidden = pick(space.hidden, rng);
  const std::size_t classes = base.task.class_count();
  if (kind == memory::MemoryKind::kLstm) {
    cfg.network = memory::NetworkSpec::lstm_classifier(pick(space.lstm_width, rng),
                                                       hidden, classes);
  } else {
    const std::size_t width = pick(space.pool_width, rng);
    const std::size_t pools = pick(space.pools, rng);
    const std::size_t viewport = pick(space.viewport, rng);
    const double b = pick(space.base, rng);
    cfg.network = kind == memory::MemoryKind::kChain
                      ? memory::NetworkSpec::concrete_classifier(pools, width, viewport,
                                                                 hidden, b, classes)
                      : memory::NetworkSpec::parallel_classifier(pools, width, viewport,
                                                                 hidden, b, classes);
  }
  return cfg;
}

}  // namespace lowpass::train
