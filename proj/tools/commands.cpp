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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "lowpass/checkpoint.hpp"
#include "lowpass/config.hpp"
#include "lowpass/error.hpp"
#include "lowpass/filter_analysis.hpp"
#include "lowpass/gridworlds.hpp"
#include "lowpass/io.hpp"
#include "lowpass/rng.hpp"
#include "lowpass/seq_tasks.hpp"
#include "lowpass/training.hpp"

namespace lowpass::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

config::Config load_config(const RunOptions& options) {
  config::Config cfg;
  if (options.config_file) cfg = config::Config::load(*options.config_file);
  for (const auto& o : options.overrides) cfg.apply_override(o);
  if (options.seed) cfg.set("run.seed", std::to_string(*options.seed));
  return cfg;
}

json config_json(const config::Config& cfg) {
  json out = json::object();
  for (const auto& [k, v] : cfg.values()) out[k] = v;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = io::open_output(path);
  os << text;
}

void write_json(const fs::path& path, const json& doc) {
  auto os = io::open_output(path);
  os << doc.dump(2) << '\n';
}

json train_summary(const config::Config& echo, const train::TrainResult& r) {
  return json{
      {"command", "train-seq"},
      {"config", config_json(echo)},
      {"final",
       {{"smoothed_accuracy", r.final_smoothed_accuracy},
        {"chunks", r.chunks},
        {"optimizer_steps", r.optimizer_steps},
        {"symbols_seen", r.symbols_seen},
        {"classifications", r.classifications}}},
      {"wall_seconds", r.wall_seconds},
  };
}

// Writes config echo, metrics, checkpoint and summary for one classifier run.
train::TrainResult run_classifier(const train::TrainConfig& tc, const fs::path& out,
                                  bool verbose) {
  const config::Config echo = config::to_config(tc);
  fs::create_directories(out);
  write_text(out / "config.txt", echo.to_text());
  train::ProgressFn progress;
  if (verbose) {
    progress = [](const train::MetricsRow& row) {
      std::fprintf(stderr, "update %llu  symbols %llu  loss %.4f  smoothed %.4f\n",
                   static_cast<unsigned long long>(row.update),
                   static_cast<unsigned long long>(row.steps_seen), row.loss,
                   row.smoothed_metric);
      return true;
    };
  }
  train::TrainResult result = train::train_classifier(tc, progress);
  {
    auto os = io::open_output(out / "metrics.csv");
    result.log.write_csv(os);
  }
  io::save_checkpoint(out / "model.ckpt", result.parameters);
  write_json(out / "summary.json", train_summary(echo, result));
  return result;
}

}  // namespace

int cmd_train_seq(const RunOptions& options) {
  const config::Config cfg = load_config(options);
  const train::TrainConfig tc = config::train_config_from(cfg);
  cfg.check_all_used();
  const auto result = run_classifier(tc, options.out, true);
  std::printf("final smoothed accuracy %.4f after %llu symbols (%s)\n",
              result.final_smoothed_accuracy,
              static_cast<unsigned long long>(result.symbols_seen),
              options.out.string().c_str());
  return 0;
}

int cmd_train_rl(const RunOptions& options) {
  const config::Config cfg = load_config(options);
  const train::RlConfig rc = config::rl_config_from(cfg);
  cfg.check_all_used();
  const config::Config echo = config::to_config(rc);
  fs::create_directories(options.out);
  write_text(options.out / "config.txt", echo.to_text());

  const auto progress = [](const train::MetricsRow& row) {
    std::fprintf(stderr, "update %llu  env steps %llu  loss %.4f  smoothed return %.4f\n",
                 static_cast<unsigned long long>(row.update),
                 static_cast<unsigned long long>(row.steps_seen), row.loss,
                 row.smoothed_metric);
    return true;
  };
  const train::RlResult result = train::train_actor_critic(rc, progress);
  {
    auto os = io::open_output(options.out / "metrics.csv");
    result.log.write_csv(os);
  }
  {
    auto os = io::open_output(options.out / "returns.csv");
    io::write_csv_preamble(os, "returns", {"episode", "return"});
    for (std::size_t i = 0; i < result.episode_returns.size(); ++i) {
      os << i << ',' << io::format_double(result.episode_returns[i]) << '\n';
    }
  }
  io::save_checkpoint(options.out / "model.ckpt", result.parameters);
  const double recent = result.recent_mean_return(100);
  write_json(options.out / "summary.json",
             json{{"command", "train-rl"},
                  {"config", config_json(echo)},
                  {"final",
                   {{"episodes", result.episode_returns.size()},
                    {"mean_return_last_100", recent},
                    {"env_steps", result.env_steps},
                    {"updates", result.updates}}},
                  {"wall_seconds", result.wall_seconds}});
  std::printf("%zu episodes, mean return over the last 100: %.4f (%s)\n",
              result.episode_returns.size(), recent, options.out.string().c_str());
  return 0;
}

int cmd_analyze_impulse(const ImpulseOptions& o, const fs::path& out) {
  const auto kind = memory::parse_memory_kind(o.memory);
  if (kind == memory::MemoryKind::kLstm) {
    throw ConfigError("impulse responses are defined for chain and parallel memories");
  }
  const auto response = analysis::impulse_response(kind, o.base, o.pools, o.horizon);
  auto os = io::open_output(out / "impulse.csv");
  analysis::write_impulse_csv(os, response);
  const auto lags = analysis::peak_lags(response);
  std::printf("peak lags:");
  for (auto l : lags) std::printf(" %zu", l);
  std::printf("\n");
  return 0;
}

int cmd_analyze_operator(const OperatorOptions& o, const fs::path& out) {
  const auto op = analysis::diffusion_matrices(o.base, o.pools,
                                               analysis::parse_convention(o.convention));
  const auto j = analysis::batch_operator(op, o.steps);
  {
    auto os = io::open_output(out / "diffusion.csv");
    io::write_matrix_csv(os, "diffusion", op.m);
  }
  {
    auto os = io::open_output(out / "injection.csv");
    io::write_matrix_csv(os, "injection", op.a);
  }
  {
    auto os = io::open_output(out / "batch_operator.csv");
    io::write_matrix_csv(os, "batch-operator", j.j);
  }
  return 0;
}

int cmd_analyze_trace(const TraceOptions& o, const fs::path& out) {
  const auto pc = memory::PoolChainConfig::regular(o.base, o.pools, o.width);
  const Tensor trace = o.compare.empty()
                           ? analysis::memory_trace(o.text, pc, o.tail)
                           : analysis::difference_trace(o.text, o.compare, pc, o.tail);
  {
    auto os = io::open_output(out / "trace.csv");
    io::write_matrix_csv(os, o.compare.empty() ? "trace" : "difference-trace", trace);
  }
  {
    auto os = io::open_output(out / "trace.pgm");
    io::write_pgm(os, trace);
  }
  return 0;
}

int cmd_sweep(const SweepOptions& o) {
  config::Config cfg = load_config(o.run);
  if (!cfg.has("seq.memory")) cfg.set("seq.memory", o.memory);
  const train::TrainConfig base = config::train_config_from(cfg);
  cfg.check_all_used();
  const auto kind = base.network.memory;

  // Draws happen up front so the set of runs does not depend on --jobs.
  std::vector<train::TrainConfig> runs;
  const train::HyperParamSpace space;
  for (std::size_t i = 0; i < o.draws; ++i) {
    Rng rng(derive_seed(base.seed, SeedStream::kHyper, i));
    train::TrainConfig tc = train::sample_hyperparams(space, kind, rng, base);
    tc.seed = base.seed + i;
    runs.push_back(tc);
  }

  std::vector<double> finals(runs.size(), 0.0);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  char name[32];
  const auto dir = [&](std::size_t i) {
    std::snprintf(name, sizeof(name), "run-%03zu", i);
    return o.run.out / name;
  };
  std::vector<fs::path> dirs;
  for (std::size_t i = 0; i < runs.size(); ++i) dirs.push_back(dir(i));

  const auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        finals[i] = run_classifier(runs[i], dirs[i], false).final_smoothed_accuracy;
        std::fprintf(stderr, "%s: %.4f\n", dirs[i].string().c_str(), finals[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, runs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  auto os = io::open_output(o.run.out / "sweep.csv");
  io::write_csv_preamble(os, "sweep",
                         {"run", "seed", "memory", "batch", "truncation", "learning_rate",
                          "epsilon", "pools", "pool_width", "viewport", "hidden", "base",
                          "lstm_width", "final_smoothed_accuracy"});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& tc = runs[i];
    const auto& n = tc.network;
    const bool lstm = n.memory == memory::MemoryKind::kLstm;
    // Fields that do not apply to the architecture stay blank.
    const auto pool_field = [&](const std::string& v) { return lstm ? std::string() : v; };
    os << i << ',' << tc.seed << ',' << memory::memory_kind_name(n.memory) << ','
       << tc.batch << ',' << tc.truncation << ',' << io::format_double(tc.adam.learning_rate)
       << ',' << io::format_double(tc.adam.epsilon) << ','
       << pool_field(std::to_string(n.pools)) << ','
       << pool_field(std::to_string(n.pool_width)) << ','
       << pool_field(std::to_string(n.viewport)) << ',' << n.hidden << ','
       << pool_field(io::format_double(n.base)) << ','
       << (lstm ? std::to_string(n.lstm_width) : std::string()) << ','
       << io::format_double(finals[i]) << '\n';
  }

  // Reported like the population plots: mean of the best three runs.
  std::vector<double> sorted = finals;
  std::sort(sorted.rbegin(), sorted.rend());
  const std::size_t top = std::min<std::size_t>(3, sorted.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < top; ++i) mean += sorted[i];
  if (top > 0) mean /= static_cast<double>(top);
  std::printf("%zu runs, top-%zu mean final smoothed accuracy %.4f\n", runs.size(), top,
              mean);
  return 0;
}

int cmd_fixtures(const FixtureOptions& o) {
  const fs::path seq_dir = o.out / "sequences";
  const tasks::TaskSpec specs[] = {tasks::TaskSpec::two_marker(),
                                   tasks::TaskSpec::three_marker(),
                                   tasks::TaskSpec::subsequence()};
  for (const auto& spec : specs) {
    std::optional<tasks::SubsequenceLexicon> lexicon;
    if (spec.variant == tasks::TaskVariant::kSubsequence) {
      Rng rng(derive_seed(o.seed, SeedStream::kLexicon));
      lexicon = tasks::make_lexicon(rng, spec.subsequence_length,
                                    spec.subsequences_per_marker);
    }
    tasks::SequenceSampler sampler(spec, derive_seed(o.seed, SeedStream::kLane), lexicon);
    std::vector<tasks::SymbolSequence> seqs;
    for (std::size_t i = 0; i < o.sequences; ++i) seqs.push_back(sampler.next());
    auto os = io::open_output(seq_dir / (std::string(tasks::variant_name(spec.variant)) + ".txt"));
    tasks::write_dataset(os, seqs);
  }

  for (auto task : {grid::Task::kCuedCatch, grid::Task::kTMaze, grid::Task::kSequenceRecall}) {
    const auto cfg = grid::EnvConfig::for_task(task);
    const std::uint64_t episode_seed = derive_seed(o.seed, SeedStream::kEpisode);
    grid::EnvState state = grid::env_new(cfg, episode_seed);
    const grid::EnvState initial = state;
    std::vector<grid::EpisodeStep> steps;
    while (!state.done) {
      const auto action = grid::oracle_action(state);
      const auto r = grid::env_step(state, action);
      steps.push_back({action, r.reward, r.done});
    }
    auto os = io::open_output(o.out / "episodes" /
                              (std::string(grid::task_name(task)) + "-oracle.csv"));
    grid::write_episode_csv(os, initial, steps);
  }

  for (auto kind : {memory::MemoryKind::kChain, memory::MemoryKind::kParallel}) {
    const auto response = analysis::impulse_response(kind, 2.0, 4, 64);
    auto os = io::open_output(o.out / "impulse" /
                              (std::string(memory::memory_kind_name(kind)) + "-b2-k4.csv"));
    analysis::write_impulse_csv(os, response);
  }

  for (auto conv : {analysis::Convention::kCanonical, analysis::Convention::kSingleMatrix}) {
    const auto op = analysis::diffusion_matrices(2.0, 2, conv);
    const std::string stem = std::string(analysis::convention_name(conv)) + "-b2-k2";
    auto os = io::open_output(o.out / "operator" / (stem + "-diffusion.csv"));
    io::write_matrix_csv(os, "diffusion", op.m);
    auto js = io::open_output(o.out / "operator" / (stem + "-batch-operator.csv"));
    io::write_matrix_csv(js, "batch-operator", analysis::batch_operator(op, 4).j);
  }

  const auto pc = memory::PoolChainConfig::regular(2.0, 8, 26);
  {
    auto os = io::open_output(o.out / "trace" / "difference.pgm");
    io::write_pgm(os, analysis::difference_trace("machinelearning", "itsmycatmittens", pc, 16));
  }
  std::printf("fixtures written to %s\n", o.out.string().c_str());
  return 0;
}

}  // namespace lowpass::cli
