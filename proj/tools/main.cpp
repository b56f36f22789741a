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

#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "lowpass/error.hpp"

namespace {

// Exit codes: 0 success, 1 configuration or usage error, 2 numeric failure,
// 3 anything else (I/O and the like).
constexpr int kConfigExit = 1;
constexpr int kNumericExit = 2;
constexpr int kOtherExit = 3;

void add_run_flags(CLI::App& cmd, lowpass::cli::RunOptions& run) {
  cmd.add_option("--config", run.config_file, "key=value or JSON config file")
      ->check(CLI::ExistingFile);
  cmd.add_option("--seed", run.seed, "run seed (overrides run.seed)");
  cmd.add_option("--out", run.out, "output directory");
  cmd.add_option("--override", run.overrides, "key=value, repeatable")
      ->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = lowpass::cli;
  CLI::App app{"lowpass: low-pass pool memories, tasks and analyses"};
  app.require_subcommand(1);

  cli::RunOptions seq_run;
  auto* seq = app.add_subcommand("train-seq", "train a sequence classifier");
  add_run_flags(*seq, seq_run);

  cli::RunOptions rl_run;
  auto* rl = app.add_subcommand("train-rl", "train an actor-critic on a gridworld");
  add_run_flags(*rl, rl_run);

  std::filesystem::path analyze_out = "analysis";
  auto* analyze = app.add_subcommand("analyze", "dump filter and operator analyses");
  analyze->require_subcommand(1);
  analyze->add_option("--out", analyze_out, "output directory");

  cli::ImpulseOptions impulse;
  auto* imp = analyze->add_subcommand("impulse", "pool impulse responses");
  imp->add_option("--memory", impulse.memory, "chain or parallel");
  imp->add_option("--base", impulse.base);
  imp->add_option("--pools", impulse.pools);
  imp->add_option("--horizon", impulse.horizon);
  imp->add_option("--out", analyze_out);

  cli::OperatorOptions op;
  auto* opc = analyze->add_subcommand("operator", "diffusion, injection and batch matrices");
  opc->add_option("--base", op.base);
  opc->add_option("--pools", op.pools);
  opc->add_option("--steps", op.steps);
  opc->add_option("--convention", op.convention, "canonical or single-matrix");
  opc->add_option("--out", analyze_out);

  cli::TraceOptions trace;
  auto* tr = analyze->add_subcommand("trace", "memory trace of a letter string");
  tr->add_option("--text", trace.text);
  tr->add_option("--compare", trace.compare, "second string; emits the difference");
  tr->add_option("--base", trace.base);
  tr->add_option("--pools", trace.pools);
  tr->add_option("--width", trace.width);
  tr->add_option("--tail", trace.tail, "zero steps appended after the text");
  tr->add_option("--out", analyze_out);

  cli::SweepOptions sweep;
  auto* sw = app.add_subcommand("sweep", "random hyperparameter sweep of train-seq");
  add_run_flags(*sw, sweep.run);
  sw->add_option("--memory", sweep.memory, "chain, parallel or lstm");
  sw->add_option("--draws", sweep.draws);
  sw->add_option("--jobs", sweep.jobs, "concurrent runs");

  cli::FixtureOptions fixtures;
  auto* fx = app.add_subcommand("fixtures", "write deterministic reference artifacts");
  fx->add_option("--out", fixtures.out);
  fx->add_option("--seed", fixtures.seed);
  fx->add_option("--sequences", fixtures.sequences, "sequences per task variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (seq->parsed()) return cli::cmd_train_seq(seq_run);
    if (rl->parsed()) return cli::cmd_train_rl(rl_run);
    if (imp->parsed()) return cli::cmd_analyze_impulse(impulse, analyze_out);
    if (opc->parsed()) return cli::cmd_analyze_operator(op, analyze_out);
    if (tr->parsed()) return cli::cmd_analyze_trace(trace, analyze_out);
    if (sw->parsed()) return cli::cmd_sweep(sweep);
    if (fx->parsed()) return cli::cmd_fixtures(fixtures);
  } catch (const lowpass::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const lowpass::ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const lowpass::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOtherExit;
  }
  return kConfigExit;
}
