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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lowpass::cli {

// Options shared by every run-producing command.
struct RunOptions {
  std::optional<std::filesystem::path> config_file;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "runs/latest";
  std::vector<std::string> overrides;
};

int cmd_train_seq(const RunOptions& options);
int cmd_train_rl(const RunOptions& options);

struct ImpulseOptions {
  std::string memory = "chain";
  double base = 2.0;
  std::size_t pools = 12;
  std::size_t horizon = 16384;
};
int cmd_analyze_impulse(const ImpulseOptions& options, const std::filesystem::path& out);

struct OperatorOptions {
  double base = 2.0;
  std::size_t pools = 2;
  std::size_t steps = 8;
  std::string convention = "canonical";
};
int cmd_analyze_operator(const OperatorOptions& options, const std::filesystem::path& out);

struct TraceOptions {
  std::string text = "machinelearning";
  std::string compare;  // empty: single trace, else difference
  double base = 2.0;
  std::size_t pools = 8;
  std::size_t width = 26;
  std::size_t tail = 0;
};
int cmd_analyze_trace(const TraceOptions& options, const std::filesystem::path& out);

struct SweepOptions {
  RunOptions run;
  std::string memory = "chain";
  std::size_t draws = 8;
  std::size_t jobs = 1;
};
int cmd_sweep(const SweepOptions& options);

struct FixtureOptions {
  std::filesystem::path out = "fixtures";
  std::uint64_t seed = 0;
  std::size_t sequences = 16;
};
int cmd_fixtures(const FixtureOptions& options);

}  // namespace lowpass::cli
