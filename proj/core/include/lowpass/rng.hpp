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
#include <random>

namespace lowpass {

// Seed splitting scheme. Every run owns a single 64-bit seed; subsystems
// derive independent subseeds as
//
//   derive_seed(seed, stream, index)
//     = splitmix64(splitmix64(seed ^ (stream * 0x9E3779B97F4A7C15)) + index)
//
// where `stream` names the consumer (below) and `index` is the lane, episode
// or draw number.
enum class SeedStream : std::uint64_t {
  kInit = 1,        // parameter initialisation
  kLane = 2,        // per-lane sequence samplers
  kEpisode = 3,     // per-episode environment seeds (index = lane * 2^32 + n)
  kPolicy = 4,      // action sampling
  kLexicon = 5,     // subsequence lexicon
  kHyper = 6,       // hyperparameter draws
  kProjection = 7,  // fixed inter-pool projections
  kCensus = 8,      // Monte-Carlo baselines
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream,
                          std::uint64_t index = 0);

// Thin wrapper over mt19937_64 with hand-rolled distributions so draws are
// identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lowpass
