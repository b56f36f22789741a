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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lowpass/rng.hpp"

namespace lowpass::tasks {

// Alphabet, one-hot width 8.
inline constexpr std::uint8_t kStart = 0;
inline constexpr std::uint8_t kEnd = 1;
inline constexpr std::uint8_t kFirstDistractor = 2;  // a, b, c, d = 2..5
inline constexpr std::uint8_t kDistractorCount = 4;
inline constexpr std::uint8_t kMarkerX = 6;
inline constexpr std::uint8_t kMarkerY = 7;
inline constexpr std::size_t kAlphabetSize = 8;

// "BEabcdXY"
char symbol_char(std::uint8_t id);
std::uint8_t parse_symbol(char c);

enum class TaskVariant { kTwoMarker, kThreeMarker, kSubsequence };

const char* variant_name(TaskVariant v);
TaskVariant parse_variant(std::string_view name);

// Inclusive 0-based position range in the base sequence.
struct Region {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

struct TaskSpec {
  TaskVariant variant = TaskVariant::kTwoMarker;
  // Base length, before subsequence expansion.
  std::size_t min_length = 100;
  std::size_t max_length = 110;
  std::vector<Region> regions;
  // Subsequence variant only.
  std::size_t subsequence_length = 5;
  std::size_t subsequences_per_marker = 5;
  std::size_t boundary_repeats = 5;

  static TaskSpec two_marker();
  static TaskSpec three_marker();
  static TaskSpec subsequence();

  std::size_t marker_count() const { return regions.size(); }
  std::size_t class_count() const { return std::size_t{1} << regions.size(); }
  // Length bounds of generated sequences after any expansion.
  std::size_t min_total_length() const;
  std::size_t max_total_length() const;
  void validate() const;
};

struct SymbolSequence {
  std::vector<std::uint8_t> symbols;
  std::int64_t label = 0;
  std::vector<std::uint8_t> loss_mask;  // 1 only at the final symbol
  // Where each significant marker (or its subsequence) begins, and its value
  // (0 = X, 1 = Y).
  std::vector<std::size_t> marker_positions;
  std::vector<int> marker_values;

  std::size_t size() const { return symbols.size(); }
};

// Five subsequences per marker value, all ten distinct, drawn over the
// distractor symbols.
struct SubsequenceLexicon {
  std::array<std::vector<std::vector<std::uint8_t>>, 2> by_marker;
};

SubsequenceLexicon make_lexicon(Rng& rng, std::size_t length = 5,
                                std::size_t per_marker = 5);

// Label: first marker is the most significant bit, X = 0, Y = 1.
SymbolSequence generate(const TaskSpec& spec, Rng& rng,
                        const SubsequenceLexicon* lexicon = nullptr);

// Draws sequences for one lane.
class SequenceSampler {
 public:
  SequenceSampler(TaskSpec spec, std::uint64_t seed,
                  std::optional<SubsequenceLexicon> lexicon = std::nullopt);

  SymbolSequence next();
  const TaskSpec& spec() const { return spec_; }

 private:
  TaskSpec spec_;
  Rng rng_;
  std::optional<SubsequenceLexicon> lexicon_;
};

// batch x length block, lane-major.
struct StreamChunk {
  std::size_t batch = 0;
  std::size_t length = 0;
  std::vector<std::uint8_t> symbols;
  std::vector<std::int64_t> labels;  // -1 where the mask is off
  std::vector<std::uint8_t> loss_mask;
  // Index of the sequence each symbol belongs to, counted per lane.
  std::vector<std::uint64_t> sequence_ids;

  std::size_t at(std::size_t lane, std::size_t t) const { return lane * length + t; }
  std::size_t labelled() const;
};

// B independent samplers concatenated back to back, cut into chunks of L.
// Boundaries are never signalled; carrying and truncating state is the
// trainer's job.
class SequenceStream {
 public:
  SequenceStream(const TaskSpec& spec, std::size_t batch, std::size_t chunk_length,
                 std::uint64_t seed);
  SequenceStream(std::vector<SequenceSampler> samplers, std::size_t chunk_length);

  StreamChunk next();

  std::size_t batch() const { return lanes_.size(); }
  std::size_t chunk_length() const { return chunk_length_; }
  std::uint64_t symbols_delivered() const { return delivered_; }

 private:
  struct Lane {
    SequenceSampler sampler;
    SymbolSequence current;
    std::size_t cursor = 0;
    std::uint64_t sequence_id = 0;
  };

  std::vector<Lane> lanes_;
  std::size_t chunk_length_;
  std::uint64_t delivered_ = 0;
};

// One sequence per line: symbol characters, a space, the label.
void write_dataset(std::ostream& os, const std::vector<SymbolSequence>& sequences);
std::string format_sequence(const SymbolSequence& seq);

}  // namespace lowpass::tasks
