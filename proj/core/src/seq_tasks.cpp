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

#include "lowpass/seq_tasks.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <utility>

#include "lowpass/error.hpp"

namespace lowpass::tasks {

namespace {
constexpr std::string_view kAlphabet = "BEabcdXY";
}

char symbol_char(std::uint8_t id) {
  if (id >= kAlphabetSize) throw ConfigError("symbol id out of range");
  return kAlphabet[id];
}

std::uint8_t parse_symbol(char c) {
  const auto pos = kAlphabet.find(c);
  if (pos == std::string_view::npos) {
    throw ConfigError(std::string("unknown symbol character '") + c + "'");
  }
  return static_cast<std::uint8_t>(pos);
}

const char* variant_name(TaskVariant v) {
  switch (v) {
    case TaskVariant::kTwoMarker: return "two-marker";
    case TaskVariant::kThreeMarker: return "three-marker";
    case TaskVariant::kSubsequence: return "subsequence";
  }
  return "unknown";
}

TaskVariant parse_variant(std::string_view name) {
  if (name == "two-marker" || name == "2") return TaskVariant::kTwoMarker;
  if (name == "three-marker" || name == "3") return TaskVariant::kThreeMarker;
  if (name == "subsequence") return TaskVariant::kSubsequence;
  throw ConfigError("unknown task variant: " + std::string(name));
}

TaskSpec TaskSpec::two_marker() {
  TaskSpec spec;
  spec.variant = TaskVariant::kTwoMarker;
  spec.regions = {{10, 20}, {50, 60}};
  return spec;
}

TaskSpec TaskSpec::three_marker() {
  TaskSpec spec;
  spec.variant = TaskVariant::kThreeMarker;
  spec.regions = {{10, 20}, {33, 43}, {66, 76}};
  return spec;
}

TaskSpec TaskSpec::subsequence() {
  TaskSpec spec = two_marker();
  spec.variant = TaskVariant::kSubsequence;
  return spec;
}

std::size_t TaskSpec::min_total_length() const {
  if (variant != TaskVariant::kSubsequence) return min_length;
  return min_length + 2 * (boundary_repeats - 1) +
         marker_count() * (subsequence_length - 1);
}

std::size_t TaskSpec::max_total_length() const {
  if (variant != TaskVariant::kSubsequence) return max_length;
  return max_length + 2 * (boundary_repeats - 1) +
         marker_count() * (subsequence_length - 1);
}

void TaskSpec::validate() const {
  if (min_length < 3 || max_length < min_length) {
    throw ConfigError("task length range must satisfy 3 <= min <= max");
  }
  if (regions.empty()) throw ConfigError("task needs at least one marker region");
  if (regions.size() > 16) throw ConfigError("too many marker regions");
  std::size_t previous_hi = 0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Region& r = regions[i];
    if (r.lo < 1 || r.hi < r.lo || r.hi + 1 >= min_length) {
      throw ConfigError("marker region " + std::to_string(i) +
                        " must lie strictly inside the shortest sequence");
    }
    if (i > 0 && r.lo <= previous_hi) {
      throw ConfigError("marker regions must be ordered and disjoint");
    }
    previous_hi = r.hi;
  }
  if (variant == TaskVariant::kSubsequence) {
    if (subsequence_length < 1 || boundary_repeats < 1 || subsequences_per_marker < 1) {
      throw ConfigError("subsequence lengths and counts must be positive");
    }
    // Distinct subsequences must exist.
    double available = 1.0;
    for (std::size_t i = 0; i < subsequence_length && available < 1e6; ++i) {
      available *= kDistractorCount;
    }
    if (available < 2.0 * static_cast<double>(subsequences_per_marker)) {
      throw ConfigError("subsequence length too short for distinct subsequences");
    }
  }
}

SubsequenceLexicon make_lexicon(Rng& rng, std::size_t length, std::size_t per_marker) {
  double available = 1.0;
  for (std::size_t i = 0; i < length && available < 1e6; ++i) available *= kDistractorCount;
  if (length < 1 || available < 2.0 * static_cast<double>(per_marker)) {
    throw ConfigError("cannot draw distinct subsequences of this length");
  }
  SubsequenceLexicon lexicon;
  std::set<std::vector<std::uint8_t>> seen;
  for (auto& slot : lexicon.by_marker) {
    while (slot.size() < per_marker) {
      std::vector<std::uint8_t> sub(length);
      for (auto& s : sub) {
        s = static_cast<std::uint8_t>(kFirstDistractor + rng.index(kDistractorCount));
      }
      if (seen.insert(sub).second) slot.push_back(std::move(sub));
    }
  }
  return lexicon;
}

SymbolSequence generate(const TaskSpec& spec, Rng& rng,
                        const SubsequenceLexicon* lexicon) {
  const bool expand = spec.variant == TaskVariant::kSubsequence;
  if (expand && lexicon == nullptr) {
    throw ConfigError("the subsequence variant needs a lexicon");
  }
  const auto length = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(spec.min_length),
      static_cast<std::int64_t>(spec.max_length)));
  std::vector<std::uint8_t> base(length);
  for (auto& s : base) {
    s = static_cast<std::uint8_t>(kFirstDistractor + rng.index(kDistractorCount));
  }
  base.front() = kStart;
  base.back() = kEnd;

  SymbolSequence seq;
  std::vector<std::size_t> base_positions;
  for (const Region& r : spec.regions) {
    const auto pos = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(r.lo), static_cast<std::int64_t>(r.hi)));
    const int value = rng.bernoulli(0.5) ? 1 : 0;
    base[pos] = value ? kMarkerY : kMarkerX;
    base_positions.push_back(pos);
    seq.marker_values.push_back(value);
    seq.label = 2 * seq.label + value;
  }

  if (!expand) {
    seq.symbols = std::move(base);
    seq.marker_positions = std::move(base_positions);
  } else {
    std::size_t next_marker = 0;
    for (std::size_t t = 0; t < length; ++t) {
      if (t == 0 || t + 1 == length) {
        seq.symbols.insert(seq.symbols.end(), spec.boundary_repeats, base[t]);
      } else if (next_marker < base_positions.size() &&
                 base_positions[next_marker] == t) {
        const auto& choices =
            lexicon->by_marker[static_cast<std::size_t>(seq.marker_values[next_marker])];
        const auto& sub = choices[rng.index(choices.size())];
        seq.marker_positions.push_back(seq.symbols.size());
        seq.symbols.insert(seq.symbols.end(), sub.begin(), sub.end());
        ++next_marker;
      } else {
        seq.symbols.push_back(base[t]);
      }
    }
  }
  seq.loss_mask.assign(seq.symbols.size(), 0);
  seq.loss_mask.back() = 1;
  return seq;
}

SequenceSampler::SequenceSampler(TaskSpec spec, std::uint64_t seed,
                                 std::optional<SubsequenceLexicon> lexicon)
    : spec_(std::move(spec)), rng_(seed), lexicon_(std::move(lexicon)) {
  spec_.validate();
  if (spec_.variant == TaskVariant::kSubsequence && !lexicon_) {
    throw ConfigError("the subsequence variant needs a lexicon");
  }
}

SymbolSequence SequenceSampler::next() {
  return generate(spec_, rng_, lexicon_ ? &*lexicon_ : nullptr);
}

std::size_t StreamChunk::labelled() const {
  return static_cast<std::size_t>(std::count(loss_mask.begin(), loss_mask.end(), 1));
}

namespace {

std::vector<SequenceSampler> lane_samplers(const TaskSpec& spec, std::size_t batch,
                                           std::uint64_t seed) {
  std::optional<SubsequenceLexicon> lexicon;
  if (spec.variant == TaskVariant::kSubsequence) {
    // One lexicon per experiment, shared by every lane.
    Rng rng(derive_seed(seed, SeedStream::kLexicon));
    lexicon = make_lexicon(rng, spec.subsequence_length, spec.subsequences_per_marker);
  }
  std::vector<SequenceSampler> samplers;
  samplers.reserve(batch);
  for (std::size_t lane = 0; lane < batch; ++lane) {
    samplers.emplace_back(spec, derive_seed(seed, SeedStream::kLane, lane), lexicon);
  }
  return samplers;
}

}  // namespace

SequenceStream::SequenceStream(const TaskSpec& spec, std::size_t batch,
                               std::size_t chunk_length, std::uint64_t seed)
    : SequenceStream(lane_samplers(spec, batch, seed), chunk_length) {}

SequenceStream::SequenceStream(std::vector<SequenceSampler> samplers,
                               std::size_t chunk_length)
    : chunk_length_(chunk_length) {
  if (samplers.empty()) throw ConfigError("stream needs at least one lane");
  if (chunk_length < 1) throw ConfigError("chunk length must be at least 1");
  lanes_.reserve(samplers.size());
  for (auto& s : samplers) {
    Lane lane{std::move(s), {}, 0, 0};
    lane.current = lane.sampler.next();
    lanes_.push_back(std::move(lane));
  }
}

StreamChunk SequenceStream::next() {
  StreamChunk chunk;
  chunk.batch = lanes_.size();
  chunk.length = chunk_length_;
  const std::size_t n = chunk.batch * chunk.length;
  chunk.symbols.resize(n);
  chunk.labels.resize(n);
  chunk.loss_mask.resize(n);
  chunk.sequence_ids.resize(n);
  for (std::size_t b = 0; b < lanes_.size(); ++b) {
    Lane& lane = lanes_[b];
    for (std::size_t t = 0; t < chunk_length_; ++t) {
      if (lane.cursor == lane.current.size()) {
        lane.current = lane.sampler.next();
        lane.cursor = 0;
        ++lane.sequence_id;
      }
      const std::size_t i = chunk.at(b, t);
      const bool masked = lane.current.loss_mask[lane.cursor] != 0;
      chunk.symbols[i] = lane.current.symbols[lane.cursor];
      chunk.loss_mask[i] = masked ? 1 : 0;
      chunk.labels[i] = masked ? lane.current.label : -1;
      chunk.sequence_ids[i] = lane.sequence_id;
      ++lane.cursor;
    }
  }
  delivered_ += n;
  return chunk;
}

std::string format_sequence(const SymbolSequence& seq) {
  std::string line;
  line.reserve(seq.size() + 4);
  for (auto s : seq.symbols) line.push_back(symbol_char(s));
  line.push_back(' ');
  line += std::to_string(seq.label);
  return line;
}

void write_dataset(std::ostream& os, const std::vector<SymbolSequence>& sequences) {
  for (const auto& seq : sequences) os << format_sequence(seq) << '\n';
}

}  // namespace lowpass::tasks
