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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lowpass/training.hpp"

namespace lowpass::config {

// Flat key -> value map. Text form:
//
//   # comment
//   [seq]
//   batch = 16          -> key "seq.batch"
//   net.pools = 8       -> keys may also carry their own prefix
//
// JSON input is flattened with '.' between nested object keys.
class Config {
 public:
  static Config parse_text(std::string_view text);
  static Config parse_json(std::string_view text);
  // JSON when the first non-blank character is '{', text otherwise.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  // "key=value"
  void apply_override(std::string_view assignment);
  void merge(const Config& other);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;

  // Throws ConfigError naming keys that no getter has read.
  void check_all_used() const;

  // Sorted "key = value" lines; parse_text(to_text()) round-trips.
  std::string to_text() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

// Keys under "seq.", "net." and "run.seed".
train::TrainConfig train_config_from(const Config& config);
// Keys under "rl.", "catch.", "tmaze.", "recall." and "run.seed".
train::RlConfig rl_config_from(const Config& config);

// Inverse mappings, used for config echoes.
Config to_config(const train::TrainConfig& config);
Config to_config(const train::RlConfig& config);

}  // namespace lowpass::config
