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

#include "lowpass/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "lowpass/error.hpp"
#include "lowpass/io.hpp"

namespace lowpass::io {

namespace {
constexpr const char* kMagic = "lowpass-checkpoint";
constexpr const char* kVersion = "v1";
}  // namespace

void save_checkpoint(std::ostream& os, const ad::ParameterSet& params) {
  os << kMagic << ' ' << kVersion << '\n';
  os << "count " << params.size() << '\n';
  for (const auto& p : params) {
    os << "param " << p.name << ' ' << p.value.shape().size();
    for (std::size_t d : p.value.shape()) os << ' ' << d;
    os << '\n';
    bool first = true;
    for (double v : p.value.values()) {
      if (!first) os << ' ';
      os << format_double(v);
      first = false;
    }
    os << '\n';
  }
  if (!os) throw ConfigError("checkpoint write failed");
}

void save_checkpoint(const std::filesystem::path& path, const ad::ParameterSet& params) {
  auto os = open_output(path);
  save_checkpoint(os, params);
}

void load_checkpoint(std::istream& is, ad::ParameterSet& params) {
  std::string magic, version, word;
  if (!(is >> magic >> version) || magic != kMagic) {
    throw ConfigError("not a lowpass checkpoint");
  }
  if (version != kVersion) throw ConfigError("unsupported checkpoint version " + version);
  std::size_t count = 0;
  if (!(is >> word >> count) || word != "count") throw ConfigError("checkpoint: missing count");

  std::set<std::string> seen;
  for (std::size_t k = 0; k < count; ++k) {
    std::string name;
    std::size_t rank = 0;
    if (!(is >> word >> name >> rank) || word != "param") {
      throw ConfigError("checkpoint: malformed parameter header");
    }
    Shape shape(rank);
    for (auto& d : shape) {
      if (!(is >> d)) throw ConfigError("checkpoint: malformed shape for " + name);
    }
    if (!params.contains(name)) throw ConfigError("checkpoint: unknown parameter " + name);
    auto& target = params[params.find(name)];
    if (target.value.shape() != shape) {
      throw ConfigError("checkpoint: shape mismatch for " + name + ": file " +
                    shape_string(shape) + ", model " + shape_string(target.value.shape()));
    }
    for (double& v : target.value.values()) {
      if (!(is >> v)) throw ConfigError("checkpoint: truncated values for " + name);
    }
    seen.insert(name);
  }
  for (const auto& p : params) {
    if (!seen.count(p.name)) throw ConfigError("checkpoint: missing parameter " + p.name);
  }
}

void load_checkpoint(const std::filesystem::path& path, ad::ParameterSet& params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read checkpoint " + path.string());
  load_checkpoint(in, params);
}

}  // namespace lowpass::io
