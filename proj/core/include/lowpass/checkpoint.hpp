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

#include <filesystem>
#include <iosfwd>

#include "lowpass/graph.hpp"

namespace lowpass::io {

// Plain-text parameter checkpoint:
//
//   lowpass-checkpoint v1
//   count <n>
//   param <name> <rank> <dim>...
//   <values, %.17g, space separated, one line>
//   ...
//
// Values round-trip exactly. Loading requires every stored name to exist in
// the target set with the same shape; parameters absent from the file are
// an error too.
void save_checkpoint(std::ostream& os, const ad::ParameterSet& params);
void save_checkpoint(const std::filesystem::path& path, const ad::ParameterSet& params);
void load_checkpoint(std::istream& is, ad::ParameterSet& params);
void load_checkpoint(const std::filesystem::path& path, ad::ParameterSet& params);

}  // namespace lowpass::io
