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
#include <vector>

#include "lowpass/graph.hpp"

namespace lowpass::ad {

struct AdamConfig {
  double learning_rate = 1e-3;
  double epsilon = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
  // Global-norm gradient clipping; 0 disables it.
  double clip_norm = 0.0;
};

struct AdamState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::uint64_t step = 0;
};

// Zero accumulators shaped like `params`.
AdamState make_adam_state(const ParameterSet& params);

// One bias-corrected Adam update from the gradients stored in `params`.
// Gradients are left in place (callers zero them before the next backward).
void adam_step(ParameterSet& params, AdamState& state, const AdamConfig& config);

}  // namespace lowpass::ad
