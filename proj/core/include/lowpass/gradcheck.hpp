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

#include <functional>
#include <span>
#include <vector>

#include "lowpass/graph.hpp"

namespace lowpass::ad {

struct GradCheckReport {
  // max |analytic - numeric| / max(max |analytic|, max |numeric|)
  double max_relative_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t entries_checked = 0;
};

// Compares backward() against central differences (f(x+h) - f(x-h)) / 2h for
// every entry of every leaf in `leaves`, replaying the recorded graph for
// each perturbation. Leaves are restored afterwards. Side effect: parameter
// gradients accumulate one backward pass.
GradCheckReport gradient_check(Graph& graph, Var loss, std::span<const Var> leaves,
                               double h);

// Builds a fresh graph with `inputs` as differentiable leaves and checks the
// scalar returned by `build`.
using LossBuilder = std::function<Var(Graph&, std::span<const Var>)>;
GradCheckReport gradient_check(const LossBuilder& build,
                               const std::vector<Tensor>& inputs, double h);

}  // namespace lowpass::ad
