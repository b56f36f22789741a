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

#include "lowpass/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowpass/error.hpp"

namespace lowpass::ad {

GradCheckReport gradient_check(Graph& graph, Var loss, std::span<const Var> leaves,
                               double h) {
  if (!(h > 0.0)) throw ConfigError("gradient_check: perturbation must be > 0");
  if (graph.stale()) graph.forward();
  graph.backward(loss);

  double worst_abs = 0.0;
  double largest = 0.0;
  std::size_t checked = 0;
  for (const Var& leaf : leaves) {
    const Tensor analytic = graph.grad(leaf);
    const Tensor original = graph.value(leaf);
    Tensor probe = original;
    for (std::size_t i = 0; i < original.size(); ++i) {
      probe[i] = original[i] + h;
      graph.bind(leaf, probe);
      graph.forward();
      const double up = graph.value(loss).item();
      probe[i] = original[i] - h;
      graph.bind(leaf, probe);
      graph.forward();
      const double down = graph.value(loss).item();
      probe[i] = original[i];

      const double numeric = (up - down) / (2.0 * h);
      worst_abs = std::max(worst_abs, std::abs(analytic[i] - numeric));
      largest = std::max({largest, std::abs(analytic[i]), std::abs(numeric)});
      ++checked;
    }
    graph.bind(leaf, original);
    graph.forward();
  }

  GradCheckReport report;
  report.max_abs_error = worst_abs;
  report.entries_checked = checked;
  report.max_relative_error =
      largest > 0.0 ? worst_abs / largest
                    : (worst_abs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return report;
}

GradCheckReport gradient_check(const LossBuilder& build,
                               const std::vector<Tensor>& inputs, double h) {
  Graph graph;
  std::vector<Var> leaves;
  leaves.reserve(inputs.size());
  for (const auto& t : inputs) leaves.push_back(graph.input(t, true));
  const Var loss = build(graph, leaves);
  return gradient_check(graph, loss, leaves, h);
}

}  // namespace lowpass::ad
