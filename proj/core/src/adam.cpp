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

#include "lowpass/adam.hpp"

#include <cmath>

#include "lowpass/error.hpp"

namespace lowpass::ad {

AdamState make_adam_state(const ParameterSet& params) {
  AdamState state;
  state.first_moment.reserve(params.size());
  state.second_moment.reserve(params.size());
  for (const auto& p : params) {
    state.first_moment.emplace_back(p.value.shape());
    state.second_moment.emplace_back(p.value.shape());
  }
  return state;
}

void adam_step(ParameterSet& params, AdamState& state, const AdamConfig& config) {
  if (state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state does not match parameter set");
  }
  double grad_scale = 1.0;
  if (config.clip_norm > 0.0) {
    const double norm = params.grad_norm();
    if (norm > config.clip_norm) grad_scale = config.clip_norm / norm;
  }

  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    if (!m.same_shape(p.value) || !v.same_shape(p.value) ||
        !p.grad.same_shape(p.value)) {
      throw ShapeError("adam_step: shape mismatch for parameter " + p.name);
    }
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = grad_scale * p.grad[j];
      m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * g;
      v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p.value[j] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

}  // namespace lowpass::ad
