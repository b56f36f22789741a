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

#include "lowpass/filter_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "lowpass/error.hpp"
#include "lowpass/io.hpp"

namespace lowpass::analysis {

namespace {

// Scalar filter state advanced one lag at a time.
class ScalarPools {
 public:
  ScalarPools(MemoryKind kind, double base, std::size_t pools)
      : kind_(kind), coeffs_(memory::smoothing_coefficients(base, pools)),
        state_(pools, 0.0) {
    if (kind == MemoryKind::kLstm) {
      throw ConfigError("impulse responses are defined for pool memories only");
    }
  }

  const std::vector<double>& step(double input) {
    double upstream = input;
    for (std::size_t n = 0; n < state_.size(); ++n) {
      const double a = coeffs_[n];
      state_[n] = a * upstream + (1.0 - a) * state_[n];
      if (kind_ == MemoryKind::kChain) upstream = state_[n];
    }
    return state_;
  }

 private:
  MemoryKind kind_;
  std::vector<double> coeffs_;
  std::vector<double> state_;
};

void check_horizon(std::size_t horizon) {
  if (horizon < 1) throw ConfigError("impulse horizon must be at least 1");
}

}  // namespace

std::vector<std::vector<double>> ImpulseResponse::normalized_curves() const {
  auto out = curves;
  for (auto& curve : out) {
    const double peak = curve.empty() ? 0.0 : *std::max_element(curve.begin(), curve.end());
    if (peak > 0.0) {
      for (double& v : curve) v /= peak;
    }
  }
  return out;
}

ImpulseResponse impulse_response(MemoryKind kind, double base, std::size_t pools,
                                 std::size_t horizon) {
  check_horizon(horizon);
  ScalarPools filter(kind, base, pools);
  ImpulseResponse response;
  response.kind = kind;
  response.base = base;
  response.horizon = horizon;
  response.curves.assign(pools, std::vector<double>(horizon));
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& state = filter.step(t == 0 ? 1.0 : 0.0);
    for (std::size_t n = 0; n < pools; ++n) response.curves[n][t] = state[n];
  }
  return response;
}

std::vector<std::size_t> peak_lags(const ImpulseResponse& response) {
  std::vector<std::size_t> lags;
  lags.reserve(response.pools());
  for (const auto& curve : response.curves) {
    // max_element returns the first maximum, which is the smaller lag.
    lags.push_back(curve.empty() ? 0
                                 : static_cast<std::size_t>(
                                       std::max_element(curve.begin(), curve.end()) -
                                       curve.begin()) + 1);
  }
  return lags;
}

std::vector<std::size_t> find_peak_lags(MemoryKind kind, double base,
                                        std::size_t pools, std::size_t horizon) {
  check_horizon(horizon);
  ScalarPools filter(kind, base, pools);
  std::vector<double> best(pools, -1.0);
  std::vector<std::size_t> lags(pools, 0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& state = filter.step(t == 1 ? 1.0 : 0.0);
    for (std::size_t n = 0; n < pools; ++n) {
      if (state[n] > best[n]) {
        best[n] = state[n];
        lags[n] = t;
      }
    }
  }
  return lags;
}

std::vector<double> response_sums(MemoryKind kind, double base, std::size_t pools,
                                  std::size_t horizon) {
  check_horizon(horizon);
  ScalarPools filter(kind, base, pools);
  std::vector<double> sums(pools, 0.0);
  std::vector<double> carry(pools, 0.0);  // Kahan compensation
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& state = filter.step(t == 1 ? 1.0 : 0.0);
    for (std::size_t n = 0; n < pools; ++n) {
      const double y = state[n] - carry[n];
      const double s = sums[n] + y;
      carry[n] = (s - sums[n]) - y;
      sums[n] = s;
    }
  }
  return sums;
}

void write_impulse_csv(std::ostream& os, const ImpulseResponse& response) {
  io::write_csv_preamble(os, "impulse", {"pool", "lag", "value", "normalized_value"});
  const auto normalized = response.normalized_curves();
  for (std::size_t n = 0; n < response.pools(); ++n) {
    for (std::size_t t = 0; t < response.horizon; ++t) {
      os << n + 1 << ',' << t + 1 << ',' << io::format_double(response.curves[n][t])
         << ',' << io::format_double(normalized[n][t]) << '\n';
    }
  }
}

const char* convention_name(Convention c) {
  return c == Convention::kSingleMatrix ? "single-matrix" : "canonical";
}

Convention parse_convention(std::string_view name) {
  if (name == "canonical") return Convention::kCanonical;
  if (name == "single-matrix") return Convention::kSingleMatrix;
  throw ConfigError("unknown operator convention: " + std::string(name));
}

DiffusionOperator diffusion_matrices(double base, std::size_t k,
                                     Convention convention) {
  const auto a = memory::smoothing_coefficients(base, k);
  DiffusionOperator op;
  op.base = base;
  op.size = k;
  op.convention = convention;
  op.m = Tensor::zeros(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    double entry = 1.0 - a[i];
    op.m(i, i) = entry;
    for (std::size_t j = i + 1; j < k; ++j) {
      entry *= a[j];
      op.m(i, j) = entry;
    }
  }
  op.a = Tensor::zeros(1, k);
  if (convention == Convention::kSingleMatrix) {
    for (std::size_t j = 0; j < k; ++j) op.a(0, j) = op.m(0, j);
  } else {
    double product = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      product *= a[j];
      op.a(0, j) = product;
    }
  }
  return op;
}

BatchOperator batch_operator(const DiffusionOperator& op, std::size_t steps) {
  const std::size_t k = op.size;
  BatchOperator out;
  out.steps = steps;
  out.j = Tensor::zeros(steps, k);
  std::vector<double> row(op.a.values().begin(), op.a.values().end());
  std::vector<double> next(k);
  for (std::size_t r = 0; r < steps; ++r) {
    for (std::size_t c = 0; c < k; ++c) out.j(r, c) = row[c];
    // row <- row M, exploiting the upper-triangular structure
    for (std::size_t c = 0; c < k; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i <= c; ++i) acc += row[i] * op.m(i, c);
      next[c] = acc;
    }
    row.swap(next);
  }
  return out;
}

BatchResult batch_apply(const DiffusionOperator& op, std::span<const double> sequence,
                        std::size_t steps) {
  if (sequence.size() != steps) {
    throw ShapeError("batch_apply: sequence has " + std::to_string(sequence.size()) +
                     " entries, expected " + std::to_string(steps));
  }
  BatchResult result;
  result.op = batch_operator(op, steps);
  result.pools = Tensor::zeros(1, op.size);
  for (std::size_t r = 0; r < steps; ++r) {
    const double z = sequence[steps - 1 - r];
    for (std::size_t c = 0; c < op.size; ++c) result.pools(0, c) += z * result.op.j(r, c);
  }
  return result;
}

Tensor operator_recurrence(const DiffusionOperator& op,
                           std::span<const double> sequence) {
  const std::size_t k = op.size;
  Tensor y = Tensor::zeros(1, k);
  Tensor next = Tensor::zeros(1, k);
  for (double x : sequence) {
    for (std::size_t c = 0; c < k; ++c) {
      double acc = x * op.a(0, c);
      for (std::size_t i = 0; i <= c; ++i) acc += y(0, i) * op.m(i, c);
      next(0, c) = acc;
    }
    std::swap(y, next);
  }
  return y;
}

Tensor memory_trace(std::span<const std::size_t> symbols,
                    const memory::PoolChainConfig& config, std::size_t tail) {
  config.validate();
  const std::size_t width = config.width;
  const std::size_t rows = symbols.size() + tail;
  Tensor trace = Tensor::zeros(rows, config.pools * width);
  memory::PoolChainState state = memory::zero_pool_state(config, 1);
  Tensor input = Tensor::zeros(1, width);
  for (std::size_t t = 0; t < rows; ++t) {
    input.fill(0.0);
    if (t < symbols.size()) {
      if (symbols[t] >= width) {
        throw ConfigError("symbol " + std::to_string(symbols[t]) +
                          " cannot be one-hot encoded in width " +
                          std::to_string(width));
      }
      input[symbols[t]] = 1.0;
    }
    memory::pool_chain_step(state, input, config);
    for (std::size_t n = 0; n < config.pools; ++n) {
      for (std::size_t d = 0; d < width; ++d) trace(t, n * width + d) = state.pools[n][d];
    }
  }
  return trace;
}

std::vector<std::size_t> encode_letters(std::string_view text) {
  std::vector<std::size_t> ids;
  ids.reserve(text.size());
  for (char ch : text) {
    if (ch < 'a' || ch > 'z') {
      throw ConfigError(std::string("cannot encode character '") + ch +
                        "'; traces take lowercase a-z");
    }
    ids.push_back(static_cast<std::size_t>(ch - 'a'));
  }
  return ids;
}

Tensor memory_trace(std::string_view text, const memory::PoolChainConfig& config,
                    std::size_t tail) {
  if (config.width < 26) throw ConfigError("letter traces need pool width >= 26");
  const auto ids = encode_letters(text);
  return memory_trace(ids, config, tail);
}

Tensor difference_trace(std::string_view a, std::string_view b,
                        const memory::PoolChainConfig& config, std::size_t tail) {
  if (a.size() != b.size()) {
    throw ShapeError("difference traces need equal-length inputs");
  }
  Tensor ta = memory_trace(a, config, tail);
  const Tensor tb = memory_trace(b, config, tail);
  for (std::size_t i = 0; i < ta.size(); ++i) ta[i] = std::abs(ta[i] - tb[i]);
  return ta;
}

}  // namespace lowpass::analysis
