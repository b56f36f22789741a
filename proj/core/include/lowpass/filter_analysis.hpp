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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "lowpass/memory.hpp"
#include "lowpass/tensor.hpp"

namespace lowpass::analysis {

using memory::MemoryKind;

// Scalar-pool responses to a unit input at lag 1 followed by zeros.
struct ImpulseResponse {
  MemoryKind kind = MemoryKind::kChain;
  double base = 2.0;
  std::size_t horizon = 0;
  // curves[n][t - 1] is pool n + 1 at lag t, unnormalized.
  std::vector<std::vector<double>> curves;

  std::size_t pools() const { return curves.size(); }
  // Each curve divided by its own maximum.
  std::vector<std::vector<double>> normalized_curves() const;
};

// Throws ConfigError for horizon < 1, a bad base, or an LSTM kind.
ImpulseResponse impulse_response(MemoryKind kind, double base, std::size_t pools,
                                 std::size_t horizon);

// 1-based argmax lag per pool; ties go to the smaller lag.
std::vector<std::size_t> peak_lags(const ImpulseResponse& response);

// Same as peak_lags(impulse_response(...)) without storing the curves, for
// horizons in the millions.
std::vector<std::size_t> find_peak_lags(MemoryKind kind, double base,
                                        std::size_t pools, std::size_t horizon);

// Partial sums of each unnormalized curve over lags 1..horizon.
std::vector<double> response_sums(MemoryKind kind, double base, std::size_t pools,
                                  std::size_t horizon);

// Columns: pool, lag, value, normalized_value.
void write_impulse_csv(std::ostream& os, const ImpulseResponse& response);

// ---- linear-operator form ---------------------------------------------------

// kCanonical injects a_1 x_t into pool 1, matching pool_chain_step. kSingleMatrix
// is the single-matrix form Y_t = (X_t + Y_{t-1}) M, which injects (1 - a_1) x_t.
enum class Convention { kCanonical, kSingleMatrix };

const char* convention_name(Convention c);
Convention parse_convention(std::string_view name);

// Y_t = x_t A + Y_{t-1} M with M upper-triangular (k x k) and A (1 x k).
struct DiffusionOperator {
  Tensor m;
  Tensor a;
  Convention convention = Convention::kCanonical;
  double base = 2.0;
  std::size_t size = 0;
};

DiffusionOperator diffusion_matrices(double base, std::size_t k,
                                     Convention convention = Convention::kCanonical);

// Row r (0-based) of J is A M^r.
struct BatchOperator {
  Tensor j;
  std::size_t steps = 0;
};

BatchOperator batch_operator(const DiffusionOperator& op, std::size_t steps);

struct BatchResult {
  Tensor pools;  // 1 x k, Y_T
  BatchOperator op;
};

// Y_T = Z J where Z is the sequence reversed. Throws ShapeError unless the
// sequence has exactly `steps` entries.
BatchResult batch_apply(const DiffusionOperator& op, std::span<const double> sequence,
                        std::size_t steps);

// Steps the two-matrix recurrence directly; returns Y_T.
Tensor operator_recurrence(const DiffusionOperator& op,
                           std::span<const double> sequence);

// ---- memory traces ----------------------------------------------------------

// Runs a chain on one-hot symbols (ids < config.width) followed by `tail`
// zero inputs. Row t holds p^(1..k) concatenated, so the result is
// (length + tail) x (k * width).
Tensor memory_trace(std::span<const std::size_t> symbols,
                    const memory::PoolChainConfig& config, std::size_t tail);

// Lowercase a-z text; needs config.width >= 26. Throws ConfigError on any
// other character.
std::vector<std::size_t> encode_letters(std::string_view text);
Tensor memory_trace(std::string_view text, const memory::PoolChainConfig& config,
                    std::size_t tail);

// |trace(a) - trace(b)| elementwise. Inputs must have equal length.
Tensor difference_trace(std::string_view a, std::string_view b,
                        const memory::PoolChainConfig& config, std::size_t tail);

}  // namespace lowpass::analysis
