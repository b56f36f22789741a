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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lowpass/tensor.hpp"

namespace lowpass::ad {

using ParamId = std::size_t;

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Ordered, name-addressable collection of trainable tensors. Ids are stable
// indices, so copying the set copies the model.
class ParameterSet {
 public:
  ParamId add(std::string name, Tensor init);

  Parameter& operator[](ParamId id) { return params_.at(id); }
  const Parameter& operator[](ParamId id) const { return params_.at(id); }
  std::size_t size() const { return params_.size(); }
  // Throws ConfigError when absent.
  ParamId find(const std::string& name) const;
  bool contains(const std::string& name) const;

  std::size_t scalar_count() const;
  void zero_grad();
  double grad_norm() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::vector<Parameter> params_;
};

enum class Op : std::uint8_t {
  kInput,
  kParam,
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kAddBias,
  kScale,
  kAffineScalar,
  kTanh,
  kSigmoid,
  kRelu,
  kConcat,
  kSlice,
  kLerp,
  kStopGradient,
  kSoftmaxXent,
  kSoftmaxEntropy,
  kSumAll,
  kGather,
  kReshape,
};

const char* op_name(Op op);

class Graph;

// Handle to a node of a Graph. Cheap to copy; only valid while its graph is.
class Var {
 public:
  Var() = default;

  Graph& graph() const;
  int id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }
  const Tensor& value() const;
  const Shape& shape() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Graph;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Per-node operation attributes. Unused fields stay default.
struct OpAttr {
  double a = 0.0;
  double b = 0.0;
  std::size_t begin = 0;
  std::size_t end = 0;
  Shape shape;
  std::vector<std::int64_t> labels;
  std::vector<double> weights;
  std::shared_ptr<const std::vector<std::int64_t>> index;
};

// Define-by-run reverse-mode differentiation record.
//
// Operations evaluate eagerly as they are recorded, so values are available
// immediately (the RL trainer samples actions from them). Leaves may later be
// rebound and the whole record replayed with forward(); backward() refuses to
// run on stale values. Node creation order is a topological order.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // A leaf. Inputs bound without requires_grad are constants.
  Var input(Tensor value, bool requires_grad = false);
  Var constant(Tensor value) { return input(std::move(value), false); }
  // A leaf whose gradient is accumulated into params[id].grad by backward().
  Var param(ParameterSet& params, ParamId id);

  void bind(Var leaf, Tensor value);
  // Recomputes every non-leaf node in creation order.
  void forward();
  // Reverse sweep from a scalar loss. Parameter gradients accumulate.
  void backward(Var loss);

  const Tensor& value(Var v) const;
  // Zero tensor for nodes that do not require gradients.
  Tensor grad(Var v) const;
  bool requires_grad(Var v) const;
  bool stale() const { return stale_; }
  std::size_t size() const { return nodes_.size(); }

  using Attr = OpAttr;

  // Low-level entry point used by the free operation functions below.
  Var record(Op op, std::vector<int> parents, Attr attr = {});

 private:
  struct Node {
    Op op;
    std::vector<int> parents;
    Attr attr;
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
  };

  Tensor evaluate(const Node& node) const;
  void propagate(const Node& node);
  const Node& node(Var v) const;

  std::vector<Node> nodes_;
  bool stale_ = false;
};

// ---- operations -----------------------------------------------------------

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
// x (r x c) plus a 1 x c bias broadcast over rows.
Var add_bias(Var x, Var bias);
Var scale(Var x, double factor);
// factor * x + offset, elementwise.
Var affine_scalar(Var x, double factor, double offset);
Var tanh(Var x);
Var sigmoid(Var x);
Var relu(Var x);
// Column-wise concatenation of equal-row operands.
Var concat(std::span<const Var> parts);
// Columns [begin, end).
Var slice(Var x, std::size_t begin, std::size_t end);
// coeff * x + (1 - coeff) * y: the exponential-smoothing pool update.
Var lerp(Var x, Var y, double coeff);
// Passes the value, blocks every gradient.
Var stop_gradient(Var x);
// sum_i weights[i] * (-log softmax(logits_i)[labels[i]]); rows with zero
// weight are ignored (their label may be -1).
Var softmax_cross_entropy(Var logits, std::vector<std::int64_t> labels,
                          std::vector<double> weights);
// sum_i weights[i] * H(softmax(logits_i)).
Var softmax_entropy(Var logits, std::vector<double> weights);
Var sum_all(Var x);
// out.flat[i] = x.flat[index[i]] or 0 where index[i] < 0.
Var gather(Var x, std::shared_ptr<const std::vector<std::int64_t>> index,
           Shape out_shape);
Var reshape(Var x, Shape shape);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }

}  // namespace lowpass::ad
