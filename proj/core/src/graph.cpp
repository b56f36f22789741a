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

#include "lowpass/graph.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <utility>

#include "lowpass/error.hpp"

namespace lowpass::ad {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

ConstMap as_matrix(const Tensor& t) {
  return ConstMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

MutMap as_matrix(Tensor& t) {
  return MutMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                static_cast<Eigen::Index>(t.cols()));
}

void require_same_size(const Tensor& a, const Tensor& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op_name(op)) + ": operand shapes " +
                     shape_string(a.shape()) + " and " +
                     shape_string(b.shape()) + " differ");
  }
}

double stable_sigmoid(double x) {
  if (x >= 0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

// Row-wise log-sum-exp of a logits matrix.
double row_logsumexp(const double* row, std::size_t n) {
  double peak = row[0];
  for (std::size_t j = 1; j < n; ++j) peak = std::max(peak, row[j]);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) total += std::exp(row[j] - peak);
  return peak + std::log(total);
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::kInput: return "input";
    case Op::kParam: return "param";
    case Op::kMatMul: return "matmul";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kAddBias: return "add_bias";
    case Op::kScale: return "scale";
    case Op::kAffineScalar: return "affine_scalar";
    case Op::kTanh: return "tanh";
    case Op::kSigmoid: return "sigmoid";
    case Op::kRelu: return "relu";
    case Op::kConcat: return "concat";
    case Op::kSlice: return "slice";
    case Op::kLerp: return "lerp";
    case Op::kStopGradient: return "stop_gradient";
    case Op::kSoftmaxXent: return "softmax_cross_entropy";
    case Op::kSoftmaxEntropy: return "softmax_entropy";
    case Op::kSumAll: return "sum_all";
    case Op::kGather: return "gather";
    case Op::kReshape: return "reshape";
  }
  return "unknown";
}

// ---- ParameterSet ---------------------------------------------------------

ParamId ParameterSet::add(std::string name, Tensor init) {
  if (contains(name)) throw ConfigError("duplicate parameter name: " + name);
  Tensor grad(init.shape());
  params_.push_back({std::move(name), std::move(init), std::move(grad)});
  return params_.size() - 1;
}

ParamId ParameterSet::find(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  throw ConfigError("no parameter named " + name);
}

bool ParameterSet::contains(const std::string& name) const {
  return std::any_of(params_.begin(), params_.end(),
                     [&](const Parameter& p) { return p.name == name; });
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.value.size();
  return total;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p.grad.fill(0.0);
}

double ParameterSet::grad_norm() const {
  double total = 0.0;
  for (const auto& p : params_) {
    for (double g : p.grad.values()) total += g * g;
  }
  return std::sqrt(total);
}

// ---- Var ------------------------------------------------------------------

Graph& Var::graph() const {
  if (!graph_) throw GraphError("use of an unbound Var");
  return *graph_;
}

const Tensor& Var::value() const { return graph().value(*this); }
const Shape& Var::shape() const { return value().shape(); }

// ---- Graph ----------------------------------------------------------------

Var Graph::input(Tensor value, bool requires_grad) {
  if (!value.all_finite()) throw NumericError("non-finite graph input");
  Node node{Op::kInput, {}, {}, std::move(value), {}, requires_grad, nullptr};
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::param(ParameterSet& params, ParamId id) {
  Parameter& p = params[id];
  Node node{Op::kParam, {}, {}, p.value, {}, true, &p};
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Graph::Node& Graph::node(Var v) const {
  if (v.graph_ != this || v.id_ < 0 ||
      static_cast<std::size_t>(v.id_) >= nodes_.size()) {
    throw GraphError("Var does not belong to this graph");
  }
  return nodes_[static_cast<std::size_t>(v.id_)];
}

const Tensor& Graph::value(Var v) const { return node(v).value; }

bool Graph::requires_grad(Var v) const { return node(v).requires_grad; }

Tensor Graph::grad(Var v) const {
  const Node& n = node(v);
  if (!n.requires_grad || n.grad.size() != n.value.size()) {
    return Tensor(n.value.shape());
  }
  return n.grad;
}

void Graph::bind(Var leaf, Tensor value) {
  const Node& n = node(leaf);
  if (n.op != Op::kInput && n.op != Op::kParam) {
    throw GraphError("bind() on a non-leaf node");
  }
  if (value.shape() != n.value.shape()) {
    throw ShapeError("bind(): shape " + shape_string(value.shape()) +
                     " does not match leaf shape " +
                     shape_string(n.value.shape()));
  }
  nodes_[static_cast<std::size_t>(leaf.id_)].value = std::move(value);
  stale_ = true;
}

Var Graph::record(Op op, std::vector<int> parents, Attr attr) {
  bool needs_grad = false;
  for (int p : parents) {
    if (p < 0 || static_cast<std::size_t>(p) >= nodes_.size()) {
      throw GraphError(std::string(op_name(op)) + ": dangling parent");
    }
    needs_grad = needs_grad || nodes_[static_cast<std::size_t>(p)].requires_grad;
  }
  if (op == Op::kStopGradient) needs_grad = false;
  Node node{op, std::move(parents), std::move(attr), {}, {}, needs_grad, nullptr};
  node.value = evaluate(node);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Graph::forward() {
  for (auto& n : nodes_) {
    if (n.op == Op::kInput || n.op == Op::kParam) continue;
    n.value = evaluate(n);
  }
  stale_ = false;
}

Tensor Graph::evaluate(const Node& n) const {
  auto in = [&](std::size_t i) -> const Tensor& {
    return nodes_[static_cast<std::size_t>(n.parents[i])].value;
  };
  Tensor out;
  switch (n.op) {
    case Op::kInput:
    case Op::kParam:
      return n.value;
    case Op::kMatMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions " + shape_string(a.shape()) +
                         " x " + shape_string(b.shape()));
      }
      out = Tensor({a.rows(), b.cols()});
      as_matrix(out).noalias() = as_matrix(a) * as_matrix(b);
      break;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      require_same_size(a, b, n.op);
      out = a;
      auto o = out.values();
      auto bv = b.values();
      if (n.op == Op::kAdd) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] += bv[i];
      } else if (n.op == Op::kSub) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bv[i];
      } else {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
      }
      break;
    }
    case Op::kAddBias: {
      const Tensor& x = in(0);
      const Tensor& bias = in(1);
      if (bias.size() != x.cols()) {
        throw ShapeError("add_bias: bias " + shape_string(bias.shape()) +
                         " vs input " + shape_string(x.shape()));
      }
      out = x;
      const std::size_t c = x.cols();
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t j = 0; j < c; ++j) out[r * c + j] += bias[j];
      }
      break;
    }
    case Op::kScale:
    case Op::kAffineScalar: {
      out = in(0);
      for (double& v : out.values()) v = n.attr.a * v + n.attr.b;
      break;
    }
    case Op::kTanh:
      out = in(0);
      for (double& v : out.values()) v = std::tanh(v);
      break;
    case Op::kSigmoid:
      out = in(0);
      for (double& v : out.values()) v = stable_sigmoid(v);
      break;
    case Op::kRelu:
      out = in(0);
      for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
      break;
    case Op::kConcat: {
      const std::size_t rows = in(0).rows();
      std::size_t cols = 0;
      for (std::size_t i = 0; i < n.parents.size(); ++i) {
        if (in(i).rows() != rows) {
          throw ShapeError("concat: row counts differ");
        }
        cols += in(i).cols();
      }
      out = Tensor({rows, cols});
      std::size_t offset = 0;
      for (std::size_t i = 0; i < n.parents.size(); ++i) {
        const Tensor& part = in(i);
        const std::size_t pc = part.cols();
        for (std::size_t r = 0; r < rows; ++r) {
          std::copy_n(part.data() + r * pc, pc, out.data() + r * cols + offset);
        }
        offset += pc;
      }
      break;
    }
    case Op::kSlice: {
      const Tensor& x = in(0);
      if (n.attr.begin > n.attr.end || n.attr.end > x.cols()) {
        throw ShapeError("slice: range out of bounds for " +
                         shape_string(x.shape()));
      }
      const std::size_t width = n.attr.end - n.attr.begin;
      out = Tensor({x.rows(), width});
      for (std::size_t r = 0; r < x.rows(); ++r) {
        std::copy_n(x.data() + r * x.cols() + n.attr.begin, width,
                    out.data() + r * width);
      }
      break;
    }
    case Op::kLerp: {
      const Tensor& x = in(0);
      const Tensor& y = in(1);
      require_same_size(x, y, n.op);
      out = Tensor(y.shape());
      const double c = n.attr.a;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = c * x[i] + (1.0 - c) * y[i];
      }
      break;
    }
    case Op::kStopGradient:
      out = in(0);
      break;
    case Op::kSoftmaxXent: {
      const Tensor& logits = in(0);
      const std::size_t rows = logits.rows();
      const std::size_t cols = logits.cols();
      if (n.attr.labels.size() != rows || n.attr.weights.size() != rows) {
        throw ShapeError("softmax_cross_entropy: labels/weights length must "
                         "equal row count");
      }
      double total = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = n.attr.weights[r];
        if (w == 0.0) continue;
        const std::int64_t label = n.attr.labels[r];
        if (label < 0 || static_cast<std::size_t>(label) >= cols) {
          throw ShapeError("softmax_cross_entropy: label out of range");
        }
        const double* row = logits.data() + r * cols;
        total += w * (row_logsumexp(row, cols) - row[label]);
      }
      out = Tensor::scalar(total);
      break;
    }
    case Op::kSoftmaxEntropy: {
      const Tensor& logits = in(0);
      const std::size_t rows = logits.rows();
      const std::size_t cols = logits.cols();
      if (n.attr.weights.size() != rows) {
        throw ShapeError("softmax_entropy: weights length must equal rows");
      }
      double total = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = n.attr.weights[r];
        if (w == 0.0) continue;
        const double* row = logits.data() + r * cols;
        const double lse = row_logsumexp(row, cols);
        double h = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
          const double logp = row[j] - lse;
          h -= std::exp(logp) * logp;
        }
        total += w * h;
      }
      out = Tensor::scalar(total);
      break;
    }
    case Op::kSumAll: {
      double total = 0.0;
      for (double v : in(0).values()) total += v;
      out = Tensor::scalar(total);
      break;
    }
    case Op::kGather: {
      const Tensor& x = in(0);
      const auto& index = *n.attr.index;
      if (index.size() != element_count(n.attr.shape)) {
        throw ShapeError("gather: index length does not match output shape");
      }
      out = Tensor(n.attr.shape);
      for (std::size_t i = 0; i < index.size(); ++i) {
        const std::int64_t src = index[i];
        if (src < 0) continue;
        if (static_cast<std::size_t>(src) >= x.size()) {
          throw ShapeError("gather: index out of range");
        }
        out[i] = x[static_cast<std::size_t>(src)];
      }
      break;
    }
    case Op::kReshape:
      out = in(0).reshaped(n.attr.shape);
      break;
  }
  if (!out.all_finite()) {
    throw NumericError(std::string("non-finite value produced by ") +
                       op_name(n.op));
  }
  return out;
}

void Graph::backward(Var loss) {
  const Node& root = node(loss);
  if (stale_) {
    throw GraphError("backward() called before forward() on rebound leaves");
  }
  if (root.value.size() != 1) {
    throw GraphError("backward() requires a scalar loss, got shape " +
                     shape_string(root.value.shape()));
  }
  const auto last = static_cast<std::size_t>(loss.id_);
  for (std::size_t i = 0; i <= last; ++i) {
    Node& n = nodes_[i];
    if (!n.requires_grad) continue;
    if (n.grad.shape() != n.value.shape() || n.grad.size() != n.value.size()) {
      n.grad = Tensor(n.value.shape());
    } else {
      n.grad.fill(0.0);
    }
  }
  if (!root.requires_grad) return;
  nodes_[last].grad[0] = 1.0;
  for (std::size_t i = last + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad) continue;
    if (n.op == Op::kParam) {
      auto dst = n.param->grad.values();
      auto src = n.grad.values();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
      continue;
    }
    propagate(n);
  }
}

void Graph::propagate(const Node& n) {
  auto parent = [&](std::size_t i) -> Node& {
    return nodes_[static_cast<std::size_t>(n.parents[i])];
  };
  auto wants = [&](std::size_t i) { return parent(i).requires_grad; };
  const Tensor& g = n.grad;

  switch (n.op) {
    case Op::kInput:
    case Op::kParam:
    case Op::kStopGradient:
      return;
    case Op::kMatMul: {
      Node& a = parent(0);
      Node& b = parent(1);
      if (a.requires_grad) {
        as_matrix(a.grad).noalias() += as_matrix(g) * as_matrix(b.value).transpose();
      }
      if (b.requires_grad) {
        as_matrix(b.grad).noalias() += as_matrix(a.value).transpose() * as_matrix(g);
      }
      return;
    }
    case Op::kAdd:
    case Op::kSub: {
      const double sign = n.op == Op::kAdd ? 1.0 : -1.0;
      if (wants(0)) {
        auto d = parent(0).grad.values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i];
      }
      if (wants(1)) {
        auto d = parent(1).grad.values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += sign * g[i];
      }
      return;
    }
    case Op::kMul: {
      Node& a = parent(0);
      Node& b = parent(1);
      if (a.requires_grad) {
        for (std::size_t i = 0; i < g.size(); ++i) a.grad[i] += g[i] * b.value[i];
      }
      if (b.requires_grad) {
        for (std::size_t i = 0; i < g.size(); ++i) b.grad[i] += g[i] * a.value[i];
      }
      return;
    }
    case Op::kAddBias: {
      const std::size_t c = n.value.cols();
      if (wants(0)) {
        auto d = parent(0).grad.values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i];
      }
      if (wants(1)) {
        auto d = parent(1).grad.values();
        for (std::size_t r = 0; r < n.value.rows(); ++r) {
          for (std::size_t j = 0; j < c; ++j) d[j] += g[r * c + j];
        }
      }
      return;
    }
    case Op::kScale:
    case Op::kAffineScalar: {
      auto d = parent(0).grad.values();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += n.attr.a * g[i];
      return;
    }
    case Op::kTanh: {
      auto d = parent(0).grad.values();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = n.value[i];
        d[i] += g[i] * (1.0 - y * y);
      }
      return;
    }
    case Op::kSigmoid: {
      auto d = parent(0).grad.values();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = n.value[i];
        d[i] += g[i] * y * (1.0 - y);
      }
      return;
    }
    case Op::kRelu: {
      auto d = parent(0).grad.values();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (n.value[i] > 0.0) d[i] += g[i];
      }
      return;
    }
    case Op::kConcat: {
      const std::size_t rows = n.value.rows();
      const std::size_t cols = n.value.cols();
      std::size_t offset = 0;
      for (std::size_t i = 0; i < n.parents.size(); ++i) {
        Node& p = parent(i);
        const std::size_t pc = p.value.cols();
        if (p.requires_grad) {
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < pc; ++j) {
              p.grad[r * pc + j] += g[r * cols + offset + j];
            }
          }
        }
        offset += pc;
      }
      return;
    }
    case Op::kSlice: {
      Node& p = parent(0);
      const std::size_t pc = p.value.cols();
      const std::size_t width = n.attr.end - n.attr.begin;
      for (std::size_t r = 0; r < n.value.rows(); ++r) {
        for (std::size_t j = 0; j < width; ++j) {
          p.grad[r * pc + n.attr.begin + j] += g[r * width + j];
        }
      }
      return;
    }
    case Op::kLerp: {
      const double c = n.attr.a;
      if (wants(0)) {
        auto d = parent(0).grad.values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += c * g[i];
      }
      if (wants(1)) {
        auto d = parent(1).grad.values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += (1.0 - c) * g[i];
      }
      return;
    }
    case Op::kSoftmaxXent: {
      Node& p = parent(0);
      const std::size_t rows = p.value.rows();
      const std::size_t cols = p.value.cols();
      const double upstream = g[0];
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = n.attr.weights[r];
        if (w == 0.0) continue;
        const double* row = p.value.data() + r * cols;
        const double lse = row_logsumexp(row, cols);
        for (std::size_t j = 0; j < cols; ++j) {
          double dj = std::exp(row[j] - lse);
          if (static_cast<std::int64_t>(j) == n.attr.labels[r]) dj -= 1.0;
          p.grad[r * cols + j] += upstream * w * dj;
        }
      }
      return;
    }
    case Op::kSoftmaxEntropy: {
      Node& p = parent(0);
      const std::size_t rows = p.value.rows();
      const std::size_t cols = p.value.cols();
      const double upstream = g[0];
      for (std::size_t r = 0; r < rows; ++r) {
        const double w = n.attr.weights[r];
        if (w == 0.0) continue;
        const double* row = p.value.data() + r * cols;
        const double lse = row_logsumexp(row, cols);
        double h = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
          const double logp = row[j] - lse;
          h -= std::exp(logp) * logp;
        }
        for (std::size_t j = 0; j < cols; ++j) {
          const double logp = row[j] - lse;
          p.grad[r * cols + j] += upstream * w * (-std::exp(logp) * (logp + h));
        }
      }
      return;
    }
    case Op::kSumAll: {
      auto d = parent(0).grad.values();
      for (double& v : d) v += g[0];
      return;
    }
    case Op::kGather: {
      auto d = parent(0).grad.values();
      const auto& index = *n.attr.index;
      for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= 0) d[static_cast<std::size_t>(index[i])] += g[i];
      }
      return;
    }
    case Op::kReshape: {
      auto d = parent(0).grad.values();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += g[i];
      return;
    }
  }
}

// ---- free operations ------------------------------------------------------

namespace {

Graph& common_graph(Var a, Var b) {
  if (&a.graph() != &b.graph()) {
    throw GraphError("operands belong to different graphs");
  }
  return a.graph();
}

}  // namespace

Var matmul(Var a, Var b) {
  return common_graph(a, b).record(Op::kMatMul, {a.id(), b.id()});
}

Var add(Var a, Var b) {
  return common_graph(a, b).record(Op::kAdd, {a.id(), b.id()});
}

Var sub(Var a, Var b) {
  return common_graph(a, b).record(Op::kSub, {a.id(), b.id()});
}

Var mul(Var a, Var b) {
  return common_graph(a, b).record(Op::kMul, {a.id(), b.id()});
}

Var add_bias(Var x, Var bias) {
  return common_graph(x, bias).record(Op::kAddBias, {x.id(), bias.id()});
}

Var scale(Var x, double factor) {
  Graph::Attr attr;
  attr.a = factor;
  return x.graph().record(Op::kScale, {x.id()}, std::move(attr));
}

Var affine_scalar(Var x, double factor, double offset) {
  Graph::Attr attr;
  attr.a = factor;
  attr.b = offset;
  return x.graph().record(Op::kAffineScalar, {x.id()}, std::move(attr));
}

Var tanh(Var x) { return x.graph().record(Op::kTanh, {x.id()}); }
Var sigmoid(Var x) { return x.graph().record(Op::kSigmoid, {x.id()}); }
Var relu(Var x) { return x.graph().record(Op::kRelu, {x.id()}); }

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  std::vector<int> ids;
  ids.reserve(parts.size());
  for (const Var& p : parts) {
    common_graph(parts.front(), p);
    ids.push_back(p.id());
  }
  return parts.front().graph().record(Op::kConcat, std::move(ids));
}

Var slice(Var x, std::size_t begin, std::size_t end) {
  Graph::Attr attr;
  attr.begin = begin;
  attr.end = end;
  return x.graph().record(Op::kSlice, {x.id()}, std::move(attr));
}

Var lerp(Var x, Var y, double coeff) {
  Graph::Attr attr;
  attr.a = coeff;
  return common_graph(x, y).record(Op::kLerp, {x.id(), y.id()}, std::move(attr));
}

Var stop_gradient(Var x) {
  return x.graph().record(Op::kStopGradient, {x.id()});
}

Var softmax_cross_entropy(Var logits, std::vector<std::int64_t> labels,
                          std::vector<double> weights) {
  Graph::Attr attr;
  attr.labels = std::move(labels);
  attr.weights = std::move(weights);
  return logits.graph().record(Op::kSoftmaxXent, {logits.id()}, std::move(attr));
}

Var softmax_entropy(Var logits, std::vector<double> weights) {
  Graph::Attr attr;
  attr.weights = std::move(weights);
  return logits.graph().record(Op::kSoftmaxEntropy, {logits.id()},
                               std::move(attr));
}

Var sum_all(Var x) { return x.graph().record(Op::kSumAll, {x.id()}); }

Var gather(Var x, std::shared_ptr<const std::vector<std::int64_t>> index,
           Shape out_shape) {
  if (!index) throw ShapeError("gather: null index map");
  Graph::Attr attr;
  attr.index = std::move(index);
  attr.shape = std::move(out_shape);
  return x.graph().record(Op::kGather, {x.id()}, std::move(attr));
}

Var reshape(Var x, Shape shape) {
  Graph::Attr attr;
  attr.shape = std::move(shape);
  return x.graph().record(Op::kReshape, {x.id()}, std::move(attr));
}

}  // namespace lowpass::ad
