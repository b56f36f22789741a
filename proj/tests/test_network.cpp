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

#include <gtest/gtest.h>

#include "lowpass/error.hpp"
#include "lowpass/network.hpp"
#include "test_util.hpp"

namespace lowpass::memory {
namespace {

using lowpass::testing::random_tensor;

// Affine layer with bias.
std::size_t affine_count(std::size_t in, std::size_t out) { return in * out + out; }

TEST(Network, ClassifierParameterCountByEnumeration) {
  const std::size_t k = 4, d = 8, v = 4, m = 16, n = 4, input = 8;
  const auto spec = NetworkSpec::concrete_classifier(k, d, v, m, 2.0, n);
  Network net(spec, 0);
  const std::size_t expected = input * d                       // injection, no bias
                               + (k + 1) * affine_count(d, v)  // viewports incl. p0
                               + affine_count((k + 1) * v, m)  // summariser
                               + affine_count(m, n);           // logits
  EXPECT_EQ(expected, 648u);
  EXPECT_EQ(net.parameters().scalar_count(), expected);
}

TEST(Network, ParallelClassifierAddsLearnedEmbedding) {
  const auto chain = NetworkSpec::concrete_classifier(4, 8, 4, 16, 2.0, 4);
  const auto par = NetworkSpec::parallel_classifier(4, 8, 4, 16, 2.0, 4);
  Network a(chain, 0), b(par, 0);
  EXPECT_TRUE(b.parameters().contains("embed.w"));
  EXPECT_EQ(b.parameters().scalar_count(),
            a.parameters().scalar_count() + affine_count(8, 8));
}

TEST(Network, InjectionIsScaledPaddedIdentity) {
  auto spec = NetworkSpec::concrete_classifier(3, 16, 4, 8, 2.0, 4);
  Network net(spec, 1);
  const Tensor& w = net.parameters()[net.parameters().find("inject.w")].value;
  ASSERT_EQ(w.shape(), (Shape{8, 16}));
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(w(i, j), i == j ? 0.5 : 0.0);
  }
}

TEST(Network, FirstPoolSeesScaledOneHot) {
  auto spec = NetworkSpec::concrete_classifier(2, 8, 4, 8, 2.0, 4);
  Network net(spec, 1);
  ad::Graph g;
  Bound bound(g, net.parameters());
  auto state = net.bind_state(g, net.initial_state(1));
  Tensor x = Tensor::zeros(1, 8);
  x[3] = 1.0;
  const auto out = net.step(bound, state, g.constant(x));
  // p1 = a1 * p0 with p0 = b * x * I'/b.
  EXPECT_DOUBLE_EQ(out.state[0].value()[3], 0.5);
  EXPECT_DOUBLE_EQ(out.state[1].value()[3], 0.125);
}

TEST(Network, ActorCriticOutputShapes) {
  const auto spec = NetworkSpec::actor_critic(MemoryKind::kChain, {5, 5, 3});
  EXPECT_EQ(spec.viewport, 32u);
  EXPECT_EQ(spec.hidden, 256u);
  EXPECT_EQ(spec.base, 2.0);
  Network net(spec, 2);
  ad::Graph g;
  Bound bound(g, net.parameters());
  Rng rng(1);
  Tensor obs = Tensor::zeros(3, 75);
  for (double& v : obs.values()) v = rng.bernoulli(0.3) ? 1.0 : 0.0;
  const auto out = net.step(bound, net.bind_state(g, net.initial_state(3)), g.constant(obs));
  EXPECT_EQ(out.logits.value().shape(), (Shape{3, 5}));
  EXPECT_EQ(out.value.value().shape(), (Shape{3, 1}));
}

TEST(Network, ActorCriticLstmAndParallelBuild) {
  for (auto kind : {MemoryKind::kLstm, MemoryKind::kParallel}) {
    Network net(NetworkSpec::actor_critic(kind, {5, 5, 3}), 3);
    ad::Graph g;
    Bound bound(g, net.parameters());
    const auto out = net.step(bound, net.bind_state(g, net.initial_state(1)),
                              g.constant(Tensor::zeros(1, 75)));
    EXPECT_EQ(out.logits.value().shape(), (Shape{1, 5}));
  }
}

TEST(Network, ZeroReadoutGivesZeroOutput) {
  Network net(NetworkSpec::concrete_classifier(3, 4, 4, 8, 2.0, 4), 4);
  for (auto& p : net.parameters()) {
    if (p.name != "inject.w") p.value.fill(0.0);
  }
  ad::Graph g;
  Bound bound(g, net.parameters());
  Tensor x = Tensor::zeros(1, 8);
  x[1] = 1.0;
  const auto out = net.step(bound, net.bind_state(g, net.initial_state(1)), g.constant(x));
  for (double v : out.logits.value().values()) EXPECT_EQ(v, 0.0);
}

TEST(Network, SlowPoolsGetNoGradient) {
  auto spec = NetworkSpec::concrete_classifier(4, 4, 4, 8, 2.0, 4);
  ASSERT_EQ(spec.gradient_pass_depth, 1u);
  Network net(spec, 5);
  ad::Graph g;
  Bound bound(g, net.parameters());
  Rng rng(6);
  std::vector<ad::Var> state;
  for (int n = 0; n < 4; ++n) state.push_back(g.input(random_tensor(rng, 2, 4), true));
  Tensor x = Tensor::zeros(2, 8);
  x[0] = 1.0;
  x[8 + 5] = 1.0;
  const auto out = net.step(bound, state, g.constant(x));
  g.backward(ad::softmax_cross_entropy(out.logits, {1, 2}, {1.0, 1.0}));
  // Contents of pool 3 and the state feeding them.
  for (const Tensor gr = g.grad(out.state[2]); double v : gr.values()) EXPECT_EQ(v, 0.0);
  for (const Tensor gr = g.grad(state[2]); double v : gr.values()) EXPECT_EQ(v, 0.0);
  for (const Tensor gr = g.grad(state[3]); double v : gr.values()) EXPECT_EQ(v, 0.0);
  double fast = 0.0;
  for (const Tensor gr = g.grad(state[0]); double v : gr.values()) fast += std::abs(v);
  EXPECT_GT(fast, 0.0);
}

TEST(Network, LstmForgetBiasStartsAtOne) {
  Network net(NetworkSpec::lstm_classifier(6, 8, 4), 0);
  const Tensor& b = net.parameters()[net.parameters().find("lstm.bias")].value;
  for (std::size_t j = 0; j < 24; ++j) EXPECT_EQ(b[j], (j >= 6 && j < 12) ? 1.0 : 0.0);
}

TEST(Network, SeededInitialisation) {
  const auto spec = NetworkSpec::concrete_classifier(3, 4, 4, 8, 2.0, 4);
  Network a(spec, 7), b(spec, 7), c(spec, 8);
  const auto id = a.parameters().find("summariser.w");
  EXPECT_EQ(a.parameters()[id].value, b.parameters()[id].value);
  EXPECT_NE(a.parameters()[id].value, c.parameters()[id].value);
}

TEST(Network, InvalidSpecsAreRejected) {
  auto bad_base = NetworkSpec::concrete_classifier(3, 4, 4, 8, 0.5, 4);
  EXPECT_THROW(Network(bad_base, 0), ConfigError);
  auto one_class = NetworkSpec::concrete_classifier(3, 4, 4, 8, 2.0, 1);
  EXPECT_THROW(Network(one_class, 0), ConfigError);
  auto deep = NetworkSpec::concrete_classifier(3, 4, 4, 8, 2.0, 4);
  deep.gradient_pass_depth = 5;
  EXPECT_THROW(Network(deep, 0), ConfigError);
}

TEST(Network, InputWidthMismatchThrows) {
  Network net(NetworkSpec::concrete_classifier(2, 4, 4, 8, 2.0, 4), 0);
  ad::Graph g;
  Bound bound(g, net.parameters());
  EXPECT_THROW(net.step(bound, net.bind_state(g, net.initial_state(1)),
                        g.constant(Tensor::zeros(1, 5))),
               ShapeError);
}

TEST(Network, TanhReadoutOption) {
  auto spec = NetworkSpec::concrete_classifier(2, 4, 4, 8, 2.0, 4);
  spec.readout_activation = Activation::kTanh;
  Network net(spec, 0);
  auto relu_spec = spec;
  relu_spec.readout_activation = Activation::kRelu;
  Network relu_net(relu_spec, 0);
  Tensor x = Tensor::zeros(1, 8);
  x[2] = 1.0;
  ad::Graph g;
  Bound b1(g, net.parameters());
  Bound b2(g, relu_net.parameters());
  const auto o1 = net.step(b1, net.bind_state(g, net.initial_state(1)), g.constant(x));
  const auto o2 = relu_net.step(b2, relu_net.bind_state(g, relu_net.initial_state(1)),
                                g.constant(x));
  EXPECT_NE(o1.logits.value(), o2.logits.value());
}

TEST(PaddedIdentity, Shape) {
  const Tensor p = padded_identity(8, 16);
  EXPECT_EQ(p.shape(), (Shape{8, 16}));
  double sum = 0.0;
  for (double v : p.values()) sum += v;
  EXPECT_EQ(sum, 8.0);
}

}  // namespace
}  // namespace lowpass::memory
