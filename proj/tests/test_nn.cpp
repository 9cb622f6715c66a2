// Copyright 2026 The relmtl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "relmtl/nn.hpp"
#include "relmtl/rng.hpp"
#include "support/gradcheck.hpp"

using namespace relmtl;
using nn::Activation;
using nn::DenseLayer;

TEST_CASE("glorot_init bounds and determinism") {
  Rng rng(5);
  const auto big = nn::glorot_init(300, 300, Activation::sigmoid, rng);
  CHECK(big.weights.rows() == 300);
  CHECK(big.weights.cols() == 300);
  for (double w : big.weights.values()) {
    CHECK(w >= -0.1);
    CHECK(w <= 0.1);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r(seed);
    const auto one = nn::glorot_init(1, 1, Activation::sigmoid, r);
    CHECK(std::abs(one.weights(0, 0)) <= std::sqrt(3.0));
    CHECK(one.biases[0] == 0.0);
  }
  Rng a(99), b(99);
  const auto la = nn::glorot_init(7, 4, Activation::softmax, a);
  const auto lb = nn::glorot_init(7, 4, Activation::softmax, b);
  CHECK(bitwise_equal(la.weights, lb.weights));
  CHECK(bitwise_equal(la.biases, lb.biases));
  Rng z(1);
  CHECK_THROWS_AS(nn::glorot_init(0, 3, Activation::sigmoid, z), std::invalid_argument);
}

TEST_CASE("sigmoid values") {
  CHECK(nn::sigmoid(0.0) == 0.5);
  CHECK(nn::sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  const double tiny = nn::sigmoid(-1000.0);
  CHECK(tiny > 0.0);
  CHECK(tiny <= 1e-300);
  const double big = nn::sigmoid(1000.0);
  CHECK(big < 1.0);
  CHECK(!std::isnan(big));
  const std::vector<double> xs{0.0, std::log(3.0)};
  const auto ys = nn::sigmoid(xs);
  CHECK(ys[0] == 0.5);
  CHECK(ys[1] == doctest::Approx(0.75));
}

TEST_CASE("softmax values") {
  const std::vector<double> two{0.0, 0.0};
  CHECK(nn::softmax(two) == std::vector<double>{0.5, 0.5});
  const std::vector<double> three{1.0, 1.0, 1.0};
  for (double p : nn::softmax(three)) CHECK(p == doctest::Approx(1.0 / 3.0));
  const std::vector<double> base{2.0, -1.0};
  const std::vector<double> shifted{1002.0, 999.0};
  const auto p = nn::softmax(base);
  const auto q = nn::softmax(shifted);
  CHECK(q[0] == doctest::Approx(p[0]).epsilon(1e-12));
  CHECK(q[1] == doctest::Approx(p[1]).epsilon(1e-12));
  const std::vector<double> empty;
  CHECK_THROWS(nn::softmax(empty));
}

TEST_CASE("cross_entropy values") {
  const std::vector<double> perfect{1.0, 0.0};
  CHECK(nn::cross_entropy(perfect, 0) == 0.0);
  const std::vector<double> even{0.5, 0.5};
  CHECK(nn::cross_entropy(even, 1) == doctest::Approx(std::log(2.0)));
  const std::vector<double> floored{1e-15, 1.0 - 1e-15};
  CHECK(nn::cross_entropy(floored, 0) == doctest::Approx(-std::log(1e-12)));
  CHECK(nn::cross_entropy(floored, 0) == doctest::Approx(27.631).epsilon(1e-4));
  CHECK_THROWS(nn::cross_entropy(even, 2));
}

TEST_CASE("forward: identity and zero layers") {
  DenseLayer id{Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), {0, 0, 0}, Activation::identity};
  const auto x = Matrix::from_rows({{1, -2, 3}, {0.5, 0, -7}});
  const std::vector<DenseLayer> one{id};
  CHECK(nn::forward(one, x).output() == x);

  DenseLayer zero{Matrix(4, 3), std::vector<double>(4, 0.0), Activation::sigmoid};
  const std::vector<DenseLayer> z{zero};
  const auto trace = nn::forward(z, x);
  for (double v : trace.output().values()) CHECK(v == 0.5);
}

TEST_CASE("forward: two-layer net matches a hand-written chain") {
  Rng rng(2024);
  const std::vector<DenseLayer> net{nn::glorot_init(2, 2, Activation::sigmoid, rng),
                                    nn::glorot_init(2, 2, Activation::softmax, rng)};
  const auto x = Matrix::from_rows({{0.3, -1.2}, {2.0, 0.5}});
  const auto out = nn::forward(net, x).output();
  for (std::size_t r = 0; r < 2; ++r) {
    double h[2];
    for (std::size_t j = 0; j < 2; ++j) {
      double z = net[0].biases[j];
      for (std::size_t k = 0; k < 2; ++k) z += net[0].weights(j, k) * x(r, k);
      h[j] = 1.0 / (1.0 + std::exp(-z));
    }
    double logits[2];
    for (std::size_t j = 0; j < 2; ++j) {
      logits[j] = net[1].biases[j];
      for (std::size_t k = 0; k < 2; ++k) logits[j] += net[1].weights(j, k) * h[k];
    }
    const double e0 = std::exp(logits[0]);
    const double e1 = std::exp(logits[1]);
    CHECK(out(r, 0) == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-12));
    CHECK(out(r, 1) == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));
  }
}

TEST_CASE("forward: shape mismatch names the layer") {
  Rng rng(1);
  const std::vector<DenseLayer> net{nn::glorot_init(3, 4, Activation::sigmoid, rng),
                                    nn::glorot_init(5, 2, Activation::softmax, rng)};
  try {
    nn::forward(net, Matrix(1, 3));
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
  }
}

TEST_CASE("backward: saturated correct output gives near-zero delta") {
  DenseLayer head{Matrix::from_rows({{50, 0}, {-50, 0}}), {0, 0}, Activation::softmax};
  const std::vector<DenseLayer> net{head};
  const auto x = Matrix::from_rows({{1, 0}});
  const std::vector<std::size_t> gold{0};
  const auto grads = nn::backward(net, nn::forward(net, x), gold);
  for (double g : grads[0].biases) CHECK(std::abs(g) < 1e-6);
  for (double g : grads[0].weights.values()) CHECK(std::abs(g) < 1e-6);
}

TEST_CASE("backward: 6-4-3-2 net matches finite differences") {
  const std::vector<std::size_t> hidden{4, 3};
  const std::vector<std::size_t> heads{2};
  auto model = mtl::build_model(6, hidden, heads, 77);
  Rng rng(78);
  Matrix x(5, 6);
  for (double& v : x.values()) v = rng.uniform(-1.5, 1.5);
  const std::vector<std::size_t> y{0, 1, 1, 0, 1};
  const auto check = testing::check_model_gradients(model, 0, x, y);
  CHECK(check.checked == 6 * 4 + 4 + 4 * 3 + 3 + 3 * 2 + 2);
  CHECK(check.max_relative_error < 1e-4);
}

TEST_CASE("backward: duplicated example gives the single-example gradient") {
  Rng rng(3);
  const std::vector<DenseLayer> net{nn::glorot_init(3, 4, Activation::sigmoid, rng),
                                    nn::glorot_init(4, 2, Activation::softmax, rng)};
  const auto one = Matrix::from_rows({{0.1, 0.2, -0.3}});
  const auto two = Matrix::from_rows({{0.1, 0.2, -0.3}, {0.1, 0.2, -0.3}});
  const std::vector<std::size_t> y1{1};
  const std::vector<std::size_t> y2{1, 1};
  const auto g1 = nn::backward(net, nn::forward(net, one), y1);
  const auto g2 = nn::backward(net, nn::forward(net, two), y2);
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t k = 0; k < g1[l].weights.size(); ++k) {
      CHECK(g2[l].weights.values()[k] == doctest::Approx(g1[l].weights.values()[k]).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < g1[l].biases.size(); ++k) {
      CHECK(g2[l].biases[k] == doctest::Approx(g1[l].biases[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("backward requires a softmax output layer") {
  Rng rng(4);
  const std::vector<DenseLayer> net{nn::glorot_init(3, 2, Activation::sigmoid, rng)};
  const auto x = Matrix::from_rows({{1, 2, 3}});
  const std::vector<std::size_t> y{0};
  CHECK_THROWS(nn::backward(net, nn::forward(net, x), y));
}

TEST_CASE("argmax_rows breaks ties toward the lower index") {
  const auto p = Matrix::from_rows({{0.5, 0.5}, {0.2, 0.8}, {0.3, 0.3}});
  CHECK(nn::argmax_rows(p) == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("rmsprop: zero gradient only decays the cache") {
  nn::RmsPropState state({0.001, 0.9, 1e-8}, 3);
  state.cache = {1.0, 2.0, 4.0};
  std::vector<double> params{1.0, -2.0, 3.0};
  const std::vector<double> grads(3, 0.0);
  nn::rmsprop_step(params, grads, state);
  CHECK(params == std::vector<double>{1.0, -2.0, 3.0});
  CHECK(state.cache[0] == doctest::Approx(0.9));
  CHECK(state.cache[1] == doctest::Approx(1.8));
  CHECK(state.cache[2] == doctest::Approx(3.6));
}

TEST_CASE("rmsprop: closed-form first step and shrinking steps") {
  nn::RmsPropState state({0.001, 0.9, 1e-8}, 1);
  std::vector<double> param{0.0};
  const std::vector<double> grad{1.0};
  nn::rmsprop_step(param, grad, state);
  CHECK(state.cache[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(param[0] == doctest::Approx(-0.001 / (std::sqrt(0.1) + 1e-8)).epsilon(1e-12));
  CHECK(param[0] == doctest::Approx(-0.0031623).epsilon(1e-4));
  const double first = -param[0];
  nn::rmsprop_step(param, grad, state);
  const double second = -param[0] - first;
  CHECK(second > 0.0);
  CHECK(second < first);
}

TEST_CASE("rmsprop config validation") {
  CHECK_THROWS(nn::RmsPropConfig{-1.0, 0.9, 1e-8}.validate());
  CHECK_THROWS(nn::RmsPropConfig{0.001, 1.0, 1e-8}.validate());
  CHECK_THROWS(nn::RmsPropConfig{0.001, 0.9, 0.0}.validate());
  CHECK_NOTHROW(nn::RmsPropConfig{}.validate());
}
