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

#include "relmtl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "relmtl/kernels.hpp"

namespace relmtl::nn {
namespace {

// Smallest and largest doubles strictly inside (0, 1).
constexpr double kSigmoidLow = std::numeric_limits<double>::denorm_min();
const double kSigmoidHigh = std::nextafter(1.0, 0.0);

void apply_activation(Activation act, const Matrix& pre, Matrix& out) {
  switch (act) {
    case Activation::identity:
      out = pre;
      return;
    case Activation::sigmoid: {
      auto src = pre.values();
      auto dst = out.values();
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = sigmoid(src[k]);
      return;
    }
    case Activation::softmax:
      for (std::size_t r = 0; r < pre.rows(); ++r) {
        auto p = softmax(pre.row(r));
        std::copy(p.begin(), p.end(), out.row(r).begin());
      }
      return;
  }
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::softmax:
      return "softmax";
    case Activation::identity:
      return "identity";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "softmax") return Activation::softmax;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

DenseLayer glorot_init(std::size_t in_dim, std::size_t out_dim, Activation activation, Rng& rng) {
  if (in_dim == 0 || out_dim == 0) {
    throw std::invalid_argument("glorot_init: dimensions must be positive");
  }
  const double bound = glorot_bound(in_dim, out_dim);
  DenseLayer layer{Matrix(out_dim, in_dim), std::vector<double>(out_dim, 0.0), activation};
  for (auto& w : layer.weights.values()) {
    w = rng.uniform(-bound, bound);
  }
  return layer;
}

double sigmoid(double x) {
  double y;
  if (x >= 0.0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::clamp(y, kSigmoidLow, kSigmoidHigh);
}

std::vector<double> sigmoid(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return sigmoid(v); });
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) {
    throw std::invalid_argument("softmax: empty input");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - mx);
    total += out[k];
  }
  for (auto& v : out) v /= total;
  return out;
}

double cross_entropy(std::span<const double> probs, std::size_t gold) {
  if (gold >= probs.size()) {
    throw std::invalid_argument("cross_entropy: gold class " + std::to_string(gold) + " out of range for " +
                                std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[gold], kProbabilityFloor));
}

std::vector<const DenseLayer*> chain_of(std::span<const DenseLayer> layers) {
  std::vector<const DenseLayer*> chain;
  chain.reserve(layers.size());
  for (const auto& l : layers) chain.push_back(&l);
  return chain;
}

ForwardTrace forward(LayerChain layers, const Matrix& input) {
  if (layers.empty()) {
    throw std::invalid_argument("forward: no layers");
  }
  ForwardTrace trace;
  trace.input = input;
  trace.pre_activations.reserve(layers.size());
  trace.activations.reserve(layers.size());
  const Matrix* current = &trace.input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = *layers[l];
    if (current->cols() != layer.in_dim()) {
      throw std::invalid_argument("forward: layer " + std::to_string(l) + " expects " +
                                  std::to_string(layer.in_dim()) + " inputs, got " +
                                  std::to_string(current->cols()));
    }
    Matrix pre(current->rows(), layer.out_dim());
    kernels::affine(*current, layer.weights, layer.biases, pre);
    Matrix act(pre.rows(), pre.cols());
    apply_activation(layer.activation, pre, act);
    trace.pre_activations.push_back(std::move(pre));
    trace.activations.push_back(std::move(act));
    current = &trace.activations.back();
  }
  return trace;
}

ForwardTrace forward(std::span<const DenseLayer> layers, const Matrix& input) {
  const auto chain = chain_of(layers);
  return forward(LayerChain(chain), input);
}

std::vector<LayerGrad> backward(LayerChain layers, const ForwardTrace& trace,
                                std::span<const std::size_t> gold) {
  if (layers.empty() || trace.size() != layers.size() || trace.pre_activations.size() != layers.size()) {
    throw std::invalid_argument("backward: trace does not match layer count");
  }
  const std::size_t batch = trace.input.rows();
  if (gold.size() != batch || batch == 0) {
    throw std::invalid_argument("backward: gold label count does not match batch size");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& act = trace.activations[l];
    if (act.rows() != batch || act.cols() != layers[l]->out_dim()) {
      throw std::invalid_argument("backward: trace shape mismatch at layer " + std::to_string(l));
    }
    if (l + 1 < layers.size() && layers[l]->activation == Activation::softmax) {
      throw std::invalid_argument("backward: softmax is only supported on the output layer");
    }
  }
  if (layers.back()->activation != Activation::softmax) {
    throw std::invalid_argument("backward: output layer must be softmax");
  }

  std::vector<LayerGrad> grads(layers.size());
  const double scale = 1.0 / static_cast<double>(batch);

  // Output delta for softmax + cross-entropy: probs - onehot(gold).
  // The 1/batch factor is applied when forming the parameter gradients.
  Matrix delta = trace.activations.back();
  for (std::size_t b = 0; b < batch; ++b) {
    if (gold[b] >= delta.cols()) {
      throw std::invalid_argument("backward: gold class out of range");
    }
    delta(b, gold[b]) -= 1.0;
  }

  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = *layers[l];
    const Matrix& layer_input = l == 0 ? trace.input : trace.activations[l - 1];
    grads[l].weights = Matrix(layer.out_dim(), layer.in_dim());
    grads[l].biases.assign(layer.out_dim(), 0.0);
    kernels::weight_grad(delta, layer_input, scale, grads[l].weights, grads[l].biases);
    if (l == 0) break;

    Matrix upstream(batch, layer.in_dim());
    kernels::input_delta(delta, layer.weights, upstream);
    const DenseLayer& below = *layers[l - 1];
    if (below.activation == Activation::sigmoid) {
      const auto a = trace.activations[l - 1].values();
      auto u = upstream.values();
      for (std::size_t k = 0; k < u.size(); ++k) u[k] *= a[k] * (1.0 - a[k]);
    }
    delta = std::move(upstream);
  }
  return grads;
}

std::vector<LayerGrad> backward(std::span<const DenseLayer> layers, const ForwardTrace& trace,
                                std::span<const std::size_t> gold) {
  const auto chain = chain_of(layers);
  return backward(LayerChain(chain), trace, gold);
}

double mean_loss(const ForwardTrace& trace, std::span<const std::size_t> gold) {
  const Matrix& out = trace.output();
  if (gold.size() != out.rows() || gold.empty()) {
    throw std::invalid_argument("mean_loss: gold label count does not match batch size");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < out.rows(); ++b) total += cross_entropy(out.row(b), gold[b]);
  return total / static_cast<double>(out.rows());
}

std::vector<std::size_t> argmax_rows(const Matrix& probs) {
  std::vector<std::size_t> out(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto row = probs.row(r);
    out[r] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

void RmsPropConfig::validate() const {
  if (!(learning_rate > 0.0) || !(rho > 0.0 && rho < 1.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("RMSprop config requires learning_rate > 0, 0 < rho < 1, epsilon > 0");
  }
}

void rmsprop_step(std::span<double> params, std::span<const double> grads, RmsPropState& state) {
  if (params.size() != grads.size() || params.size() != state.cache.size()) {
    throw std::invalid_argument("rmsprop_step: parameter, gradient and cache sizes differ");
  }
  state.config.validate();
  kernels::rmsprop_update(params, grads, state.cache, state.config.learning_rate, state.config.rho,
                          state.config.epsilon);
}

void rmsprop_step(DenseLayer& layer, const LayerGrad& grad, LayerOptimizer& state) {
  if (grad.weights.rows() != layer.weights.rows() || grad.weights.cols() != layer.weights.cols()) {
    throw std::invalid_argument("rmsprop_step: weight gradient shape mismatch");
  }
  rmsprop_step(layer.weights.values(), grad.weights.values(), state.weights);
  rmsprop_step(layer.biases, grad.biases, state.biases);
}

}  // namespace relmtl::nn
