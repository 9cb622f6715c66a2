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

#ifndef RELMTL_NN_HPP_
#define RELMTL_NN_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "relmtl/matrix.hpp"
#include "relmtl/rng.hpp"

// Dense feed-forward building blocks with explicit forward/backward passes.
//
// Layout: batches are row-major (one example per row). A layer stores its
// weights as (out_dim x in_dim) and computes `act(input * W^T + b)`.
// The only supported loss is categorical cross-entropy on a softmax output
// layer, averaged over the batch.
namespace relmtl::nn {

enum class Activation { sigmoid, softmax, identity };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

struct DenseLayer {
  Matrix weights;               // out_dim x in_dim
  std::vector<double> biases;   // out_dim
  Activation activation = Activation::identity;

  std::size_t in_dim() const noexcept { return weights.cols(); }
  std::size_t out_dim() const noexcept { return weights.rows(); }
  std::size_t parameter_count() const noexcept { return weights.size() + biases.size(); }
};

/// Glorot/Xavier uniform weights in +-sqrt(6 / (in_dim + out_dim)), zero biases.
/// Weights are drawn row by row from `rng`.
DenseLayer glorot_init(std::size_t in_dim, std::size_t out_dim, Activation activation, Rng& rng);

inline double glorot_bound(std::size_t in_dim, std::size_t out_dim) {
  return std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
}

/// Elementwise logistic function, clamped to the open interval (0, 1).
std::vector<double> sigmoid(std::span<const double> x);
double sigmoid(double x);

/// Max-subtracted softmax. Throws std::invalid_argument on empty input.
std::vector<double> softmax(std::span<const double> logits);

/// Probabilities below this are floored before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// -ln(max(probs[gold], 1e-12)).
double cross_entropy(std::span<const double> probs, std::size_t gold);

/// Pre-activations and activations of every layer for one batch.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre_activations;
  std::vector<Matrix> activations;

  std::size_t size() const noexcept { return activations.size(); }
  const Matrix& output() const { return activations.back(); }
};

/// Layers are passed by pointer so a shared trunk and one task head can be
/// chained without copying.
using LayerChain = std::span<const DenseLayer* const>;

std::vector<const DenseLayer*> chain_of(std::span<const DenseLayer> layers);

ForwardTrace forward(LayerChain layers, const Matrix& input);
ForwardTrace forward(std::span<const DenseLayer> layers, const Matrix& input);

struct LayerGrad {
  Matrix weights;
  std::vector<double> biases;
};

/// Gradients of the mean batch cross-entropy w.r.t. every parameter.
/// The last layer must be softmax; its delta is (probs - onehot(gold)) / batch.
std::vector<LayerGrad> backward(LayerChain layers, const ForwardTrace& trace,
                                std::span<const std::size_t> gold);
std::vector<LayerGrad> backward(std::span<const DenseLayer> layers, const ForwardTrace& trace,
                                std::span<const std::size_t> gold);

/// Mean cross-entropy of the trace's output rows against `gold`.
double mean_loss(const ForwardTrace& trace, std::span<const std::size_t> gold);

/// Argmax per row; ties go to the lowest index.
std::vector<std::size_t> argmax_rows(const Matrix& probs);

struct RmsPropConfig {
  double learning_rate = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;

  void validate() const;
};

/// Running mean of squared gradients for one parameter tensor.
struct RmsPropState {
  RmsPropConfig config;
  std::vector<double> cache;

  RmsPropState() = default;
  RmsPropState(RmsPropConfig cfg, std::size_t n) : config(cfg), cache(n, 0.0) {}
};

/// One RMSprop step: cache <- rho*cache + (1-rho)*g^2; p <- p - lr*g/(sqrt(cache)+eps).
void rmsprop_step(std::span<double> params, std::span<const double> grads, RmsPropState& state);

/// Optimizer state for the two tensors of a DenseLayer.
struct LayerOptimizer {
  RmsPropState weights;
  RmsPropState biases;

  LayerOptimizer() = default;
  LayerOptimizer(RmsPropConfig cfg, const DenseLayer& layer)
      : weights(cfg, layer.weights.size()), biases(cfg, layer.biases.size()) {}
};

void rmsprop_step(DenseLayer& layer, const LayerGrad& grad, LayerOptimizer& state);

}  // namespace relmtl::nn

#endif  // RELMTL_NN_HPP_
