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

#include "relmtl/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#ifdef RELMTL_HAVE_OPENMP
#include <omp.h>
#endif

namespace relmtl::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1 << 15;

void check_affine(const Matrix& in, const Matrix& w, std::span<const double> bias, const Matrix& out) {
  if (in.cols() != w.cols() || bias.size() != w.rows() || out.rows() != in.rows() || out.cols() != w.rows()) {
    throw std::invalid_argument("affine: shape mismatch");
  }
}

void check_weight_grad(const Matrix& delta, const Matrix& in, const Matrix& grad_w, std::span<double> grad_b) {
  if (delta.rows() != in.rows() || grad_w.rows() != delta.cols() || grad_w.cols() != in.cols() ||
      grad_b.size() != delta.cols()) {
    throw std::invalid_argument("weight_grad: shape mismatch");
  }
}

void check_input_delta(const Matrix& delta, const Matrix& w, const Matrix& out) {
  if (delta.cols() != w.rows() || out.rows() != delta.rows() || out.cols() != w.cols()) {
    throw std::invalid_argument("input_delta: shape mismatch");
  }
}

void check_rmsprop(std::span<double> params, std::span<const double> grads, std::span<double> cache) {
  if (params.size() != grads.size() || params.size() != cache.size()) {
    throw std::invalid_argument("rmsprop_update: shape mismatch");
  }
}

// Per-element bodies shared by both versions so the arithmetic is identical.

inline void affine_row(const Matrix& in, const Matrix& w, std::span<const double> bias, Matrix& out,
                       std::size_t b) {
  const auto x = in.row(b);
  auto y = out.row(b);
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const auto wo = w.row(o);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      acc += x[i] * wo[i];
    }
    y[o] = acc + bias[o];
  }
}

inline void weight_grad_row(const Matrix& delta, const Matrix& in, double scale, Matrix& grad_w,
                            std::span<double> grad_b, std::size_t o) {
  auto g = grad_w.row(o);
  for (auto& v : g) v = 0.0;
  double gb = 0.0;
  for (std::size_t b = 0; b < delta.rows(); ++b) {
    const double d = delta(b, o);
    gb += d;
    const auto x = in.row(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] += d * x[i];
    }
  }
  for (auto& v : g) v *= scale;
  grad_b[o] = gb * scale;
}

inline void input_delta_row(const Matrix& delta, const Matrix& w, Matrix& out, std::size_t b) {
  auto y = out.row(b);
  for (auto& v : y) v = 0.0;
  for (std::size_t o = 0; o < w.rows(); ++o) {
    const double d = delta(b, o);
    const auto wo = w.row(o);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += d * wo[i];
    }
  }
}

inline void rmsprop_element(std::span<double> params, std::span<const double> grads, std::span<double> cache,
                            double lr, double rho, double eps, std::size_t k) {
  const double g = grads[k];
  cache[k] = rho * cache[k] + (1.0 - rho) * g * g;
  params[k] -= lr * g / (std::sqrt(cache[k]) + eps);
}

}  // namespace

namespace serial {

void affine(const Matrix& in, const Matrix& w, std::span<const double> bias, Matrix& out) {
  check_affine(in, w, bias, out);
  for (std::size_t b = 0; b < in.rows(); ++b) affine_row(in, w, bias, out, b);
}

void weight_grad(const Matrix& delta, const Matrix& in, double scale, Matrix& grad_w, std::span<double> grad_b) {
  check_weight_grad(delta, in, grad_w, grad_b);
  for (std::size_t o = 0; o < delta.cols(); ++o) weight_grad_row(delta, in, scale, grad_w, grad_b, o);
}

void input_delta(const Matrix& delta, const Matrix& w, Matrix& out) {
  check_input_delta(delta, w, out);
  for (std::size_t b = 0; b < delta.rows(); ++b) input_delta_row(delta, w, out, b);
}

void rmsprop_update(std::span<double> params, std::span<const double> grads, std::span<double> cache,
                    double learning_rate, double rho, double epsilon) {
  check_rmsprop(params, grads, cache);
  for (std::size_t k = 0; k < params.size(); ++k) {
    rmsprop_element(params, grads, cache, learning_rate, rho, epsilon, k);
  }
}

}  // namespace serial

namespace parallel {

void affine(const Matrix& in, const Matrix& w, std::span<const double> bias, Matrix& out) {
  check_affine(in, w, bias, out);
  const auto rows = static_cast<std::ptrdiff_t>(in.rows());
  [[maybe_unused]] const bool big = in.rows() * w.size() >= kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t b = 0; b < rows; ++b) {
    affine_row(in, w, bias, out, static_cast<std::size_t>(b));
  }
}

void weight_grad(const Matrix& delta, const Matrix& in, double scale, Matrix& grad_w, std::span<double> grad_b) {
  check_weight_grad(delta, in, grad_w, grad_b);
  const auto outs = static_cast<std::ptrdiff_t>(delta.cols());
  [[maybe_unused]] const bool big = delta.size() * in.cols() >= kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t o = 0; o < outs; ++o) {
    weight_grad_row(delta, in, scale, grad_w, grad_b, static_cast<std::size_t>(o));
  }
}

void input_delta(const Matrix& delta, const Matrix& w, Matrix& out) {
  check_input_delta(delta, w, out);
  const auto rows = static_cast<std::ptrdiff_t>(delta.rows());
  [[maybe_unused]] const bool big = delta.rows() * w.size() >= kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t b = 0; b < rows; ++b) {
    input_delta_row(delta, w, out, static_cast<std::size_t>(b));
  }
}

void rmsprop_update(std::span<double> params, std::span<const double> grads, std::span<double> cache,
                    double learning_rate, double rho, double epsilon) {
  check_rmsprop(params, grads, cache);
  const auto n = static_cast<std::ptrdiff_t>(params.size());
  [[maybe_unused]] const bool big = params.size() >= kParallelWork;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    rmsprop_element(params, grads, cache, learning_rate, rho, epsilon, static_cast<std::size_t>(k));
  }
}

}  // namespace parallel

int max_threads() {
#ifdef RELMTL_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace relmtl::kernels
