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

#ifndef RELMTL_KERNELS_HPP_
#define RELMTL_KERNELS_HPP_

#include <span>

#include "relmtl/matrix.hpp"

// Dense-layer inner loops.
//
// Every kernel exists twice: `serial::` is the plain reference and
// `parallel::` splits independent output elements across OpenMP threads.
// Each output element is accumulated by exactly one thread in the same
// order as the serial code, so both versions give bitwise-identical
// results for any thread count. The unqualified functions dispatch to the
// parallel version, which falls back to one thread for small problems.
namespace relmtl::kernels {

namespace serial {

// out(b, o) = sum_i in(b, i) * w(o, i) + bias(o)
void affine(const Matrix& in, const Matrix& w, std::span<const double> bias, Matrix& out);

// grad_w(o, i) = scale * sum_b delta(b, o) * in(b, i); grad_b(o) = scale * sum_b delta(b, o)
void weight_grad(const Matrix& delta, const Matrix& in, double scale, Matrix& grad_w,
                 std::span<double> grad_b);

// out(b, i) = sum_o delta(b, o) * w(o, i)
void input_delta(const Matrix& delta, const Matrix& w, Matrix& out);

// cache = rho * cache + (1 - rho) * g^2; p -= lr * g / (sqrt(cache) + eps)
void rmsprop_update(std::span<double> params, std::span<const double> grads, std::span<double> cache,
                    double learning_rate, double rho, double epsilon);

}  // namespace serial

namespace parallel {

void affine(const Matrix& in, const Matrix& w, std::span<const double> bias, Matrix& out);
void weight_grad(const Matrix& delta, const Matrix& in, double scale, Matrix& grad_w,
                 std::span<double> grad_b);
void input_delta(const Matrix& delta, const Matrix& w, Matrix& out);
void rmsprop_update(std::span<double> params, std::span<const double> grads, std::span<double> cache,
                    double learning_rate, double rho, double epsilon);

}  // namespace parallel

using parallel::affine;
using parallel::input_delta;
using parallel::rmsprop_update;
using parallel::weight_grad;

/// Number of threads the parallel kernels may use (1 without OpenMP).
int max_threads();

}  // namespace relmtl::kernels

#endif  // RELMTL_KERNELS_HPP_
