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

// Serial reference vs OpenMP kernels. Shapes: the first layer of the
// default network (batch 32, 600 -> 50) and a larger layer where threading
// pays off.

#include <benchmark/benchmark.h>

#include <vector>

#include "relmtl/kernels.hpp"
#include "relmtl/matrix.hpp"
#include "relmtl/rng.hpp"

namespace {

using relmtl::Matrix;
namespace k = relmtl::kernels;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  relmtl::Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

// Args: batch, inputs, outputs.
struct Layer {
  explicit Layer(const benchmark::State& s)
      : batch(static_cast<std::size_t>(s.range(0))),
        in(random_matrix(batch, static_cast<std::size_t>(s.range(1)), 1)),
        w(random_matrix(static_cast<std::size_t>(s.range(2)), static_cast<std::size_t>(s.range(1)), 2)),
        delta(random_matrix(batch, static_cast<std::size_t>(s.range(2)), 3)),
        bias(w.rows(), 0.1),
        out(batch, w.rows()),
        grad_w(w.rows(), w.cols()),
        grad_b(w.rows()),
        back(batch, w.cols()) {}

  std::size_t batch;
  Matrix in, w, delta;
  std::vector<double> bias;
  Matrix out, grad_w;
  std::vector<double> grad_b;
  Matrix back;
};

template <auto Affine>
void BM_affine(benchmark::State& state) {
  Layer l(state);
  for (auto _ : state) {
    Affine(l.in, l.w, l.bias, l.out);
    benchmark::DoNotOptimize(l.out.values().data());
  }
}

template <auto WeightGrad>
void BM_weight_grad(benchmark::State& state) {
  Layer l(state);
  for (auto _ : state) {
    WeightGrad(l.delta, l.in, 1.0 / static_cast<double>(l.batch), l.grad_w, l.grad_b);
    benchmark::DoNotOptimize(l.grad_w.values().data());
  }
}

template <auto InputDelta>
void BM_input_delta(benchmark::State& state) {
  Layer l(state);
  for (auto _ : state) {
    InputDelta(l.delta, l.w, l.back);
    benchmark::DoNotOptimize(l.back.values().data());
  }
}

template <auto Update>
void BM_rmsprop(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto params = random_matrix(1, n, 4);
  const auto grads = random_matrix(1, n, 5);
  std::vector<double> cache(n, 0.0);
  for (auto _ : state) {
    Update(params.values(), grads.values(), cache, 1e-3, 0.9, 1e-8);
    benchmark::DoNotOptimize(params.values().data());
  }
}

void layer_shapes(benchmark::internal::Benchmark* b) {
  b->Args({32, 600, 50})->Args({256, 1024, 1024});
}

}  // namespace

BENCHMARK(BM_affine<k::serial::affine>)->Apply(layer_shapes);
BENCHMARK(BM_affine<k::parallel::affine>)->Apply(layer_shapes);
BENCHMARK(BM_weight_grad<k::serial::weight_grad>)->Apply(layer_shapes);
BENCHMARK(BM_weight_grad<k::parallel::weight_grad>)->Apply(layer_shapes);
BENCHMARK(BM_input_delta<k::serial::input_delta>)->Apply(layer_shapes);
BENCHMARK(BM_input_delta<k::parallel::input_delta>)->Apply(layer_shapes);
BENCHMARK(BM_rmsprop<k::serial::rmsprop_update>)->Arg(32804)->Arg(1 << 20);
BENCHMARK(BM_rmsprop<k::parallel::rmsprop_update>)->Arg(32804)->Arg(1 << 20);
BENCHMARK_MAIN();
