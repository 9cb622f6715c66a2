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

#include <stdexcept>
#include <vector>

#include "relmtl/kernels.hpp"
#include "relmtl/rng.hpp"

using relmtl::Matrix;
using relmtl::Rng;
namespace kernels = relmtl::kernels;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

// Shapes straddle the parallel threshold.
const std::size_t kShapes[][3] = {{1, 1, 1}, {3, 5, 7}, {32, 600, 50}, {257, 300, 129}};

}  // namespace

TEST_CASE("affine: serial and parallel agree bitwise") {
  Rng rng(11);
  for (const auto& s : kShapes) {
    const auto in = random_matrix(s[0], s[1], rng);
    const auto w = random_matrix(s[2], s[1], rng);
    const auto b = random_vector(s[2], rng);
    Matrix a(s[0], s[2]), p(s[0], s[2]);
    kernels::serial::affine(in, w, b, a);
    kernels::parallel::affine(in, w, b, p);
    CHECK(relmtl::bitwise_equal(a, p));
  }
}

TEST_CASE("affine matches a hand-computed product") {
  const auto in = Matrix::from_rows({{1, 2}, {3, 4}});
  const auto w = Matrix::from_rows({{1, 0}, {1, 1}, {0, -1}});
  const std::vector<double> b{0.5, 0, 1};
  Matrix out(2, 3);
  kernels::affine(in, w, b, out);
  CHECK(out == Matrix::from_rows({{1.5, 3, -1}, {3.5, 7, -3}}));
}

TEST_CASE("weight_grad and input_delta: serial and parallel agree bitwise") {
  Rng rng(12);
  for (const auto& s : kShapes) {
    const auto delta = random_matrix(s[0], s[2], rng);
    const auto in = random_matrix(s[0], s[1], rng);
    const auto w = random_matrix(s[2], s[1], rng);
    Matrix gw_a(s[2], s[1]), gw_p(s[2], s[1]);
    std::vector<double> gb_a(s[2]), gb_p(s[2]);
    kernels::serial::weight_grad(delta, in, 0.25, gw_a, gb_a);
    kernels::parallel::weight_grad(delta, in, 0.25, gw_p, gb_p);
    CHECK(relmtl::bitwise_equal(gw_a, gw_p));
    CHECK(relmtl::bitwise_equal(gb_a, gb_p));

    Matrix d_a(s[0], s[1]), d_p(s[0], s[1]);
    kernels::serial::input_delta(delta, w, d_a);
    kernels::parallel::input_delta(delta, w, d_p);
    CHECK(relmtl::bitwise_equal(d_a, d_p));
  }
}

TEST_CASE("weight_grad: scaled sum of outer products") {
  const auto delta = Matrix::from_rows({{1}, {2}});
  const auto in = Matrix::from_rows({{1, 1}, {3, -1}});
  Matrix gw(1, 2);
  std::vector<double> gb(1);
  kernels::weight_grad(delta, in, 0.5, gw, gb);
  CHECK(gw == Matrix::from_rows({{3.5, -0.5}}));
  CHECK(gb[0] == 1.5);
}

TEST_CASE("rmsprop_update: serial and parallel agree bitwise") {
  Rng rng(13);
  for (std::size_t n : {1u, 17u, 40000u}) {
    auto params_a = random_vector(n, rng);
    auto params_p = params_a;
    const auto grads = random_vector(n, rng);
    std::vector<double> cache_a(n, 0.0), cache_p(n, 0.0);
    for (int step = 0; step < 3; ++step) {
      kernels::serial::rmsprop_update(params_a, grads, cache_a, 0.001, 0.9, 1e-8);
      kernels::parallel::rmsprop_update(params_p, grads, cache_p, 0.001, 0.9, 1e-8);
    }
    CHECK(relmtl::bitwise_equal(params_a, params_p));
    CHECK(relmtl::bitwise_equal(cache_a, cache_p));
  }
}

TEST_CASE("kernels reject mismatched shapes") {
  Matrix in(2, 3), w(4, 2), out(2, 4);
  std::vector<double> b(4);
  CHECK_THROWS_AS(kernels::affine(in, w, b, out), std::invalid_argument);
}
