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

#include "relmtl/logreg.hpp"
#include "relmtl/metrics.hpp"
#include "support/gradcheck.hpp"
#include "support/synthetic.hpp"

using namespace relmtl;

TEST_CASE("logreg separates 2-D data with lambda = 1") {
  Rng rng(3);
  const std::vector<double> dir{0.6, 0.8};
  const auto set = testing::separable_set(200, dir, 1.0, rng);
  eval::LogRegConfig cfg;
  cfg.l2_lambda = 1.0;
  const auto r = eval::train_logreg(set.x, set.y, 2, cfg);
  CHECK(eval::accuracy(eval::logreg_predict(r.model, set.x), set.y) >= 0.95);
}

TEST_CASE("logreg with a huge penalty predicts the prior") {
  Rng rng(4);
  const std::vector<double> dir{1.0, 0.0};
  auto set = testing::separable_set(300, dir, 0.5, rng);
  eval::LogRegConfig cfg;
  cfg.l2_lambda = 1e6;
  const auto r = eval::train_logreg(set.x, set.y, 2, cfg);
  for (double w : r.model.weights.values()) CHECK(std::abs(w) < 1e-4);
  double prior0 = 0.0;
  for (auto y : set.y) prior0 += y == 0 ? 1.0 : 0.0;
  prior0 /= static_cast<double>(set.y.size());
  const auto p = eval::logreg_predict_proba(r.model, set.x);
  for (std::size_t i = 0; i < p.rows(); ++i) CHECK(p(i, 0) == doctest::Approx(prior0).epsilon(1e-3));
}

TEST_CASE("logreg gradient matches finite differences") {
  Rng rng(5);
  Matrix x(20, 4);
  for (double& v : x.values()) v = rng.uniform(-2, 2);
  std::vector<std::size_t> y(20);
  for (auto& v : y) v = rng.index(3);
  eval::LogRegModel m{Matrix(3, 4), std::vector<double>(3), 0.3};
  for (double& v : m.weights.values()) v = rng.uniform(-1, 1);
  for (double& v : m.bias) v = rng.uniform(-1, 1);
  const auto [gw, gb] = eval::logreg_gradient(m, x, y);
  const double h = 1e-4;
  const auto probe = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = eval::logreg_objective(m, x, y);
    param = saved - h;
    const double down = eval::logreg_objective(m, x, y);
    param = saved;
    CHECK(testing::relative_error(analytic, (up - down) / (2 * h)) < 1e-4);
  };
  for (std::size_t k = 0; k < m.weights.size(); ++k) probe(m.weights.values()[k], gw.values()[k]);
  for (std::size_t k = 0; k < m.bias.size(); ++k) probe(m.bias[k], gb[k]);
}

TEST_CASE("logreg: determinism and default penalty") {
  Rng rng(6);
  const std::vector<double> dir{0.0, 1.0, 0.0};
  const auto set = testing::separable_set(50, dir, 0.5, rng);
  const auto a = eval::train_logreg(set.x, set.y, 2);
  const auto b = eval::train_logreg(set.x, set.y, 2);
  CHECK(bitwise_equal(a.model.weights, b.model.weights));
  CHECK(a.model.l2_lambda == doctest::Approx(1.0 / 50.0));
  CHECK(a.gradient_norm >= 0.0);
  CHECK(a.objective == doctest::Approx(eval::logreg_objective(a.model, set.x, set.y)));

  const std::vector<std::size_t> one_class(50, 0);
  CHECK_THROWS(eval::train_logreg(set.x, one_class, 2));
}
