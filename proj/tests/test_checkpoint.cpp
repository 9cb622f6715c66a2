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

#include <sstream>

#include "relmtl/checkpoint.hpp"
#include "relmtl/error.hpp"
#include "relmtl/rng.hpp"

using namespace relmtl;

namespace {

bool same_model(const mtl::MultiTaskModel& a, const mtl::MultiTaskModel& b) {
  if (a.input_dim != b.input_dim || a.trunk.size() != b.trunk.size() || a.heads.size() != b.heads.size()) {
    return false;
  }
  const auto same_layer = [](const nn::DenseLayer& x, const nn::DenseLayer& y, const nn::LayerOptimizer& ox,
                             const nn::LayerOptimizer& oy) {
    return x.activation == y.activation && bitwise_equal(x.weights, y.weights) &&
           bitwise_equal(x.biases, y.biases) && bitwise_equal(ox.weights.cache, oy.weights.cache) &&
           bitwise_equal(ox.biases.cache, oy.biases.cache) &&
           ox.weights.config.learning_rate == oy.weights.config.learning_rate;
  };
  for (std::size_t l = 0; l < a.trunk.size(); ++l) {
    if (!same_layer(a.trunk[l], b.trunk[l], a.trunk_optimizer[l], b.trunk_optimizer[l])) return false;
  }
  for (std::size_t h = 0; h < a.heads.size(); ++h) {
    if (!same_layer(a.heads[h], b.heads[h], a.head_optimizer[h], b.head_optimizer[h])) return false;
  }
  return true;
}

mtl::MultiTaskModel stepped_model() {
  const std::vector<std::size_t> hidden{5, 4};
  const std::vector<std::size_t> classes{2, 3};
  auto m = mtl::build_model(6, hidden, classes, 17, {0.01, 0.8, 1e-7});
  Rng rng(3);
  Matrix x(4, 6);
  for (double& v : x.values()) v = rng.uniform(-1, 1);
  const std::vector<std::size_t> y{0, 2, 1, 1};
  mtl::train_step(m, 1, x, y);
  return m;
}

}  // namespace

TEST_CASE("checkpoint round-trip is bit-exact") {
  const auto model = stepped_model();
  mtl::TrainConfig cfg;
  cfg.seed = 123456789012345ULL;
  cfg.learning_rate = 0.01;
  std::stringstream s;
  mtl::save_checkpoint(s, model, cfg);
  const auto loaded = mtl::load_checkpoint(s);
  CHECK(same_model(model, loaded.model));
  REQUIRE(loaded.config.has_value());
  CHECK(loaded.config->seed == cfg.seed);
  CHECK(loaded.config->learning_rate == cfg.learning_rate);

  std::stringstream again;
  mtl::save_checkpoint(again, loaded.model, loaded.config);
  std::stringstream first;
  mtl::save_checkpoint(first, model, cfg);
  CHECK(again.str() == first.str());
}

TEST_CASE("checkpoint without a train line") {
  const auto model = stepped_model();
  std::stringstream s;
  mtl::save_checkpoint(s, model);
  const auto loaded = mtl::load_checkpoint(s);
  CHECK(!loaded.config.has_value());
  CHECK(same_model(model, loaded.model));
}

TEST_CASE("malformed checkpoints are rejected with a line number") {
  const auto model = stepped_model();
  std::stringstream s;
  mtl::save_checkpoint(s, model);
  const std::string good = s.str();

  std::istringstream wrong_magic("not a checkpoint\n");
  CHECK_THROWS_AS(mtl::load_checkpoint(wrong_magic), FormatError);

  std::istringstream truncated(good.substr(0, good.size() / 2));
  CHECK_THROWS_AS(mtl::load_checkpoint(truncated), FormatError);

  std::string corrupt = good;
  const auto pos = corrupt.find("weights ");
  corrupt.replace(pos + 8, 1, "x");
  std::istringstream bad(corrupt);
  try {
    mtl::load_checkpoint(bad);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() > 0);
  }
}
