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
#include <vector>

#include "relmtl/metrics.hpp"
#include "relmtl/rng.hpp"
#include "support/metric_oracle.hpp"

using namespace relmtl;

using testing::metric_oracle;

TEST_CASE("accuracy examples") {
  const std::vector<std::size_t> g{0, 1, 1, 0};
  CHECK(eval::accuracy(g, g) == 1.0);
  std::vector<std::size_t> gold(10, 0), pred(10, 0);
  for (std::size_t i = 0; i < 10; i += 2) pred[i] = 1;
  CHECK(eval::accuracy(pred, gold) == 0.5);

  // Majority predictor on a 665 / 210 test split.
  std::vector<std::size_t> test(665, 0);
  test.resize(875, 1);
  const std::vector<std::size_t> all_major(875, 0);
  CHECK(eval::accuracy(all_major, test) == doctest::Approx(0.760).epsilon(5e-4));

  const std::vector<std::size_t> empty;
  CHECK_THROWS(eval::accuracy(empty, empty));
  CHECK_THROWS(eval::accuracy(g, std::vector<std::size_t>{0}));
}

TEST_CASE("macro_f1 examples") {
  const std::vector<std::size_t> g{0, 1, 1, 0, 1};
  CHECK(eval::macro_f1(g, g, 2) == 1.0);
  // All-majority prediction at majority fraction p: (2p / (1 + p)) / 2.
  std::vector<std::size_t> gold(76, 0);
  gold.resize(100, 1);
  const std::vector<std::size_t> pred(100, 0);
  const double p = 0.76;
  CHECK(eval::macro_f1(pred, gold, 2) == doctest::Approx(2 * p / (1 + p) / 2));
  CHECK(eval::macro_f1(pred, gold, 2) == doctest::Approx(0.4318).epsilon(1e-4));
}

TEST_CASE("metrics equal the confusion-matrix oracle exhaustively for n <= 6") {
  testing::for_each_small_case([](const auto& pred, const auto& gold, std::size_t k) {
    const auto o = metric_oracle(pred, gold, k);
    REQUIRE(eval::accuracy(pred, gold) == o.accuracy);
    REQUIRE(eval::macro_f1(pred, gold, k) == o.macro_f1);
  });
}

TEST_CASE("metrics equal the confusion-matrix oracle on fuzz cases") {
  Rng rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.index(4);
    const std::size_t n = 1 + rng.index(200);
    std::vector<std::size_t> pred(n), gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.index(k);
      gold[i] = rng.index(k);
    }
    const auto o = metric_oracle(pred, gold, k);
    REQUIRE(eval::accuracy(pred, gold) == o.accuracy);
    REQUIRE(eval::macro_f1(pred, gold, k) == o.macro_f1);
  }
}

TEST_CASE("confusion tally counts") {
  const std::vector<std::size_t> pred{0, 0, 1, 1, 2};
  const std::vector<std::size_t> gold{0, 1, 1, 2, 2};
  const eval::ConfusionTally t(pred, gold, 3);
  CHECK(t.true_positives(1) == 1);
  CHECK(t.false_positives(0) == 1);
  CHECK(t.false_negatives(2) == 1);
  CHECK(t.precision(0) == 0.5);
  CHECK(t.recall(2) == 0.5);
  const std::vector<std::size_t> bad{5};
  const std::vector<std::size_t> one{0};
  CHECK_THROWS(eval::ConfusionTally(bad, one, 3));
}

TEST_CASE("majority classifier") {
  const std::vector<std::size_t> aab{0, 0, 1};
  CHECK(eval::majority_baseline(aab, 2).label() == 0);
  const std::vector<std::size_t> tie{0, 1};
  CHECK(eval::majority_baseline(tie, 2).label() == 0);
  const std::vector<std::size_t> tie_rev{1, 0};
  CHECK(eval::majority_baseline(tie_rev, 2).label() == 0);
  const std::vector<std::size_t> bbba{1, 1, 1, 0};
  CHECK(eval::majority_baseline(bbba, 2).predict(3) == std::vector<std::size_t>{1, 1, 1});

  // Hypernym vs random test split of 486 / 210.
  std::vector<std::size_t> test(486, 0);
  test.resize(696, 1);
  const auto pred = eval::majority_baseline(test, 2).predict(test.size());
  CHECK(eval::accuracy(pred, test) == doctest::Approx(0.698).epsilon(5e-4));
}
